#include "shearflow/series.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace shearflow {

namespace {

constexpr const char* kHeader = "t,t_bracket,U1,U2,dU1,dU2,J,J1,J2,intU2,iintU2,energy,enstrophy";
constexpr int kColumns = 13;

std::array<double, kColumns> row_values(const SeriesRow& r) {
    return {r.t, r.t_bracket, r.U1, r.U2, r.dU1, r.dU2, r.J,
            r.J1, r.J2, r.intU2, r.iintU2, r.energy, r.enstrophy};
}

SeriesRow row_from_values(const std::array<double, kColumns>& v) {
    SeriesRow r;
    r.t = v[0];
    r.t_bracket = v[1];
    r.U1 = v[2];
    r.U2 = v[3];
    r.dU1 = v[4];
    r.dU2 = v[5];
    r.J = v[6];
    r.J1 = v[7];
    r.J2 = v[8];
    r.intU2 = v[9];
    r.iintU2 = v[10];
    r.energy = v[11];
    r.enstrophy = v[12];
    return r;
}

}  // namespace

void finalize_series(PerturbationSeries& s) {
    double acc = 0.0, iacc = 0.0;
    double prev_t = 0.0, prev_v = 0.0;
    for (std::size_t i = 0; i < s.rows.size(); ++i) {
        auto& r = s.rows[i];
        r.t_bracket = std::sqrt(1.0 + r.t * r.t);
        if (i > 0) {
            if (r.t < prev_t) throw std::invalid_argument("finalize_series: rows not sorted in t");
            double h = r.t - prev_t;
            double new_acc = acc + 0.5 * h * (prev_v + r.dU2);
            iacc += 0.5 * h * (acc + new_acc);
            acc = new_acc;
        }
        r.intU2 = acc;
        r.iintU2 = iacc;
        prev_t = r.t;
        prev_v = r.dU2;
    }
}

std::string format_double(double v) {
    char buf[32];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc()) throw std::runtime_error("format_double: conversion failed");
    return std::string(buf, p);
}

std::string series_to_csv(const PerturbationSeries& s) {
    std::string out = kHeader;
    out += '\n';
    for (const auto& r : s.rows) {
        auto vals = row_values(r);
        for (int c = 0; c < kColumns; ++c) {
            if (c) out += ',';
            out += format_double(vals[c]);
        }
        out += '\n';
    }
    return out;
}

void write_series_csv(const std::filesystem::path& path, const PerturbationSeries& s) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("write_series_csv: cannot open " + path.string());
    f << series_to_csv(s);
    if (!f) throw std::runtime_error("write_series_csv: write failed for " + path.string());
}

PerturbationSeries read_series_csv(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("read_series_csv: cannot open " + path.string());
    std::string line;
    if (!std::getline(f, line)) throw std::runtime_error("read_series_csv: empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kHeader)
        throw std::runtime_error("read_series_csv: unexpected header '" + line + "'");
    PerturbationSeries s;
    while (std::getline(f, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::array<double, kColumns> vals{};
        const char* p = line.data();
        const char* end = line.data() + line.size();
        for (int c = 0; c < kColumns; ++c) {
            if (c) {
                if (p >= end || *p != ',')
                    throw std::runtime_error("read_series_csv: malformed row '" + line + "'");
                ++p;
            }
            auto [q, ec] = std::from_chars(p, end, vals[c]);
            if (ec != std::errc())
                throw std::runtime_error("read_series_csv: bad number in row '" + line + "'");
            p = q;
        }
        if (p != end) throw std::runtime_error("read_series_csv: trailing data in row '" + line + "'");
        s.rows.push_back(row_from_values(vals));
    }
    return s;
}

}  // namespace shearflow

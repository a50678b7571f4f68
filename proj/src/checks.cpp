#include "shearflow/checks.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace shearflow {

namespace {

double field_value(const SeriesRow& r, SeriesField f) {
    switch (f) {
        case SeriesField::U1: return r.U1;
        case SeriesField::U2: return r.U2;
        case SeriesField::dU1: return r.dU1;
        case SeriesField::dU2: return r.dU2;
    }
    return 0.0;
}

// track the sample with the least slack; margin is (bound - value) for upper
// bounds and (value - bound) for lower bounds, both relative where sensible
struct Worst {
    double t = 0.0;
    double margin = std::numeric_limits<double>::infinity();
    void update(double tt, double m) {
        if (m < margin) {
            margin = m;
            t = tt;
        }
    }
};

}  // namespace

std::vector<CheckResult> check_gronwall_chain(const PerturbationSeries& s, double sup_fprime,
                                              double norm_uin, double tau) {
    Worst wa, wb, wbl, wc;
    double sup_dU1 = 0.0;
    double int_dU1 = 0.0;
    double prev_t = 0.0, prev_dU1 = 0.0;
    bool first = true;
    for (const auto& r : s.rows) {
        if (!first) int_dU1 += 0.5 * (r.t - prev_t) * (prev_dU1 + r.dU1);
        prev_t = r.t;
        prev_dU1 = r.dU1;
        first = false;
        sup_dU1 = std::max(sup_dU1, r.dU1);

        double scale_a = std::max(r.intU2, 1e-14);
        wa.update(r.t, ((1.0 + tau) * r.intU2 - r.J2) / scale_a);

        double bound_b = sup_fprime * r.iintU2 + int_dU1;
        double scale_b = std::max(bound_b, 1e-14);
        wb.update(r.t, ((1.0 + tau) * bound_b - r.J1) / scale_b);

        double bound_bl = sup_fprime * r.iintU2 + r.t * sup_dU1;
        double scale_bl = std::max(bound_bl, 1e-14);
        wbl.update(r.t, ((1.0 + tau) * bound_bl - r.J1) / scale_bl);

        double floor_c = (1.0 - tau) * norm_uin * r.t;
        double scale_c = std::max(norm_uin * r.t, 1e-14);
        wc.update(r.t, (r.J - floor_c) / scale_c);
    }
    std::vector<CheckResult> out;
    out.push_back({"gronwall_a", wa.margin >= 0.0, wa.t, wa.margin});
    out.push_back({"gronwall_b", wb.margin >= 0.0, wb.t, wb.margin});
    out.push_back({"gronwall_b_loose", wbl.margin >= 0.0, wbl.t, wbl.margin});
    out.push_back({"misiolek_c", wc.margin >= 0.0, wc.t, wc.margin});
    return out;
}

IndicatorResult theorem_indicator(const PerturbationSeries& s, double sigma, double epsilon) {
    if (sigma <= 0.0) throw std::invalid_argument("theorem_indicator: sigma must be positive");
    IndicatorResult res;
    res.inf_d = std::numeric_limits<double>::infinity();
    for (const auto& r : s.rows) {
        double d = std::max(r.U1 / sigma, r.U2 * std::pow(r.t_bracket, 1.0 + epsilon) / sigma);
        if (d < res.inf_d) {
            res.inf_d = d;
            res.argmin_t = r.t;
        }
    }
    if (s.rows.empty()) res.inf_d = 0.0;
    return res;
}

CheckResult check_energy_remark(const PerturbationSeries& s, double norm_u0, double norm_uinf) {
    double floor = std::fabs(norm_u0 - norm_uinf) - 1e-9;
    Worst w;
    for (const auto& r : s.rows) {
        double normU = std::hypot(r.U1, r.U2);
        w.update(r.t, normU - floor);
    }
    bool pass = w.margin >= 0.0;
    if (s.rows.empty()) pass = false;
    return {"energy_remark", pass, w.t, w.margin};
}

CheckResult cross_reference(const IndicatorResult& ind, const std::vector<CheckResult>& chain,
                            double d_floor) {
    const CheckResult* c = nullptr;
    for (const auto& r : chain)
        if (r.check_name == "misiolek_c") c = &r;
    if (!c) throw std::invalid_argument("cross_reference: chain report lacks misiolek_c");
    bool d_holds = ind.inf_d >= d_floor;
    bool c_violated = !c->pass;
    return {"theorem_disjunction", d_holds || c_violated, ind.argmin_t, ind.inf_d - d_floor};
}

SeriesField series_field_from_string(const std::string& s) {
    if (s == "U1") return SeriesField::U1;
    if (s == "U2") return SeriesField::U2;
    if (s == "dU1") return SeriesField::dU1;
    if (s == "dU2") return SeriesField::dU2;
    throw std::invalid_argument("unknown series field '" + s + "' (want U1, U2, dU1 or dU2)");
}

std::string to_string(SeriesField f) {
    switch (f) {
        case SeriesField::U1: return "U1";
        case SeriesField::U2: return "U2";
        case SeriesField::dU1: return "dU1";
        case SeriesField::dU2: return "dU2";
    }
    return "";
}

FitResult fit_decay(const PerturbationSeries& s, SeriesField field, double t_a, double t_b) {
    if (!(t_a < t_b)) throw std::invalid_argument("fit_decay: degenerate window");
    std::vector<double> xs, ys;
    for (const auto& r : s.rows) {
        if (r.t < t_a - 1e-12 || r.t > t_b + 1e-12) continue;
        double v = field_value(r, field);
        if (v <= 1e-14)
            throw std::invalid_argument("fit_decay: norm below 1e-14 at t = " +
                                        std::to_string(r.t) + ", fit refused");
        xs.push_back(std::log(r.t_bracket));
        ys.push_back(std::log(v));
    }
    if (xs.size() < 8)
        throw std::invalid_argument("fit_decay: fewer than 8 samples in window");
    double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    double det = n * sxx - sx * sx;
    if (det <= 0.0) throw std::invalid_argument("fit_decay: degenerate window");
    double alpha = (n * sxy - sx * sy) / det;
    double beta = (sy - alpha * sx) / n;
    double rss = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double e = ys[i] - (alpha * xs[i] + beta);
        rss += e * e;
    }
    return {alpha, std::sqrt(rss / n), static_cast<int>(xs.size())};
}

}  // namespace shearflow

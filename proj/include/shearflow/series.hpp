#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace shearflow {

// one sample of a sweep cell; norms are L2, J* live on the label grid
struct SeriesRow {
    double t = 0.0;
    double t_bracket = 1.0;  // (1 + t^2)^{1/2}
    double U1 = 0.0;         // ||u1 - u_inf,1|| of the nonlinear run
    double U2 = 0.0;
    double dU1 = 0.0;  // ||d_sigma U1|| of the linearized run
    double dU2 = 0.0;
    double J = 0.0;
    double J1 = 0.0;
    double J2 = 0.0;
    double intU2 = 0.0;   // running integral of dU2
    double iintU2 = 0.0;  // iterated integral of dU2
    double energy = 0.0;
    double enstrophy = 0.0;
};

struct PerturbationSeries {
    std::vector<SeriesRow> rows;
};

// fill t_bracket and the running trapezoid integrals of dU2; rows must be
// sorted in t
void finalize_series(PerturbationSeries& s);

std::string format_double(double v);  // shortest round-trip decimal

std::string series_to_csv(const PerturbationSeries& s);
void write_series_csv(const std::filesystem::path& path, const PerturbationSeries& s);
PerturbationSeries read_series_csv(const std::filesystem::path& path);

}  // namespace shearflow

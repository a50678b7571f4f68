#pragma once

#include <string>
#include <vector>

#include "shearflow/series.hpp"

namespace shearflow {

struct CheckResult {
    std::string check_name;
    bool pass = false;
    double worst_t = 0.0;
    double margin = 0.0;  // positive means slack, negative means violated by that much
};

// (a) ||J2|| <= (1+tau)*intU2
// (b) ||J1|| <= (1+tau)*(sup|f'|*iintU2 + int dU1), plus the looser t*sup form
// (c) ||J||  >= (1-tau)*norm_uin*t
// constant is exactly 1; tau covers discretization only
std::vector<CheckResult> check_gronwall_chain(const PerturbationSeries& s, double sup_fprime,
                                              double norm_uin, double tau = 0.02);

struct IndicatorResult {
    double inf_d = 0.0;
    double argmin_t = 0.0;
};

// D(sigma,t) = max(U1/sigma, U2*<t>^{1+eps}/sigma), minimized over samples
IndicatorResult theorem_indicator(const PerturbationSeries& s, double sigma, double epsilon);

// ||U(t)|| >= | ||u0|| - ||u_inf|| | - 1e-9 at every sample
CheckResult check_energy_remark(const PerturbationSeries& s, double norm_u0, double norm_uinf);

// at least one of {inf_t D >= d_floor, chain (c) violated} per cell
CheckResult cross_reference(const IndicatorResult& ind, const std::vector<CheckResult>& chain,
                            double d_floor);

enum class SeriesField { U1, U2, dU1, dU2 };
SeriesField series_field_from_string(const std::string& s);
std::string to_string(SeriesField f);

struct FitResult {
    double alpha = 0.0;     // slope of log(norm) vs log(<t>)
    double residual = 0.0;  // rms of fit residuals
    int samples = 0;
};

// informational only, never a gate
FitResult fit_decay(const PerturbationSeries& s, SeriesField field, double t_a, double t_b);

}  // namespace shearflow

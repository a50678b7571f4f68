#pragma once
// Linearization of the Euler equation around u_inf = (f_m(x2), 0):
//   d/dt omega' = -f_m(x2) d1(omega') + f''_m(x2) u'_2,
// the equation solved by the sigma-derivative of the perturbed flow at
// sigma = 0. Same pseudo-spectral RK4 machinery as the nonlinear solver.

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "shearflow/grid.hpp"
#include "shearflow/profile.hpp"

namespace shearflow {

struct LinearState {
    SpectralField omega_prime;  // zero mean, Hermitian
    std::shared_ptr<const ShearProfile> profile;
    double t = 0.0;
};

SpectralField linear_rhs(const LinearState& s);

// One RK4 step; same CFL policy as the nonlinear solver with |u| taken as
// max(sup|f_m|, |u'|_inf).
LinearState linear_step(const LinearState& s, double dt);
double linear_cfl_dt(const LinearState& s, double c = 0.5, double dt_max = 1.0);

struct LinearSample {
    double t;
    double norm_u1;  // ||dsigma U_1||
    double norm_u2;  // ||dsigma U_2||
};

std::vector<LinearSample> run_linear(const LinearState& s0, double T,
                                     std::span<const double> sample_times, double cfl_factor = 0.5);

// Streaming variant: lands exactly on `landings`, observer sees the state.
void run_linear_streamed(LinearState& s, std::span<const double> landings,
                         const std::function<void(const LinearState&)>& observer,
                         double cfl_factor = 0.5, double dt_max = 1.0);

// Incremental form, buffers kept across calls; the profile is fixed at
// construction and must match the states passed in.
class LinearAdvancer {
  public:
    LinearAdvancer(const TorusGrid& g, std::shared_ptr<const ShearProfile> profile,
                   double cfl_factor = 0.5, double dt_max = 1.0);
    ~LinearAdvancer();
    LinearAdvancer(LinearAdvancer&&) noexcept;
    void advance(LinearState& s, double target);

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// Closed-form Orr ratio ||u'_2(t)|| / ||u'_2(0)|| for a single mode under the
// exact Couette shear: (k1^2 + k2^2) / (k1^2 + (k2 + t k1)^2). k1 must be
// nonzero (no tilting otherwise).
double orr_oracle(double k1, double k2, double t);

// Transported-vorticity evaluator x -> omega0(x1 - t f_m(x2), x2); exact
// solution while f''_m = 0 on the support of omega0.
std::function<double(Vec2)> orr_transported(const ShearProfile& p,
                                            std::function<double(Vec2)> omega0, double t);

}  // namespace shearflow

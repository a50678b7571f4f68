#pragma once
// Dealiased pseudo-spectral solver for 2D incompressible Euler in vorticity
// form, omega_t + u.grad(omega) = 0, with RK4 stepping and exact landing on
// requested sample times.

#include <filesystem>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "shearflow/grid.hpp"
#include "shearflow/profile.hpp"

namespace shearflow {

struct FlowState {
    SpectralField omega;  // zero mode kept at 0
    Vec2 mean;            // mean velocity, constant along trajectories
    double t = 0.0;
};

struct Diagnostics {
    double energy = 0.0;       // 0.5 * ||u||^2, mean included
    double enstrophy = 0.0;    // 0.5 * ||omega||^2
    double palinstrophy = 0.0; // 0.5 * ||grad omega||^2
    double omega_min = 0.0;
    double omega_max = 0.0;
    double divergence_residual = 0.0;
    double tail_enstrophy_fraction = 0.0;  // enstrophy share of the top-third shell
    bool tail_warning = false;             // fraction > 1e-8: cascade reaching the grid
};

class BlowUpError : public std::runtime_error {
  public:
    BlowUpError(double last_valid_t)
        : std::runtime_error("solution lost smoothness (non-finite coefficients) after t = " +
                             std::to_string(last_valid_t)),
          last_valid_t(last_valid_t) {}
    double last_valid_t;
};

// d(omega)/dt = -dealias(u . grad omega); the mean never changes.
SpectralField rhs(const FlowState& s);

// One RK4 step; throws std::domain_error if dt exceeds cfl_dt(s).
FlowState step(const FlowState& s, double dt);

// c * min(dx1, dx2) / max(|u|_inf, 1e-12), capped at dt_max.
double cfl_dt(const FlowState& s, double c = 0.5, double dt_max = 1.0);

Diagnostics diagnostics(const FlowState& s);

std::vector<std::pair<FlowState, Diagnostics>> run(const FlowState& s0, double T,
                                                   std::span<const double> sample_times,
                                                   double cfl_factor = 0.5);

// Streaming engine behind run(): advances the state in place, landing exactly
// on each time in `landings` (sorted, >= s.t) and invoking the observer there.
// Throws BlowUpError when coefficients go non-finite.
void run_streamed(FlowState& s, std::span<const double> landings,
                  const std::function<void(const FlowState&)>& observer, double cfl_factor = 0.5,
                  double dt_max = 1.0);

// Incremental form of run_streamed, for drivers that interleave several
// trajectories: work buffers and the CFL velocity bound persist across calls.
class EulerAdvancer {
  public:
    explicit EulerAdvancer(const TorusGrid& g, double cfl_factor = 0.5, double dt_max = 1.0);
    ~EulerAdvancer();
    EulerAdvancer(EulerAdvancer&&) noexcept;
    void advance(FlowState& s, double target);  // lands exactly on target

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// state assembly
FlowState shear_state(const ShearProfile& p, const TorusGrid& g);

// checkpoints: binary ("SHWCKPT1" magic, little-endian doubles, row-major
// re/im pairs) or CSV (header comment with n1,n2,m,t,mean; one "re,im" row
// per coefficient). read_checkpoint detects the format.
void write_checkpoint(const std::filesystem::path& file, const FlowState& s, bool binary = true);
FlowState read_checkpoint(const std::filesystem::path& file);

}  // namespace shearflow

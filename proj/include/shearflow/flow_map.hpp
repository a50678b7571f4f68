#pragma once
// Lagrangian flow maps eta(t,a) = a + d(t,a) on a uniform label grid, with
// unwrapped displacements (winding kept), the Jacobi field J = d/dsigma eta
// at sigma = 0, and the sigma finite-difference route.

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "shearflow/grid.hpp"
#include "shearflow/interpolant.hpp"
#include "shearflow/profile.hpp"

namespace shearflow {

struct LabelGrid {
    int p1 = 0, p2 = 0;
    int m = 1;
    double da1() const { return 2.0 / p1; }
    double da2() const { return 2.0 * m / p2; }
    double cell_area() const { return 4.0 * m / (static_cast<double>(p1) * p2); }
    std::size_t size() const { return static_cast<std::size_t>(p1) * p2; }
    Vec2 label(int i, int j) const { return {2.0 * i / p1, 2.0 * m * j / p2}; }
    bool operator==(const LabelGrid&) const = default;
};

LabelGrid make_label_grid(int p1, int p2, int m);

struct FlowMap {
    LabelGrid labels;
    std::vector<Vec2> d;  // displacement, row-major i*p2+j
    double t = 0.0;
};

FlowMap initial_flow_map(const LabelGrid& labels);  // d = 0, t = 0

struct JacobiField {
    LabelGrid labels;
    std::vector<Vec2> J;
    double t = 0.0;
};

JacobiField initial_jacobi(const LabelGrid& labels);  // J(0) = 0

// Velocity (or dsigma-U) fields sampled in time; eval fills u1,u2 at the given
// ambient positions (periodic wrap handled internally).
class VelocityProvider {
  public:
    virtual ~VelocityProvider() = default;
    virtual void eval(double t, std::span<const Vec2> pos, std::span<double> u1,
                      std::span<double> u2) const = 0;
};

// analytic closed-form field (tests, rigid translations, zero fields)
class AnalyticProvider : public VelocityProvider {
  public:
    explicit AnalyticProvider(std::function<Vec2(double, Vec2)> fn) : fn_(std::move(fn)) {}
    void eval(double t, std::span<const Vec2> pos, std::span<double> u1,
              std::span<double> u2) const override;

  private:
    std::function<Vec2(double, Vec2)> fn_;
};

// time-independent field held as interpolants (stationary base flows)
class StationaryProvider : public VelocityProvider {
  public:
    StationaryProvider(const SpectralField& u1, const SpectralField& u2, int pad = 1, int order = 6);
    void eval(double t, std::span<const Vec2> pos, std::span<double> u1,
              std::span<double> u2) const override;

  private:
    PaddedInterpolant i1_, i2_;
};

// ring of time samples pushed by the driving solver; eval at an unavailable
// time is a synchronization error (std::runtime_error)
class SampledProvider : public VelocityProvider {
  public:
    explicit SampledProvider(std::size_t capacity = 4, int pad = 1, int order = 6);
    void push(double t, const SpectralField& u1, const SpectralField& u2);
    bool has(double t) const;
    void eval(double t, std::span<const Vec2> pos, std::span<double> u1,
              std::span<double> u2) const override;

  private:
    struct Entry {
        double t;
        PaddedInterpolant i1, i2;
    };
    std::vector<Entry> ring_;
    std::size_t capacity_;
    int pad_, order_;
};

// RK4 particle step of size dt; provider must supply t, t+dt/2, t+dt.
FlowMap advect(const FlowMap& fm, const VelocityProvider& u, double dt);

// RK4 step of the Jacobi equation along the sigma = 0 geodesic,
//   J1' = f'_m(eta2) J2 + (dsigma U1)(t, eta),  J2' = (dsigma U2)(t, eta),
// with eta the stationary-shear flow map; intermediate positions are
// reconstructed from the profile (eta2 is constant and eta1 is linear in t
// along the base flow). fm must be at the same t as J.
JacobiField jacobi_step(const JacobiField& J, const FlowMap& fm, const VelocityProvider& dsigmaU,
                        const ShearProfile& profile, double dt);

// central difference (d_plus - d_minus) / (2 sigma) on matching label grids
JacobiField fd_jacobi_field(const FlowMap& plus, const FlowMap& minus, double sigma);

double label_l2_norm(const JacobiField& J);
double label_component_norm(const JacobiField& J, int axis);  // axis 1 or 2

// max |det(grad_a eta) - 1| by central differences on the label grid
double volume_det_max_error(const FlowMap& fm);

// slope at 0 of ||J(t)|| by least-squares fit of c1*t + c2*t^2 through the
// origin over samples with 0 < t <= tau; needs at least 4 such samples.
double initial_slope(std::span<const double> times, std::span<const double> norms, double tau);

}  // namespace shearflow

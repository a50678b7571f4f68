#pragma once
// Initial perturbation direction U_in, given as the streamfunction
// psi = A * b((x2-c)/w) * cos(pi k x1) with b the standard C-infinity bump
// exp(-1/(1-s^2)). Divergence-free by construction; ||U_in||_{L2} does not
// depend on m once the bump support [c-w, c+w] fits inside one period.
// k = 0 gives a shear-aligned perturbation (x1-independent U_1 only).

#include <utility>

#include "shearflow/grid.hpp"

namespace shearflow {

struct UinParams {
    double amplitude = 1.0;  // target ||U_in|| when normalize, raw A otherwise
    int k = 1;               // x1 wavenumber factor (>= 0)
    double center = 0.0;     // c
    double width = 1.0;      // w
    bool normalize = true;
};

// bump and derivatives (closed forms)
double bump(double s);
double bump_d1(double s);
double bump_d2(double s);

// ||U_in||_{L2} on any torus with m > |c| + w (1D quadrature, m-independent)
double uin_norm(const UinParams& p);

// raw amplitude A realizing the params (= amplitude/norm(A=1) when normalized)
double uin_amplitude(const UinParams& p);

// pointwise velocity, periodic in both directions (x2 folded to the cell
// around the bump center, period 2m)
Vec2 uin_velocity(const UinParams& p, Vec2 x, int m);

// vorticity curl(U_in) sampled on the grid; mean velocity of U_in is (0,0).
// Throws if the support does not fit: |c| + w >= m.
SpectralField uin_vorticity(const UinParams& p, const TorusGrid& g);

// spectral velocity components (for norms and linear initial data checks)
std::pair<SpectralField, SpectralField> uin_velocity_fields(const UinParams& p, const TorusGrid& g);

}  // namespace shearflow

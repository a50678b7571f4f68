#pragma once
// Spectral-space operations on scalar fields over the anisotropic torus.
//
// Conventions, used everywhere downstream:
//   omega = d1 u2 - d2 u1,  u = (-d2 psi, d1 psi),  omega = Laplace psi.
//   transform_forward divides by n1*n2 so coefficients are Fourier coefficients;
//   l2 norms include the domain area factor: ||f||^2 = 4m * sum |c_k|^2.

#include <span>
#include <utility>
#include <vector>

#include "shearflow/grid.hpp"

namespace shearflow {

SpectralField transform_forward(const TorusGrid& g, std::span<const double> values);
std::vector<double> transform_inverse(const SpectralField& f);

// axis is 1 or 2; Nyquist modes of that axis are zeroed.
SpectralField derivative(const SpectralField& f, int axis);

// sharp 2/3 truncation (modes with |j1| > n1/3 or |j2| > n2/3 dropped)
SpectralField dealias(const SpectralField& f);

// Biot-Savart inversion. The vorticity must have (numerically) zero mean;
// throws std::invalid_argument otherwise. mean_velocity lands in the zero mode
// of the returned components, so norms and energies include it.
std::pair<SpectralField, SpectralField> velocity_from_vorticity(const SpectralField& omega,
                                                                Vec2 mean_velocity = {});

SpectralField curl(const SpectralField& u1, const SpectralField& u2);
double divergence_residual(const SpectralField& u1, const SpectralField& u2);

double l2_norm(const SpectralField& f);
double l2_norm(const SpectralField& u1, const SpectralField& u2);
double l2_norm_diff(const SpectralField& a, const SpectralField& b);
// vector difference norm, ||(a1-b1, a2-b2)||
double l2_norm_diff(const SpectralField& a1, const SpectralField& a2, const SpectralField& b1,
                    const SpectralField& b2);

// exact truncated-Fourier-sum evaluation at arbitrary points (reference path;
// see PaddedInterpolant for the accelerated one)
std::vector<double> eval_at_points(const SpectralField& f, std::span<const Vec2> pts);

// conjugate symmetry c[-k] = conj(c[k]) enforced by averaging; keeps inverse
// transforms real after long chains of stage arithmetic
void enforce_real_symmetry(SpectralField& f);

double mean_value(const SpectralField& f);  // c[0,0].real()

}  // namespace shearflow

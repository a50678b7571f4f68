#include "shearflow/perturbation.hpp"

#include <cmath>
#include <stdexcept>

#include "shearflow/spectral_ops.hpp"

namespace shearflow {

double bump(double s) {
    if (std::fabs(s) >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - s * s));
}

double bump_d1(double s) {
    if (std::fabs(s) >= 1.0) return 0.0;
    double q = 1.0 - s * s;
    return -2.0 * s / (q * q) * bump(s);
}

double bump_d2(double s) {
    if (std::fabs(s) >= 1.0) return 0.0;
    double q = 1.0 - s * s;
    // g = -1/q; b = e^g; b'' = (g'' + g'^2) e^g
    double gp = -2.0 * s / (q * q);
    double gpp = -2.0 / (q * q) - 8.0 * s * s / (q * q * q);
    return (gpp + gp * gp) * bump(s);
}

namespace {

void validate(const UinParams& p) {
    if (p.k < 0) throw std::invalid_argument("U_in: k must be >= 0");
    if (p.width <= 0.0) throw std::invalid_argument("U_in: width must be positive");
}

// integrals of b'^2 and b^2 over [-1,1]; bump is C-infinity with compact
// support, so the trapezoid converges faster than any power
double quad_bump(int which) {
    const int N = 1 << 15;
    double s = 0.0;
    for (int i = 0; i <= N; ++i) {
        double x = -1.0 + 2.0 * i / N;
        double v = which == 0 ? bump(x) : bump_d1(x);
        double w = (i == 0 || i == N) ? 0.5 : 1.0;
        s += w * v * v;
    }
    return s * 2.0 / N;
}

double norm_unit_amplitude(const UinParams& p) {
    static const double Ib2 = quad_bump(0);   // int b^2
    static const double Ipp = quad_bump(1);   // int b'^2
    double w = p.width;
    double kk = M_PI * p.k;
    // int dx1 cos^2(pi k x1) over [0,2): 1 for k>=1, 2 for k=0
    double cx = p.k == 0 ? 2.0 : 1.0;
    return std::sqrt(cx * (Ipp / w + kk * kk * w * Ib2));
}

}  // namespace

double uin_norm(const UinParams& p) {
    validate(p);
    return p.normalize ? p.amplitude : p.amplitude * norm_unit_amplitude(p);
}

double uin_amplitude(const UinParams& p) {
    validate(p);
    return p.normalize ? p.amplitude / norm_unit_amplitude(p) : p.amplitude;
}

Vec2 uin_velocity(const UinParams& p, Vec2 x, int m) {
    double A = uin_amplitude(p);
    double s = std::remainder(x.x2 - p.center, 2.0 * m) / p.width;
    double kk = M_PI * p.k;
    double u1 = -(A / p.width) * bump_d1(s) * std::cos(kk * x.x1);
    double u2 = -A * kk * bump(s) * std::sin(kk * x.x1);
    return {u1, u2};
}

SpectralField uin_vorticity(const UinParams& p, const TorusGrid& g) {
    validate(p);
    if (std::fabs(p.center) + p.width >= g.m)
        throw std::invalid_argument("U_in: bump support |c|+w must be smaller than m");
    double A = uin_amplitude(p);
    double kk = M_PI * p.k;
    std::vector<double> w(g.size());
    for (int i2 = 0; i2 < g.n2; ++i2) {
        // reduce x2 into [c-m, c+m) so the support is hit regardless of grid origin
        double x2 = g.x2(i2);
        double y = std::remainder(x2 - p.center, 2.0 * g.m);
        double s = y / p.width;
        double row = A * (bump_d2(s) / (p.width * p.width) - kk * kk * bump(s));
        for (int i1 = 0; i1 < g.n1; ++i1)
            w[static_cast<std::size_t>(i1) * g.n2 + i2] = row * std::cos(kk * g.x1(i1));
    }
    SpectralField f = transform_forward(g, w);
    f.c[0] = 0.0;
    // project to the dealias band: the sampled tail is aliased anyway, and the
    // first rhs would drop it; projecting here keeps t = 0 diagnostics and the
    // spectral identities (curl, divergence) consistent with the dynamics
    return dealias(f);
}

std::pair<SpectralField, SpectralField> uin_velocity_fields(const UinParams& p, const TorusGrid& g) {
    SpectralField w = uin_vorticity(p, g);
    return velocity_from_vorticity(w, {0.0, 0.0});
}

}  // namespace shearflow

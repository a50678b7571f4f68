#include "shearflow/flow_map.hpp"

#include <cmath>
#include <stdexcept>

namespace shearflow {

LabelGrid make_label_grid(int p1, int p2, int m) {
    if (p1 < 2 || p2 < 2 || m < 1)
        throw std::invalid_argument("make_label_grid: need p1, p2 >= 2 and m >= 1");
    return LabelGrid{p1, p2, m};
}

FlowMap initial_flow_map(const LabelGrid& labels) {
    return FlowMap{labels, std::vector<Vec2>(labels.size()), 0.0};
}

JacobiField initial_jacobi(const LabelGrid& labels) {
    return JacobiField{labels, std::vector<Vec2>(labels.size()), 0.0};
}

void AnalyticProvider::eval(double t, std::span<const Vec2> pos, std::span<double> u1,
                            std::span<double> u2) const {
    for (std::size_t i = 0; i < pos.size(); ++i) {
        Vec2 v = fn_(t, pos[i]);
        u1[i] = v.x1;
        u2[i] = v.x2;
    }
}

StationaryProvider::StationaryProvider(const SpectralField& u1, const SpectralField& u2, int pad,
                                       int order)
    : i1_(u1, pad, order), i2_(u2, pad, order) {}

void StationaryProvider::eval(double, std::span<const Vec2> pos, std::span<double> u1,
                              std::span<double> u2) const {
    i1_.eval(pos, u1);
    i2_.eval(pos, u2);
}

SampledProvider::SampledProvider(std::size_t capacity, int pad, int order)
    : capacity_(capacity), pad_(pad), order_(order) {
    if (capacity_ < 1) throw std::invalid_argument("SampledProvider: capacity must be >= 1");
}

void SampledProvider::push(double t, const SpectralField& u1, const SpectralField& u2) {
    if (ring_.size() == capacity_) ring_.erase(ring_.begin());
    ring_.push_back({t, PaddedInterpolant(u1, pad_, order_), PaddedInterpolant(u2, pad_, order_)});
}

bool SampledProvider::has(double t) const {
    for (const auto& e : ring_)
        if (std::fabs(e.t - t) <= 1e-9) return true;
    return false;
}

void SampledProvider::eval(double t, std::span<const Vec2> pos, std::span<double> u1,
                           std::span<double> u2) const {
    for (const auto& e : ring_) {
        if (std::fabs(e.t - t) <= 1e-9) {
            e.i1.eval(pos, u1);
            e.i2.eval(pos, u2);
            return;
        }
    }
    throw std::runtime_error("SampledProvider: field at t = " + std::to_string(t) +
                             " not available (sampling out of sync)");
}

FlowMap advect(const FlowMap& fm, const VelocityProvider& u, double dt) {
    const std::size_t n = fm.labels.size();
    FlowMap out = fm;
    std::vector<Vec2> pos(n), stage(n);
    std::vector<double> a1(n), a2(n), b1(n), b2(n), c1(n), c2(n), e1(n), e2(n);

    for (int i = 0; i < fm.labels.p1; ++i)
        for (int j = 0; j < fm.labels.p2; ++j) {
            std::size_t idx = static_cast<std::size_t>(i) * fm.labels.p2 + j;
            pos[idx] = fm.labels.label(i, j) + fm.d[idx];
        }

    const double t = fm.t;
    u.eval(t, pos, a1, a2);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(n); ++k)
        stage[k] = {pos[k].x1 + 0.5 * dt * a1[k], pos[k].x2 + 0.5 * dt * a2[k]};
    u.eval(t + 0.5 * dt, stage, b1, b2);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(n); ++k)
        stage[k] = {pos[k].x1 + 0.5 * dt * b1[k], pos[k].x2 + 0.5 * dt * b2[k]};
    u.eval(t + 0.5 * dt, stage, c1, c2);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(n); ++k)
        stage[k] = {pos[k].x1 + dt * c1[k], pos[k].x2 + dt * c2[k]};
    u.eval(t + dt, stage, e1, e2);

#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(n); ++k) {
        out.d[k].x1 += dt / 6.0 * (a1[k] + 2.0 * b1[k] + 2.0 * c1[k] + e1[k]);
        out.d[k].x2 += dt / 6.0 * (a2[k] + 2.0 * b2[k] + 2.0 * c2[k] + e2[k]);
    }
    out.t = t + dt;
    return out;
}

JacobiField jacobi_step(const JacobiField& J, const FlowMap& fm, const VelocityProvider& dsigmaU,
                        const ShearProfile& profile, double dt) {
    if (!(J.labels == fm.labels)) throw std::invalid_argument("jacobi_step: label grids differ");
    if (std::fabs(J.t - fm.t) > 1e-9)
        throw std::invalid_argument("jacobi_step: J and flow map are at different times");
    const std::size_t n = J.labels.size();
    JacobiField out = J;

    std::vector<Vec2> p0(n), p1(n), p2(n);
    std::vector<double> fp(n);
    for (int i = 0; i < J.labels.p1; ++i)
        for (int j = 0; j < J.labels.p2; ++j) {
            std::size_t idx = static_cast<std::size_t>(i) * J.labels.p2 + j;
            Vec2 eta = J.labels.label(i, j) + fm.d[idx];
            // along the sigma=0 shear flow eta2 is constant and eta1 moves at
            // f_m(eta2); reconstruct the substep positions from that
            double f = profile.f(eta.x2);
            fp[idx] = profile.fprime(eta.x2);
            p0[idx] = eta;
            p1[idx] = {eta.x1 + 0.5 * dt * f, eta.x2};
            p2[idx] = {eta.x1 + dt * f, eta.x2};
        }

    std::vector<double> A1(n), A2(n), B1(n), B2(n), C1(n), C2(n);
    const double t = J.t;
    dsigmaU.eval(t, p0, A1, A2);
    dsigmaU.eval(t + 0.5 * dt, p1, B1, B2);
    dsigmaU.eval(t + dt, p2, C1, C2);

#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(n); ++k) {
        double j2 = J.J[k].x2;
        double k1_1 = fp[k] * j2 + A1[k];
        double k1_2 = A2[k];
        double k2_1 = fp[k] * (j2 + 0.5 * dt * k1_2) + B1[k];
        double k2_2 = B2[k];
        double k3_1 = fp[k] * (j2 + 0.5 * dt * k2_2) + B1[k];
        double k3_2 = B2[k];
        double k4_1 = fp[k] * (j2 + dt * k3_2) + C1[k];
        double k4_2 = C2[k];
        out.J[k].x1 += dt / 6.0 * (k1_1 + 2.0 * k2_1 + 2.0 * k3_1 + k4_1);
        out.J[k].x2 += dt / 6.0 * (k1_2 + 2.0 * k2_2 + 2.0 * k3_2 + k4_2);
    }
    out.t = t + dt;
    return out;
}

JacobiField fd_jacobi_field(const FlowMap& plus, const FlowMap& minus, double sigma) {
    if (!(plus.labels == minus.labels))
        throw std::invalid_argument("fd_jacobi_field: label grids differ");
    if (std::fabs(plus.t - minus.t) > 1e-9)
        throw std::invalid_argument("fd_jacobi_field: flow maps are at different times");
    if (sigma <= 0.0) throw std::invalid_argument("fd_jacobi_field: sigma must be positive");
    JacobiField out{plus.labels, std::vector<Vec2>(plus.labels.size()), plus.t};
    const double s = 0.5 / sigma;
    for (std::size_t k = 0; k < out.J.size(); ++k)
        out.J[k] = {s * (plus.d[k].x1 - minus.d[k].x1), s * (plus.d[k].x2 - minus.d[k].x2)};
    return out;
}

double label_l2_norm(const JacobiField& J) {
    double s = 0.0;
    for (const auto& v : J.J) s += v.x1 * v.x1 + v.x2 * v.x2;
    return std::sqrt(s * J.labels.cell_area());
}

double label_component_norm(const JacobiField& J, int axis) {
    if (axis != 1 && axis != 2) throw std::invalid_argument("label_component_norm: axis must be 1 or 2");
    double s = 0.0;
    for (const auto& v : J.J) {
        double x = axis == 1 ? v.x1 : v.x2;
        s += x * x;
    }
    return std::sqrt(s * J.labels.cell_area());
}

double volume_det_max_error(const FlowMap& fm) {
    const int p1 = fm.labels.p1, p2 = fm.labels.p2;
    const double h1 = 2.0 * fm.labels.da1(), h2 = 2.0 * fm.labels.da2();
    double worst = 0.0;
    for (int i = 0; i < p1; ++i) {
        int ip = (i + 1) % p1, im = (i - 1 + p1) % p1;
        for (int j = 0; j < p2; ++j) {
            int jp = (j + 1) % p2, jm = (j - 1 + p2) % p2;
            auto at = [&](int a, int b) -> const Vec2& {
                return fm.d[static_cast<std::size_t>(a) * p2 + b];
            };
            double d11 = (at(ip, j).x1 - at(im, j).x1) / h1;
            double d12 = (at(i, jp).x1 - at(i, jm).x1) / h2;
            double d21 = (at(ip, j).x2 - at(im, j).x2) / h1;
            double d22 = (at(i, jp).x2 - at(i, jm).x2) / h2;
            double det = (1.0 + d11) * (1.0 + d22) - d12 * d21;
            worst = std::max(worst, std::fabs(det - 1.0));
        }
    }
    return worst;
}

double initial_slope(std::span<const double> times, std::span<const double> norms, double tau) {
    if (times.size() != norms.size()) throw std::invalid_argument("initial_slope: size mismatch");
    double s2 = 0, s3 = 0, s4 = 0, r1 = 0, r2 = 0;
    int count = 0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        double t = times[i];
        if (t <= 0.0 || t > tau + 1e-12) continue;
        ++count;
        double y = norms[i];
        s2 += t * t;
        s3 += t * t * t;
        s4 += t * t * t * t;
        r1 += t * y;
        r2 += t * t * y;
    }
    if (count < 4)
        throw std::invalid_argument("initial_slope: fewer than 4 samples in (0, tau]");
    double det = s2 * s4 - s3 * s3;
    if (det == 0.0) throw std::invalid_argument("initial_slope: degenerate sample layout");
    return (r1 * s4 - r2 * s3) / det;
}

}  // namespace shearflow

#include "shearflow/spectral_ops.hpp"

#include <cmath>
#include <stdexcept>

#include "shearflow/fft.hpp"
#include "shearflow/kernels.hpp"

namespace shearflow {

SpectralField transform_forward(const TorusGrid& g, std::span<const double> values) {
    if (values.size() != g.size())
        throw std::invalid_argument("transform_forward: values size does not match grid");
    SpectralField f(g);
    for (std::size_t i = 0; i < values.size(); ++i) f.c[i] = values[i];
    fft::forward(g.n1, g.n2, f.c.data());
    const double s = 1.0 / static_cast<double>(g.size());
    for (auto& v : f.c) v *= s;
    return f;
}

std::vector<double> transform_inverse(const SpectralField& f) {
    std::vector<std::complex<double>> buf = f.c;
    fft::backward(f.grid.n1, f.grid.n2, buf.data());
    std::vector<double> out(f.grid.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = buf[i].real();
    return out;
}

SpectralField derivative(const SpectralField& f, int axis) {
    if (axis != 1 && axis != 2) throw std::invalid_argument("derivative: axis must be 1 or 2");
    SpectralField out(f.grid);
    kernels::spectral_derivative(f.grid, f.c.data(), axis, out.c.data());
    return out;
}

SpectralField dealias(const SpectralField& f) {
    SpectralField out = f;
    kernels::dealias(out.grid, out.c.data());
    return out;
}

std::pair<SpectralField, SpectralField> velocity_from_vorticity(const SpectralField& omega,
                                                                Vec2 mean_velocity) {
    double m0 = std::abs(omega.c[0]);
    double scale = 0.0;
    for (const auto& v : omega.c) scale = std::max(scale, std::abs(v));
    if (m0 > 1e-10 * std::max(1.0, scale))
        throw std::invalid_argument("velocity_from_vorticity: vorticity has nonzero mean");
    SpectralField u1(omega.grid), u2(omega.grid);
    kernels::biot_savart(omega.grid, omega.c.data(), u1.c.data(), u2.c.data());
    u1.c[0] = mean_velocity.x1;
    u2.c[0] = mean_velocity.x2;
    return {std::move(u1), std::move(u2)};
}

SpectralField curl(const SpectralField& u1, const SpectralField& u2) {
    SpectralField a = derivative(u2, 1);
    SpectralField b = derivative(u1, 2);
    for (std::size_t i = 0; i < a.c.size(); ++i) a.c[i] -= b.c[i];
    return a;
}

double divergence_residual(const SpectralField& u1, const SpectralField& u2) {
    SpectralField a = derivative(u1, 1);
    SpectralField b = derivative(u2, 2);
    double mx = 0.0;
    for (std::size_t i = 0; i < a.c.size(); ++i) mx = std::max(mx, std::abs(a.c[i] + b.c[i]));
    return mx;
}

double l2_norm(const SpectralField& f) {
    double s = 0.0;
    for (const auto& v : f.c) s += std::norm(v);
    return std::sqrt(f.grid.area() * s);
}

double l2_norm(const SpectralField& u1, const SpectralField& u2) {
    double s = 0.0;
    for (std::size_t i = 0; i < u1.c.size(); ++i) s += std::norm(u1.c[i]) + std::norm(u2.c[i]);
    return std::sqrt(u1.grid.area() * s);
}

double l2_norm_diff(const SpectralField& a, const SpectralField& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.c.size(); ++i) s += std::norm(a.c[i] - b.c[i]);
    return std::sqrt(a.grid.area() * s);
}

double l2_norm_diff(const SpectralField& a1, const SpectralField& a2, const SpectralField& b1,
                    const SpectralField& b2) {
    double s = 0.0;
    for (std::size_t i = 0; i < a1.c.size(); ++i)
        s += std::norm(a1.c[i] - b1.c[i]) + std::norm(a2.c[i] - b2.c[i]);
    return std::sqrt(a1.grid.area() * s);
}

std::vector<double> eval_at_points(const SpectralField& f, std::span<const Vec2> pts) {
    std::vector<double> out(pts.size());
    kernels::fourier_eval(f.grid, f.c.data(), pts.data(), pts.size(), out.data());
    return out;
}

void enforce_real_symmetry(SpectralField& f) {
    const int n1 = f.grid.n1, n2 = f.grid.n2;
    for (int i1 = 0; i1 < n1; ++i1) {
        int j1 = (n1 - i1) % n1;
        for (int i2 = 0; i2 < n2; ++i2) {
            int j2 = (n2 - i2) % n2;
            std::size_t a = static_cast<std::size_t>(i1) * n2 + i2;
            std::size_t b = static_cast<std::size_t>(j1) * n2 + j2;
            if (b < a) continue;
            std::complex<double> avg = 0.5 * (f.c[a] + std::conj(f.c[b]));
            f.c[a] = avg;
            f.c[b] = std::conj(avg);
        }
    }
}

double mean_value(const SpectralField& f) { return f.c[0].real(); }

}  // namespace shearflow

#include <doctest.h>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "helpers.hpp"
#include "shearflow/grid.hpp"
#include "shearflow/spectral_ops.hpp"

using namespace shearflow;
using testutil::random_band_limited;
using testutil::sample_field;

namespace {

// zero-extend a spectrum onto a finer grid with the same m
SpectralField embed(const SpectralField& f, const TorusGrid& fine) {
    SpectralField out(fine);
    const TorusGrid& g = f.grid;
    for (int i = 0; i < g.n1; ++i)
        for (int j = 0; j < g.n2; ++j) {
            int j1 = g.index1(i), j2 = g.index2(j);
            if (std::abs(j1) == g.n1 / 2 || std::abs(j2) == g.n2 / 2) continue;  // skip Nyquist
            int fi = j1 >= 0 ? j1 : j1 + fine.n1;
            int fj = j2 >= 0 ? j2 : j2 + fine.n2;
            out.at(fi, fj) = f.at(i, j);
        }
    return out;
}

SpectralField grid_product(const SpectralField& a, const SpectralField& b) {
    auto va = transform_inverse(a);
    auto vb = transform_inverse(b);
    for (std::size_t i = 0; i < va.size(); ++i) va[i] *= vb[i];
    return transform_forward(a.grid, va);
}

double max_err_on_grid(const SpectralField& f, const std::function<double(double, double)>& ref) {
    auto v = transform_inverse(f);
    const TorusGrid& g = f.grid;
    double mx = 0.0;
    for (int i = 0; i < g.n1; ++i)
        for (int j = 0; j < g.n2; ++j)
            mx = std::max(mx, std::fabs(v[static_cast<std::size_t>(i) * g.n2 + j] - ref(g.x1(i), g.x2(j))));
    return mx;
}

}  // namespace

TEST_CASE("spectral derivatives of closed forms") {
    TorusGrid g = make_grid(32, 128, 4);

    SpectralField c = sample_field(g, [](double x1, double) { return std::cos(M_PI * x1); });
    SpectralField d1 = derivative(c, 1);
    CHECK(max_err_on_grid(d1, [](double x1, double) { return -M_PI * std::sin(M_PI * x1); }) < 1e-12);

    SpectralField d2 = derivative(c, 2);  // x2-independent field
    CHECK(testutil::max_abs_coeff(d2) < 1e-14);

    SpectralField s = sample_field(g, [](double, double x2) { return std::sin(M_PI * x2 / 4.0); });
    SpectralField ds = derivative(s, 2);
    CHECK(max_err_on_grid(ds, [](double, double x2) {
              return (M_PI / 4.0) * std::cos(M_PI * x2 / 4.0);
          }) < 1e-12);

    CHECK_THROWS_AS(derivative(c, 3), std::invalid_argument);
}

TEST_CASE("dealias keeps the low band and kills the top third") {
    TorusGrid g = make_grid(32, 64, 2);
    SpectralField f = random_band_limited(g, 15, 31, 3u);
    SpectralField fd = dealias(f);
    for (int i = 0; i < g.n1; ++i)
        for (int j = 0; j < g.n2; ++j) {
            int j1 = std::abs(g.index1(i)), j2 = std::abs(g.index2(j));
            if (j1 > g.n1 / 3 || j2 > g.n2 / 3) {
                CHECK(std::abs(fd.at(i, j)) == 0.0);
            } else {
                CHECK(fd.at(i, j) == f.at(i, j));
            }
        }
    // Nyquist rows fall inside the dropped band
    CHECK(std::abs(fd.at(g.n1 / 2, 0)) == 0.0);
    CHECK(std::abs(fd.at(0, g.n2 / 2)) == 0.0);
}

TEST_CASE("dealiased product matches the fine-grid oracle") {
    TorusGrid g = make_grid(32, 64, 2);
    TorusGrid fine = make_grid(64, 128, 2);
    // inputs strictly inside the retained band so the retained product band is alias-free
    SpectralField a = random_band_limited(g, 10, 20, 5u);
    SpectralField b = random_band_limited(g, 10, 20, 6u);

    SpectralField coarse = dealias(grid_product(a, b));
    SpectralField exact_fine = grid_product(embed(a, fine), embed(b, fine));

    double worst = 0.0;
    for (int i = 0; i < g.n1; ++i)
        for (int j = 0; j < g.n2; ++j) {
            int j1 = g.index1(i), j2 = g.index2(j);
            if (std::abs(j1) > g.n1 / 3 || std::abs(j2) > g.n2 / 3) continue;
            int fi = j1 >= 0 ? j1 : j1 + fine.n1;
            int fj = j2 >= 0 ? j2 : j2 + fine.n2;
            worst = std::max(worst, std::abs(coarse.at(i, j) - exact_fine.at(fi, fj)));
        }
    CHECK(worst < 1e-12);
}

TEST_CASE("Biot-Savart single mode") {
    // omega = A cos(k.x) with k = (pi, pi/2) on m = 2:
    // psi = -(A/|k|^2) cos(k.x), u = (-A k2/|k|^2 sin(k.x), A k1/|k|^2 sin(k.x))
    TorusGrid g = make_grid(32, 64, 2);
    double A = 1.7, k1v = M_PI, k2v = M_PI / 2.0;
    double ksq = k1v * k1v + k2v * k2v;
    SpectralField om = sample_field(
        g, [&](double x1, double x2) { return A * std::cos(k1v * x1 + k2v * x2); });
    auto [u1, u2] = velocity_from_vorticity(om);
    CHECK(max_err_on_grid(u1, [&](double x1, double x2) {
              return -A * (k2v / ksq) * std::sin(k1v * x1 + k2v * x2);
          }) < 1e-12);
    CHECK(max_err_on_grid(u2, [&](double x1, double x2) {
              return A * (k1v / ksq) * std::sin(k1v * x1 + k2v * x2);
          }) < 1e-12);
}

TEST_CASE("Biot-Savart recovers the shear from its vorticity") {
    // omega = -f'(x2) for f = sin(pi x2) on m = 1 gives u = (sin(pi x2), 0)
    TorusGrid g = make_grid(16, 64, 1);
    SpectralField om = sample_field(g, [](double, double x2) { return -M_PI * std::cos(M_PI * x2); });
    auto [u1, u2] = velocity_from_vorticity(om);
    CHECK(max_err_on_grid(u1, [](double, double x2) { return std::sin(M_PI * x2); }) < 1e-12);
    CHECK(testutil::max_abs_coeff(u2) < 1e-13);
}

TEST_CASE("Biot-Savart carries the mean velocity and rejects nonzero-mean vorticity") {
    TorusGrid g = make_grid(16, 16, 1);
    SpectralField om = random_band_limited(g, 4, 4, 8u);
    auto [u1, u2] = velocity_from_vorticity(om, {0.25, -1.5});
    CHECK(mean_value(u1) == doctest::Approx(0.25));
    CHECK(mean_value(u2) == doctest::Approx(-1.5));

    SpectralField bad = om;
    bad.c[0] = 1e-3;
    CHECK_THROWS_AS(velocity_from_vorticity(bad), std::invalid_argument);
}

TEST_CASE("velocity is divergence-free and curl inverts Biot-Savart") {
    TorusGrid g = make_grid(32, 128, 4);
    SpectralField om = random_band_limited(g, 10, 40, 13u);
    auto [u1, u2] = velocity_from_vorticity(om, {0.3, 0.0});
    CHECK(divergence_residual(u1, u2) < 1e-13);
    SpectralField back = curl(u1, u2);
    CHECK(testutil::max_coeff_diff(back, om) < 1e-12 * testutil::max_abs_coeff(om));
}

TEST_CASE("eval_at_points: grid points, closed form, direct sum oracle") {
    TorusGrid g = make_grid(16, 32, 2);

    SpectralField c = sample_field(g, [](double x1, double) { return std::cos(M_PI * x1); });
    std::vector<Vec2> p{{1.0 / 3.0, 0.7}};
    CHECK(eval_at_points(c, p)[0] == doctest::Approx(0.5).epsilon(1e-12));

    SpectralField f = random_band_limited(g, 5, 10, 17u);
    auto v = transform_inverse(f);
    std::vector<Vec2> gridpts;
    for (int i = 0; i < g.n1; i += 3)
        for (int j = 0; j < g.n2; j += 5) gridpts.push_back({g.x1(i), g.x2(j)});
    auto got = eval_at_points(f, gridpts);
    std::size_t idx = 0;
    for (int i = 0; i < g.n1; i += 3)
        for (int j = 0; j < g.n2; j += 5)
            CHECK(got[idx++] == doctest::Approx(v[static_cast<std::size_t>(i) * g.n2 + j]).epsilon(1e-12));

    // brute-force Fourier sum at off-grid points, including far outside the box
    std::vector<Vec2> pts{{0.123, -4.56}, {7.0, 11.3}, {-0.4, 0.9}};
    auto fast = eval_at_points(f, pts);
    for (std::size_t q = 0; q < pts.size(); ++q) {
        std::complex<double> acc = 0.0;
        for (int i = 0; i < g.n1; ++i)
            for (int j = 0; j < g.n2; ++j) {
                double phase = g.k1(i) * pts[q].x1 + g.k2(j) * pts[q].x2;
                acc += f.at(i, j) * std::complex<double>(std::cos(phase), std::sin(phase));
            }
        CHECK(fast[q] == doctest::Approx(acc.real()).epsilon(1e-12));
    }
}

TEST_CASE("enforce_real_symmetry restores conjugate pairing") {
    TorusGrid g = make_grid(16, 16, 1);
    SpectralField f = random_band_limited(g, 5, 5, 19u);
    f.at(1, 2) += std::complex<double>(0.0, 0.3);  // break the pairing
    enforce_real_symmetry(f);
    for (int i = 0; i < g.n1; ++i)
        for (int j = 0; j < g.n2; ++j) {
            int ic = (g.n1 - i) % g.n1, jc = (g.n2 - j) % g.n2;
            CHECK(std::abs(f.at(i, j) - std::conj(f.at(ic, jc))) < 1e-14);
        }
}

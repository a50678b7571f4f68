#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "helpers.hpp"
#include "shearflow/interpolant.hpp"
#include "shearflow/spectral_ops.hpp"

using namespace shearflow;
using testutil::random_band_limited;

namespace {

double max_eval_error(const PaddedInterpolant& itp, const SpectralField& f,
                      const std::vector<Vec2>& pts) {
    auto exact = eval_at_points(f, pts);
    std::vector<double> fast(pts.size());
    itp.eval(pts, fast);
    double mx = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) mx = std::max(mx, std::fabs(fast[i] - exact[i]));
    return mx;
}

std::vector<Vec2> random_points(std::size_t n, double lo, double hi, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<Vec2> pts(n);
    for (auto& p : pts) p = {u(rng), u(rng)};
    return pts;
}

}  // namespace

TEST_CASE("interpolant reproduces grid samples") {
    TorusGrid g = make_grid(32, 64, 2);
    SpectralField f = random_band_limited(g, 10, 21, 2u);
    auto v = transform_inverse(f);
    PaddedInterpolant itp(f, 2, 6);
    for (int i = 0; i < g.n1; i += 5)
        for (int j = 0; j < g.n2; j += 7) {
            double got = itp({g.x1(i), g.x2(j)});
            CHECK(got == doctest::Approx(v[static_cast<std::size_t>(i) * g.n2 + j]).epsilon(1e-12));
        }
}

TEST_CASE("interpolant tracks the exact Fourier sum off-grid") {
    TorusGrid g = make_grid(64, 128, 2);
    // content at ~8 points per wavelength; near-Nyquist bands are out of reach
    // for local polynomial reads at any order
    SpectralField f = random_band_limited(g, 6, 12, 4u);
    double scale = 0.0;
    for (double x : transform_inverse(f)) scale = std::max(scale, std::fabs(x));
    auto pts = random_points(400, -7.0, 7.0, 5u);

    PaddedInterpolant fine(f, 2, 6);
    CHECK(max_eval_error(fine, f, pts) < 1e-5 * scale);

    PaddedInterpolant coarse(f, 1, 6);
    CHECK(max_eval_error(coarse, f, pts) < 1e-3 * scale);
    // doubling the padded grid gains well over an order of magnitude at order 6
    CHECK(max_eval_error(fine, f, pts) * 30.0 < max_eval_error(coarse, f, pts) + 1e-300);

    PaddedInterpolant high(f, 2, 8);
    CHECK(max_eval_error(high, f, pts) <= max_eval_error(fine, f, pts) * 1.5);
}

TEST_CASE("interpolant accuracy on a smooth single mode") {
    TorusGrid g = make_grid(32, 32, 1);
    SpectralField f = testutil::sample_field(g, [](double x1, double x2) {
        return std::sin(M_PI * x1) * std::cos(2.0 * M_PI * x2);
    });
    PaddedInterpolant itp(f, 2, 6);
    auto pts = random_points(200, -3.0, 3.0, 6u);
    for (const auto& p : pts) {
        double ref = std::sin(M_PI * p.x1) * std::cos(2.0 * M_PI * p.x2);
        CHECK(std::fabs(itp(p) - ref) < 3e-6);
    }
}

TEST_CASE("interpolant constructor validation") {
    TorusGrid g = make_grid(16, 16, 1);
    SpectralField f = random_band_limited(g, 4, 4, 9u);
    CHECK_THROWS_AS(PaddedInterpolant(f, 0, 6), std::invalid_argument);
    CHECK_THROWS_AS(PaddedInterpolant(f, 2, 5), std::invalid_argument);
    CHECK_THROWS_AS(PaddedInterpolant(f, 2, 14), std::invalid_argument);
    CHECK_NOTHROW(PaddedInterpolant(f, 1, 2));
}

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <limits>
#include <stdexcept>
#include <vector>

#include "helpers.hpp"
#include "shearflow/euler.hpp"
#include "shearflow/profile.hpp"
#include "shearflow/spectral_ops.hpp"

using namespace shearflow;
using testutil::random_band_limited;
using testutil::sample_field;

namespace {

FlowState band_limited_state(const TorusGrid& g, int b1, int b2, unsigned seed) {
    FlowState s;
    s.omega = random_band_limited(g, b1, b2, seed);
    // keep velocities O(1)
    double scale = 1.0 / std::max(l2_norm(s.omega), 1e-12);
    for (auto& z : s.omega.c) z *= scale;
    return s;
}

}  // namespace

TEST_CASE("shear states are steady: rhs vanishes") {
    ProfileParams kol;
    ShearProfile p = make_profile(ProfileFamily::kolmogorov, kol, 1);
    TorusGrid g = make_grid(64, 64, 1);
    FlowState s = shear_state(p, g);
    CHECK(s.t == 0.0);
    CHECK(s.mean.x1 == doctest::Approx(0.0));
    CHECK(testutil::max_abs_coeff(rhs(s)) < 1e-12);

    ProfileParams cou;
    cou.delta = 0.2;
    ShearProfile pc = make_profile(ProfileFamily::smoothed_couette, cou, 4);
    TorusGrid gc = make_grid(16, 1024, 4);
    CHECK(testutil::max_abs_coeff(rhs(shear_state(pc, gc))) < 1e-12);
}

TEST_CASE("single-mode vorticity does not self-advect") {
    TorusGrid g = make_grid(32, 32, 1);
    FlowState s;
    s.omega = sample_field(g, [](double x1, double) { return std::cos(M_PI * x1); });
    CHECK(testutil::max_abs_coeff(rhs(s)) < 1e-13);
}

TEST_CASE("rhs agrees with the doubled-resolution oracle") {
    TorusGrid g = make_grid(32, 64, 2);
    TorusGrid fine = make_grid(64, 128, 2);
    FlowState coarse = band_limited_state(g, 10, 20, 3u);
    FlowState refined;
    refined.omega = SpectralField(fine);
    for (int i = 0; i < g.n1; ++i)
        for (int j = 0; j < g.n2; ++j) {
            int j1 = g.index1(i), j2 = g.index2(j);
            if (std::abs(j1) > 10 || std::abs(j2) > 20) continue;
            refined.omega.at(j1 >= 0 ? j1 : j1 + fine.n1, j2 >= 0 ? j2 : j2 + fine.n2) =
                coarse.omega.at(i, j);
        }
    SpectralField rc = rhs(coarse);
    SpectralField rf = rhs(refined);
    double worst = 0.0;
    for (int i = 0; i < g.n1; ++i)
        for (int j = 0; j < g.n2; ++j) {
            int j1 = g.index1(i), j2 = g.index2(j);
            if (std::abs(j1) > g.n1 / 3 || std::abs(j2) > g.n2 / 3) continue;
            worst = std::max(worst, std::abs(rc.at(i, j) -
                                             rf.at(j1 >= 0 ? j1 : j1 + fine.n1,
                                                   j2 >= 0 ? j2 : j2 + fine.n2)));
        }
    CHECK(worst < 1e-10);
}

TEST_CASE("one RK4 step converges at fourth order") {
    TorusGrid g = make_grid(32, 32, 1);
    FlowState s = band_limited_state(g, 8, 8, 5u);
    double dt = 0.25 * cfl_dt(s);

    auto advance_k = [&](int k) {
        FlowState cur = s;
        for (int i = 0; i < k; ++i) cur = step(cur, dt / k);
        return cur;
    };
    FlowState truth = advance_k(16);
    double e1 = l2_norm_diff(advance_k(1).omega, truth.omega);
    double e2 = l2_norm_diff(advance_k(2).omega, truth.omega);
    double ratio = e1 / e2;
    CHECK(ratio > 11.0);
    CHECK(ratio < 21.0);
}

TEST_CASE("step rejects dt beyond the CFL bound") {
    TorusGrid g = make_grid(32, 32, 1);
    FlowState s = band_limited_state(g, 8, 8, 7u);
    CHECK_THROWS_AS(step(s, 2.0 * cfl_dt(s)), std::domain_error);
    CHECK_THROWS_AS(step(s, -0.1), std::domain_error);
}

TEST_CASE("CFL arithmetic") {
    ProfileParams kol;  // A = 1, k = 1: max |u| = 1
    ShearProfile p = make_profile(ProfileFamily::kolmogorov, kol, 1);
    TorusGrid g = make_grid(64, 64, 1);
    FlowState s = shear_state(p, g);
    CHECK(cfl_dt(s, 0.5) == doctest::Approx(1.0 / 64.0));

    // doubling the field halves the step
    FlowState s2 = s;
    for (auto& z : s2.omega.c) z *= 2.0;
    CHECK(cfl_dt(s2, 0.5) == doctest::Approx(0.5 / 64.0));

    // still fluid hits the dt_max cap
    FlowState still;
    still.omega = SpectralField(g);
    CHECK(cfl_dt(still) == doctest::Approx(1.0));
    CHECK(cfl_dt(still, 0.5, 0.125) == doctest::Approx(0.125));
}

TEST_CASE("run validates sample times") {
    TorusGrid g = make_grid(16, 16, 1);
    FlowState s = band_limited_state(g, 4, 4, 9u);
    std::vector<double> bad1{0.5, 0.25};
    CHECK_THROWS_AS(run(s, 1.0, bad1), std::invalid_argument);
    std::vector<double> bad2{0.5, 1.5};
    CHECK_THROWS_AS(run(s, 1.0, bad2), std::invalid_argument);
    CHECK_THROWS_AS(run(s, -1.0, bad2), std::invalid_argument);
}

TEST_CASE("short run conserves energy and enstrophy, lands on samples") {
    TorusGrid g = make_grid(64, 64, 1);
    // low band and gentle amplitude: the cascade must not reach the dealias
    // cut within T, or truncation drains enstrophy and the test measures that
    // instead of the integrator
    FlowState s = band_limited_state(g, 4, 4, 11u);
    for (auto& z : s.omega.c) z *= 0.3;
    s.mean = {0.2, -0.1};
    Diagnostics d0 = diagnostics(s);
    std::vector<double> samples{0.5, 1.0, 2.0};
    auto out = run(s, 2.0, samples, 0.1);
    REQUIRE(out.size() == samples.size());
    for (std::size_t i = 0; i < out.size(); ++i) CHECK(out[i].first.t == doctest::Approx(samples[i]));
    for (const auto& [state, diag] : out) {
        CHECK(std::fabs(diag.energy - d0.energy) / d0.energy < 1e-7);
        CHECK(std::fabs(diag.enstrophy - d0.enstrophy) / d0.enstrophy < 1e-7);
        CHECK(state.mean.x1 == doctest::Approx(0.2));  // mean velocity never changes
        CHECK(state.mean.x2 == doctest::Approx(-0.1));
    }
}

TEST_CASE("time reversal returns to the initial state") {
    TorusGrid g = make_grid(64, 64, 1);
    FlowState s = band_limited_state(g, 4, 4, 13u);
    for (auto& z : s.omega.c) z *= 0.3;
    auto fwd = run(s, 1.0, std::vector<double>{1.0}, 0.1);
    FlowState back = fwd[0].first;
    for (auto& z : back.omega.c) z = -z;  // u -> -u reverses the dynamics
    back.t = 0.0;
    auto rtn = run(back, 1.0, std::vector<double>{1.0}, 0.1);
    SpectralField final_omega = rtn[0].first.omega;
    for (auto& z : final_omega.c) z = -z;
    CHECK(l2_norm_diff(final_omega, s.omega) / l2_norm(s.omega) < 1e-8);
}

TEST_CASE("advancer lands exactly and rejects backwards targets") {
    TorusGrid g = make_grid(32, 32, 1);
    FlowState s = band_limited_state(g, 8, 8, 15u);
    EulerAdvancer adv(g);
    adv.advance(s, 0.3);
    CHECK(s.t == 0.3);
    adv.advance(s, 0.3);  // no-op
    CHECK(s.t == 0.3);
    CHECK_THROWS_AS(adv.advance(s, 0.2), std::invalid_argument);
}

TEST_CASE("blow-up is reported with the last valid time") {
    TorusGrid g = make_grid(16, 16, 1);
    FlowState s = band_limited_state(g, 4, 4, 17u);
    s.omega.at(1, 1) = std::numeric_limits<double>::quiet_NaN();
    EulerAdvancer adv(g);
    try {
        adv.advance(s, 0.5);
        FAIL("expected BlowUpError");
    } catch (const BlowUpError& e) {
        CHECK(e.last_valid_t <= 0.5);
    }
}

TEST_CASE("diagnostics of a single mode") {
    TorusGrid g = make_grid(32, 32, 1);
    FlowState s;
    s.omega = sample_field(g, [](double x1, double) { return std::cos(M_PI * x1); });
    s.mean = {0.5, 0.0};
    Diagnostics d = diagnostics(s);
    CHECK(d.enstrophy == doctest::Approx(1.0));  // 0.5 * ||omega||^2 = 0.5 * 2
    // ||u||^2 = ||omega||^2/pi^2 plus the mean block 4m*|mean|^2
    CHECK(d.energy == doctest::Approx(0.5 * (2.0 / (M_PI * M_PI) + 4.0 * 0.25)));
    CHECK(d.omega_max == doctest::Approx(1.0));
    CHECK(d.omega_min == doctest::Approx(-1.0));
    CHECK(d.divergence_residual < 1e-12);
    CHECK(d.tail_enstrophy_fraction == doctest::Approx(0.0));
    CHECK(!d.tail_warning);
    // palinstrophy of cos(pi x1): 0.5 * ||grad omega||^2 = 0.5 * pi^2 * 2
    CHECK(d.palinstrophy == doctest::Approx(M_PI * M_PI));
}

TEST_CASE("checkpoints round-trip in both formats") {
    TorusGrid g = make_grid(16, 32, 2);
    FlowState s = band_limited_state(g, 5, 10, 19u);
    s.t = 1.75;
    s.mean = {0.125, -2.5};
    auto dir = testutil::scratch_dir("ckpt");

    for (bool binary : {true, false}) {
        auto file = dir / (binary ? "s.ckpt" : "s.csv");
        write_checkpoint(file, s, binary);
        FlowState r = read_checkpoint(file);
        CHECK(r.t == s.t);
        CHECK(r.mean.x1 == s.mean.x1);
        CHECK(r.mean.x2 == s.mean.x2);
        CHECK(r.omega.grid == s.omega.grid);
        REQUIRE(r.omega.c.size() == s.omega.c.size());
        double worst = 0.0;
        for (std::size_t i = 0; i < s.omega.c.size(); ++i)
            worst = std::max(worst, std::abs(r.omega.c[i] - s.omega.c[i]));
        CHECK(worst == 0.0);  // both formats are exact for doubles
    }
    CHECK_THROWS(read_checkpoint(dir / "missing.ckpt"));
}

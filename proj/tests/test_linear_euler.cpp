#include <doctest.h>

#include <cmath>
#include <complex>
#include <memory>
#include <stdexcept>
#include <vector>

#include "helpers.hpp"
#include "shearflow/linear_euler.hpp"
#include "shearflow/perturbation.hpp"
#include "shearflow/profile.hpp"
#include "shearflow/euler.hpp"
#include "shearflow/spectral_ops.hpp"

using namespace shearflow;
using testutil::sample_field;

namespace {

std::shared_ptr<const ShearProfile> kolmogorov_profile(int m) {
    return std::make_shared<ShearProfile>(make_profile(ProfileFamily::kolmogorov, ProfileParams{}, m));
}

std::shared_ptr<const ShearProfile> couette_profile(double delta, int m) {
    ProfileParams pp;
    pp.delta = delta;
    return std::make_shared<ShearProfile>(make_profile(ProfileFamily::smoothed_couette, pp, m));
}

}  // namespace

TEST_CASE("zero initial data stays zero") {
    TorusGrid g = make_grid(16, 16, 1);
    LinearState s{SpectralField(g), kolmogorov_profile(1), 0.0};
    auto out = run_linear(s, 1.0, std::vector<double>{0.5, 1.0});
    REQUIRE(out.size() == 2);
    for (const auto& r : out) {
        CHECK(r.norm_u1 == 0.0);
        CHECK(r.norm_u2 == 0.0);
    }
}

TEST_CASE("x1-independent perturbations are stationary") {
    TorusGrid g = make_grid(16, 64, 2);
    LinearState s{sample_field(g, [](double, double x2) { return std::sin(M_PI * x2); }),
                  kolmogorov_profile(2), 0.0};
    CHECK(testutil::max_abs_coeff(linear_rhs(s)) < 1e-13);
}

TEST_CASE("kolmogorov single mode couples to its k2 neighbors only") {
    TorusGrid g = make_grid(16, 16, 1);
    auto prof = kolmogorov_profile(1);  // f = sin(pi x2), f'' = -pi^2 sin(pi x2)
    std::complex<double> c{0.3, 0.1};
    LinearState s{SpectralField(g), prof, 0.0};
    s.omega_prime.at(1, 2) = c;
    s.omega_prime.at(g.n1 - 1, g.n2 - 2) = std::conj(c);

    SpectralField r = linear_rhs(s);

    // hand-assembled stencil: multiplying by sin(pi x2) shifts j2 by +-1 with
    // weights +-1/(2i); the f'' u2 term opposes the transport, giving the
    // Kolmogorov factor 1 - pi^2/|k|^2 on the input mode k = (pi, 2 pi)
    double k1 = M_PI, ksq = M_PI * M_PI + 4.0 * M_PI * M_PI;
    std::complex<double> up = -(k1 * c / 2.0) * (1.0 - M_PI * M_PI / ksq);
    std::complex<double> down = (k1 * c / 2.0) * (1.0 - M_PI * M_PI / ksq);

    CHECK(std::abs(r.at(1, 3) - up) < 1e-12);
    CHECK(std::abs(r.at(1, 1) - down) < 1e-12);
    CHECK(std::abs(r.at(g.n1 - 1, g.n2 - 3) - std::conj(up)) < 1e-12);
    CHECK(std::abs(r.at(g.n1 - 1, g.n2 - 1) - std::conj(down)) < 1e-12);
    // nothing anywhere else
    double rest = 0.0;
    for (int i = 0; i < g.n1; ++i)
        for (int j = 0; j < g.n2; ++j) {
            bool stencil = (i == 1 && (j == 1 || j == 3)) ||
                           (i == g.n1 - 1 && (j == g.n2 - 1 || j == g.n2 - 3));
            if (!stencil) rest = std::max(rest, std::abs(r.at(i, j)));
        }
    CHECK(rest < 1e-12);
}

TEST_CASE("couette transport: rhs reduces to -f d1 on the linear region") {
    TorusGrid g = make_grid(16, 512, 8);
    auto prof = couette_profile(0.2, 8);  // linear on |x2| <= 3.2
    SpectralField om = sample_field(g, [](double x1, double x2) {
        double s = std::remainder(x2, 16.0) / 1.5;
        return bump(s) * std::cos(3.0 * M_PI * x1);
    });
    LinearState s{om, prof, 0.0};
    SpectralField r = linear_rhs(s);

    // assemble -f d1(omega') independently and compare inside the dealias
    // band, where the clipping of the product tail is invisible; the f'' u2
    // term vanishes there because the data sits inside the linear region
    auto vd1 = transform_inverse(derivative(om, 1));
    std::vector<double> pf(g.size());
    for (int i = 0; i < g.n1; ++i)
        for (int j = 0; j < g.n2; ++j) {
            std::size_t idx = static_cast<std::size_t>(i) * g.n2 + j;
            pf[idx] = prof->f(g.x2(j)) * vd1[idx];
        }
    SpectralField P = transform_forward(g, pf);
    int cut1 = g.n1 / 3, cut2 = g.n2 / 3;
    double worst = 0.0;
    for (int i = 0; i < g.n1; ++i)
        for (int j = 0; j < g.n2; ++j) {
            if (std::abs(g.index1(i)) > cut1 || std::abs(g.index2(j)) > cut2) continue;
            worst = std::max(worst, std::abs(r.at(i, j) + P.at(i, j)));
        }
    CHECK(worst < 1e-12);
}

TEST_CASE("transported oracle matches the evolved field") {
    // n2 = 512 leaves a 1.6e-4 Galerkin truncation floor; 1024 drops it to 7e-7
    TorusGrid g = make_grid(16, 1024, 8);
    auto prof = couette_profile(0.2, 8);
    auto omega0 = [](Vec2 x) {
        // fold to the cell around 0: grid coordinates run over [0, 2m)
        double s = std::remainder(x.x2, 16.0) / 1.5;
        return bump(s) * std::cos(3.0 * M_PI * x.x1);
    };
    SpectralField om0 = sample_field(g, [&](double x1, double x2) { return omega0({x1, x2}); });
    double norm0 = l2_norm(om0);

    LinearState s{om0, prof, 0.0};
    double T = 3.0;
    // cfl 0.15 keeps the RK4 phase error below the spatial floor
    run_linear_streamed(s, std::vector<double>{T}, [](const LinearState&) {}, 0.15);

    auto oracle = orr_transported(*prof, omega0, T);
    std::vector<double> ref(g.size());
    for (int i = 0; i < g.n1; ++i)
        for (int j = 0; j < g.n2; ++j)
            ref[static_cast<std::size_t>(i) * g.n2 + j] = oracle({g.x1(i), g.x2(j)});
    SpectralField om_ref = transform_forward(g, ref);
    CHECK(l2_norm_diff(s.omega_prime, om_ref) / norm0 < 1e-5);

    // transport preserves the vorticity norm while f'' is silent
    CHECK(l2_norm(s.omega_prime) == doctest::Approx(norm0).epsilon(1e-9));
}

TEST_CASE("linearity is exact under binary scaling") {
    TorusGrid g = make_grid(16, 64, 2);
    auto prof = kolmogorov_profile(2);
    SpectralField om = testutil::random_band_limited(g, 5, 20, 23u);
    // keep the perturbation velocity below sup|f| so both runs pick the same
    // cfl step and the trajectories scale bit-exactly
    for (auto& z : om.c) z *= 1e-3;
    LinearState a{om, prof, 0.0};
    LinearState b{om, prof, 0.0};
    for (auto& z : b.omega_prime.c) z *= 2.0;

    auto ra = run_linear(a, 1.0, std::vector<double>{0.5, 1.0});
    auto rb = run_linear(b, 1.0, std::vector<double>{0.5, 1.0});
    for (std::size_t i = 0; i < ra.size(); ++i) {
        CHECK(rb[i].norm_u1 == doctest::Approx(2.0 * ra[i].norm_u1).epsilon(1e-14));
        CHECK(rb[i].norm_u2 == doctest::Approx(2.0 * ra[i].norm_u2).epsilon(1e-14));
    }
}

TEST_CASE("orr oracle closed form") {
    CHECK(orr_oracle(M_PI, 0.7, 0.0) == doctest::Approx(1.0));
    CHECK(orr_oracle(M_PI, M_PI, 3.0) == doctest::Approx(2.0 / 17.0));
    CHECK_THROWS_AS(orr_oracle(0.0, 1.0, 1.0), std::invalid_argument);
    // large-t tail decays like t^-2
    double r100 = orr_oracle(M_PI, 0.0, 100.0);
    CHECK(r100 == doctest::Approx(1.0 / (100.0 * 100.0)).epsilon(1e-3));
}

TEST_CASE("linearized run matches the nonlinear finite difference at O(sigma^2)") {
    TorusGrid g = make_grid(32, 64, 2);
    auto prof = kolmogorov_profile(2);
    UinParams uin;
    uin.amplitude = 1.0;
    uin.center = 0.0;
    uin.width = 1.0;
    SpectralField win = uin_vorticity(uin, g);
    FlowState base = shear_state(*prof, g);

    LinearState lin{win, prof, 0.0};
    auto lout = run_linear(lin, 1.0, std::vector<double>{1.0});
    double lin_u1 = lout[0].norm_u1, lin_u2 = lout[0].norm_u2;

    auto fd_norms = [&](double sigma) {
        FlowState plus = base, minus = base;
        for (std::size_t i = 0; i < win.c.size(); ++i) {
            plus.omega.c[i] += sigma * win.c[i];
            minus.omega.c[i] -= sigma * win.c[i];
        }
        auto rp = run(plus, 1.0, std::vector<double>{1.0});
        auto rm = run(minus, 1.0, std::vector<double>{1.0});
        auto [pu1, pu2] = velocity_from_vorticity(rp[0].first.omega, rp[0].first.mean);
        auto [mu1, mu2] = velocity_from_vorticity(rm[0].first.omega, rm[0].first.mean);
        SpectralField d1(g), d2(g);
        for (std::size_t i = 0; i < d1.c.size(); ++i) {
            d1.c[i] = (pu1.c[i] - mu1.c[i]) / (2.0 * sigma);
            d2.c[i] = (pu2.c[i] - mu2.c[i]) / (2.0 * sigma);
        }
        return std::pair<double, double>{l2_norm(d1), l2_norm(d2)};
    };

    auto [c1, c2] = fd_norms(2e-2);
    auto [f1, f2] = fd_norms(1e-2);
    double ec = std::hypot(c1 - lin_u1, c2 - lin_u2);
    double ef = std::hypot(f1 - lin_u1, f2 - lin_u2);
    CHECK(ec > 0.0);
    CHECK(ef < ec);  // shrinking with sigma
    double rate = ec / std::max(ef, 1e-300);
    CHECK(rate > 2.5);  // O(sigma^2): halving sigma quarters the gap
    CHECK(rate < 6.0);
}

TEST_CASE("linear cfl uses the shear bound and the advancer lands exactly") {
    TorusGrid g = make_grid(64, 64, 1);
    auto prof = kolmogorov_profile(1);  // sup |f| = 1
    LinearState s{SpectralField(g), prof, 0.0};
    CHECK(linear_cfl_dt(s, 0.5) == doctest::Approx(1.0 / 64.0));

    s.omega_prime = testutil::random_band_limited(g, 8, 8, 29u);
    LinearAdvancer adv(g, prof);
    adv.advance(s, 0.7);
    CHECK(s.t == 0.7);
    CHECK_THROWS_AS(adv.advance(s, 0.1), std::invalid_argument);
}

TEST_CASE("run_linear validates sample times") {
    TorusGrid g = make_grid(16, 16, 1);
    LinearState s{SpectralField(g), kolmogorov_profile(1), 0.0};
    CHECK_THROWS_AS(run_linear(s, 1.0, std::vector<double>{0.7, 0.2}), std::invalid_argument);
    CHECK_THROWS_AS(run_linear(s, 1.0, std::vector<double>{1.2}), std::invalid_argument);
}

#include "shearflow/linear_euler.hpp"

#include <cmath>
#include <stdexcept>

#include "shearflow/euler.hpp"
#include "shearflow/fft.hpp"
#include "shearflow/kernels.hpp"
#include "shearflow/spectral_ops.hpp"

namespace shearflow {

namespace {

using cplx = std::complex<double>;

struct LinearStepper {
    TorusGrid g;
    std::vector<double> f_row, fpp_row;  // profile rows indexed by i2
    double sup_f = 0.0;
    std::vector<cplx> dx, u1, u2, prod;
    std::vector<cplx> k1, k2, k3, k4, stage;

    LinearStepper(const TorusGrid& grid, const ShearProfile& p)
        : g(grid), f_row(grid.n2), fpp_row(grid.n2), dx(grid.size()), u1(grid.size()),
          u2(grid.size()), prod(grid.size()), k1(grid.size()), k2(grid.size()), k3(grid.size()),
          k4(grid.size()), stage(grid.size()) {
        for (int i2 = 0; i2 < g.n2; ++i2) {
            f_row[i2] = p.f(g.x2(i2));
            fpp_row[i2] = p.fsecond(g.x2(i2));
            sup_f = std::max(sup_f, std::fabs(f_row[i2]));
        }
    }

    void rhs(const cplx* wp, cplx* out) {
        const std::size_t n = g.size();
        kernels::spectral_derivative(g, wp, 1, dx.data());
        kernels::biot_savart(g, wp, u1.data(), u2.data());
        fft::backward(g.n1, g.n2, dx.data());
        fft::backward(g.n1, g.n2, u2.data());
        kernels::row_linear_combine(g.n1, g.n2, f_row.data(), dx.data(), fpp_row.data(), u2.data(),
                                    prod.data());
        fft::forward(g.n1, g.n2, prod.data());
        const double s = 1.0 / static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i) out[i] = s * prod[i];
        kernels::dealias(g, out);
        out[0] = 0.0;
    }

    void step(LinearState& s, double dt) {
        const std::size_t n = g.size();
        cplx* w = s.omega_prime.c.data();
        rhs(w, k1.data());
        kernels::axpy(n, w, 0.5 * dt, k1.data(), stage.data());
        rhs(stage.data(), k2.data());
        kernels::axpy(n, w, 0.5 * dt, k2.data(), stage.data());
        rhs(stage.data(), k3.data());
        kernels::axpy(n, w, dt, k3.data(), stage.data());
        rhs(stage.data(), k4.data());
        kernels::rk4_combine(n, w, dt / 6.0, k1.data(), dt / 3.0, k2.data(), dt / 3.0, k3.data(),
                             dt / 6.0, k4.data(), w);
        enforce_real_symmetry(s.omega_prime);
        s.omega_prime.c[0] = 0.0;
        s.t += dt;
    }
};

void check_state(const LinearState& s) {
    if (!s.profile) throw std::invalid_argument("linear solver: state has no profile");
    if (s.profile->m() != s.omega_prime.grid.m)
        throw std::invalid_argument("linear solver: profile m does not match grid");
}

double sup_f_on_grid(const LinearState& s) {
    const TorusGrid& g = s.omega_prime.grid;
    double mx = 0.0;
    for (int i2 = 0; i2 < g.n2; ++i2) mx = std::max(mx, std::fabs(s.profile->f(g.x2(i2))));
    return mx;
}

double perturbation_umax(const LinearState& s) {
    auto [u1, u2] = velocity_from_vorticity(s.omega_prime, {0.0, 0.0});
    std::vector<double> a = transform_inverse(u1);
    std::vector<double> b = transform_inverse(u2);
    double mx = 0.0;
    for (double v : a) mx = std::max(mx, std::fabs(v));
    for (double v : b) mx = std::max(mx, std::fabs(v));
    return mx;
}

bool finite_state(const LinearState& s) {
    for (const auto& v : s.omega_prime.c)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
}

}  // namespace

SpectralField linear_rhs(const LinearState& s) {
    check_state(s);
    LinearStepper st(s.omega_prime.grid, *s.profile);
    SpectralField out(s.omega_prime.grid);
    st.rhs(s.omega_prime.c.data(), out.c.data());
    return out;
}

double linear_cfl_dt(const LinearState& s, double c, double dt_max) {
    check_state(s);
    double umax = std::max({sup_f_on_grid(s), perturbation_umax(s), 1e-12});
    double dx = std::min(s.omega_prime.grid.dx1(), s.omega_prime.grid.dx2());
    return std::min(c * dx / umax, dt_max);
}

LinearState linear_step(const LinearState& s, double dt) {
    if (dt <= 0.0) throw std::domain_error("linear_step: dt must be positive");
    if (dt > linear_cfl_dt(s) * (1.0 + 1e-12))
        throw std::domain_error("linear_step: dt exceeds the CFL bound");
    LinearState out = s;
    LinearStepper st(s.omega_prime.grid, *s.profile);
    st.step(out, dt);
    return out;
}

struct LinearAdvancer::Impl {
    LinearStepper st;
    std::shared_ptr<const ShearProfile> profile;
    double cfl;
    double dtmax;
    double umax = -1.0;

    Impl(const TorusGrid& g, std::shared_ptr<const ShearProfile> p, double cfl_factor,
         double dt_max)
        : st(g, *p), profile(std::move(p)), cfl(cfl_factor), dtmax(dt_max) {}
};

LinearAdvancer::LinearAdvancer(const TorusGrid& g, std::shared_ptr<const ShearProfile> profile,
                               double cfl_factor, double dt_max)
    : impl_(std::make_unique<Impl>(g, std::move(profile), cfl_factor, dt_max)) {}
LinearAdvancer::~LinearAdvancer() = default;
LinearAdvancer::LinearAdvancer(LinearAdvancer&&) noexcept = default;

void LinearAdvancer::advance(LinearState& s, double target) {
    Impl& im = *impl_;
    check_state(s);
    if (target < s.t - 1e-12)
        throw std::invalid_argument("advance: landing times must be nondecreasing");
    const double dx = std::min(s.omega_prime.grid.dx1(), s.omega_prime.grid.dx2());
    // the advecting velocity is the stationary shear; the perturbation itself
    // transports nothing, but keep it in the bound for the shared CFL policy
    if (im.umax < 0.0) im.umax = std::max({im.st.sup_f, perturbation_umax(s), 1e-12});
    while (target - s.t > 1e-12) {
        double bound = std::min(im.cfl * dx / im.umax, im.dtmax);
        double remaining = target - s.t;
        int nsub = std::max(1, static_cast<int>(std::ceil(remaining / bound - 1e-9)));
        double dt = remaining / nsub;
        for (int i = 0; i < nsub; ++i) im.st.step(s, dt);
    }
    s.t = target;
    if (!finite_state(s)) throw BlowUpError(s.t);
}

void run_linear_streamed(LinearState& s, std::span<const double> landings,
                         const std::function<void(const LinearState&)>& observer, double cfl_factor,
                         double dt_max) {
    LinearAdvancer adv(s.omega_prime.grid, s.profile, cfl_factor, dt_max);
    for (double target : landings) {
        adv.advance(s, target);
        observer(s);
    }
}

std::vector<LinearSample> run_linear(const LinearState& s0, double T,
                                     std::span<const double> sample_times, double cfl_factor) {
    if (T <= 0.0) throw std::invalid_argument("run_linear: T must be positive");
    for (std::size_t i = 0; i < sample_times.size(); ++i) {
        if (sample_times[i] < 0.0 || sample_times[i] > T + 1e-12)
            throw std::invalid_argument("run_linear: sample times must lie in [0,T]");
        if (i > 0 && sample_times[i] < sample_times[i - 1])
            throw std::invalid_argument("run_linear: sample times must be sorted");
    }
    std::vector<LinearSample> out;
    out.reserve(sample_times.size());
    LinearState s = s0;
    run_linear_streamed(
        s, sample_times,
        [&](const LinearState& at) {
            auto [u1, u2] = velocity_from_vorticity(at.omega_prime, {0.0, 0.0});
            out.push_back({at.t, l2_norm(u1), l2_norm(u2)});
        },
        cfl_factor);
    return out;
}

double orr_oracle(double k1, double k2, double t) {
    if (k1 == 0.0) throw std::invalid_argument("orr_oracle: k1 must be nonzero (no tilting)");
    double n = k1 * k1 + k2 * k2;
    double q = k2 + t * k1;
    return n / (k1 * k1 + q * q);
}

std::function<double(Vec2)> orr_transported(const ShearProfile& p,
                                            std::function<double(Vec2)> omega0, double t) {
    return [&p, omega0 = std::move(omega0), t](Vec2 x) {
        return omega0({x.x1 - t * p.f(x.x2), x.x2});
    };
}

}  // namespace shearflow

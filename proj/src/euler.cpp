#include "shearflow/euler.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "shearflow/fft.hpp"
#include "shearflow/kernels.hpp"
#include "shearflow/spectral_ops.hpp"

namespace shearflow {

namespace {

using cplx = std::complex<double>;

// Workspace for one trajectory: scratch buffers reused across steps so the
// hot loop does no allocation.
struct Stepper {
    TorusGrid g;
    std::vector<cplx> u1, u2, w1, w2, prod;
    std::vector<cplx> k1, k2, k3, k4, stage;
    double last_umax = 0.0;

    explicit Stepper(const TorusGrid& grid)
        : g(grid), u1(grid.size()), u2(grid.size()), w1(grid.size()), w2(grid.size()),
          prod(grid.size()), k1(grid.size()), k2(grid.size()), k3(grid.size()), k4(grid.size()),
          stage(grid.size()) {}

    // out = -dealias(u.grad omega); also records |u|_inf of this evaluation
    void rhs(const cplx* omega, Vec2 mean, cplx* out) {
        const std::size_t n = g.size();
        kernels::biot_savart(g, omega, u1.data(), u2.data());
        u1[0] = mean.x1;
        u2[0] = mean.x2;
        kernels::spectral_derivative(g, omega, 1, w1.data());
        kernels::spectral_derivative(g, omega, 2, w2.data());
        fft::backward(g.n1, g.n2, u1.data());
        fft::backward(g.n1, g.n2, u2.data());
        fft::backward(g.n1, g.n2, w1.data());
        fft::backward(g.n1, g.n2, w2.data());
        last_umax = std::max(kernels::max_abs_real(n, u1.data()), kernels::max_abs_real(n, u2.data()));
        kernels::advection_product(g.n1, g.n2, u1.data(), u2.data(), w1.data(), w2.data(), prod.data());
        fft::forward(g.n1, g.n2, prod.data());
        const double s = 1.0 / static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i) out[i] = s * prod[i];
        kernels::dealias(g, out);
        out[0] = 0.0;
    }

    void step(FlowState& s, double dt) {
        const std::size_t n = g.size();
        cplx* w = s.omega.c.data();
        rhs(w, s.mean, k1.data());
        kernels::axpy(n, w, 0.5 * dt, k1.data(), stage.data());
        rhs(stage.data(), s.mean, k2.data());
        kernels::axpy(n, w, 0.5 * dt, k2.data(), stage.data());
        rhs(stage.data(), s.mean, k3.data());
        kernels::axpy(n, w, dt, k3.data(), stage.data());
        rhs(stage.data(), s.mean, k4.data());
        kernels::rk4_combine(n, w, dt / 6.0, k1.data(), dt / 3.0, k2.data(), dt / 3.0, k3.data(),
                             dt / 6.0, k4.data(), w);
        enforce_real_symmetry(s.omega);
        s.omega.c[0] = 0.0;
        s.t += dt;
    }
};

double umax_of(const FlowState& s) {
    auto [u1, u2] = velocity_from_vorticity(s.omega, s.mean);
    std::vector<double> a = transform_inverse(u1);
    std::vector<double> b = transform_inverse(u2);
    double mx = 0.0;
    for (double v : a) mx = std::max(mx, std::fabs(v));
    for (double v : b) mx = std::max(mx, std::fabs(v));
    return mx;
}

bool finite_state(const FlowState& s) {
    for (const auto& v : s.omega.c)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
}

}  // namespace

SpectralField rhs(const FlowState& s) {
    Stepper st(s.omega.grid);
    SpectralField out(s.omega.grid);
    st.rhs(s.omega.c.data(), s.mean, out.c.data());
    return out;
}

double cfl_dt(const FlowState& s, double c, double dt_max) {
    double umax = std::max(umax_of(s), 1e-12);
    double dx = std::min(s.omega.grid.dx1(), s.omega.grid.dx2());
    return std::min(c * dx / umax, dt_max);
}

FlowState step(const FlowState& s, double dt) {
    if (dt <= 0.0) throw std::domain_error("step: dt must be positive");
    if (dt > cfl_dt(s) * (1.0 + 1e-12)) throw std::domain_error("step: dt exceeds the CFL bound");
    FlowState out = s;
    Stepper st(s.omega.grid);
    st.step(out, dt);
    return out;
}

Diagnostics diagnostics(const FlowState& s) {
    Diagnostics d;
    auto [u1, u2] = velocity_from_vorticity(s.omega, s.mean);
    double nu = l2_norm(u1, u2);
    d.energy = 0.5 * nu * nu;
    double nw = l2_norm(s.omega);
    d.enstrophy = 0.5 * nw * nw;
    SpectralField g1 = derivative(s.omega, 1);
    SpectralField g2 = derivative(s.omega, 2);
    double np = l2_norm(g1, g2);
    d.palinstrophy = 0.5 * np * np;
    std::vector<double> w = transform_inverse(s.omega);
    d.omega_min = w.empty() ? 0.0 : *std::min_element(w.begin(), w.end());
    d.omega_max = w.empty() ? 0.0 : *std::max_element(w.begin(), w.end());
    d.divergence_residual = divergence_residual(u1, u2);

    // top-third shell: modes beyond 2/3 of the dealias cutoff
    const TorusGrid& g = s.omega.grid;
    double tail = 0.0, total = 0.0;
    int lim1 = (2 * (g.n1 / 3)) / 3, lim2 = (2 * (g.n2 / 3)) / 3;
    for (int i1 = 0; i1 < g.n1; ++i1)
        for (int i2 = 0; i2 < g.n2; ++i2) {
            double e = std::norm(s.omega.at(i1, i2));
            total += e;
            if (std::abs(g.index1(i1)) > lim1 || std::abs(g.index2(i2)) > lim2) tail += e;
        }
    d.tail_enstrophy_fraction = total > 0.0 ? tail / total : 0.0;
    d.tail_warning = d.tail_enstrophy_fraction > 1e-8;
    return d;
}

struct EulerAdvancer::Impl {
    Stepper st;
    double cfl;
    double dtmax;
    double umax = -1.0;  // refreshed from stage-1 velocities once stepping starts

    Impl(const TorusGrid& g, double cfl_factor, double dt_max)
        : st(g), cfl(cfl_factor), dtmax(dt_max) {}
};

EulerAdvancer::EulerAdvancer(const TorusGrid& g, double cfl_factor, double dt_max)
    : impl_(std::make_unique<Impl>(g, cfl_factor, dt_max)) {}
EulerAdvancer::~EulerAdvancer() = default;
EulerAdvancer::EulerAdvancer(EulerAdvancer&&) noexcept = default;

void EulerAdvancer::advance(FlowState& s, double target) {
    Impl& im = *impl_;
    if (target < s.t - 1e-12)
        throw std::invalid_argument("advance: landing times must be nondecreasing");
    const double dx = std::min(s.omega.grid.dx1(), s.omega.grid.dx2());
    if (im.umax < 0.0) im.umax = std::max(umax_of(s), 1e-12);
    while (target - s.t > 1e-12) {
        double bound = std::min(im.cfl * dx / im.umax, im.dtmax);
        double remaining = target - s.t;
        int nsub = std::max(1, static_cast<int>(std::ceil(remaining / bound - 1e-9)));
        double dt = remaining / nsub;
        for (int i = 0; i < nsub; ++i) {
            im.st.step(s, dt);
            // stage-1 velocity of the step just taken; cheap refresh of the bound
            im.umax = std::max(im.st.last_umax, 1e-12);
            if (dt > im.cfl * dx / im.umax) break;  // bound tightened: recompute split
        }
    }
    s.t = target;  // kill accumulated roundoff in t
    if (!finite_state(s)) throw BlowUpError(s.t);
}

void run_streamed(FlowState& s, std::span<const double> landings,
                  const std::function<void(const FlowState&)>& observer, double cfl_factor,
                  double dt_max) {
    EulerAdvancer adv(s.omega.grid, cfl_factor, dt_max);
    for (double target : landings) {
        adv.advance(s, target);
        observer(s);
    }
}

std::vector<std::pair<FlowState, Diagnostics>> run(const FlowState& s0, double T,
                                                   std::span<const double> sample_times,
                                                   double cfl_factor) {
    if (T <= 0.0) throw std::invalid_argument("run: T must be positive");
    for (std::size_t i = 0; i < sample_times.size(); ++i) {
        if (sample_times[i] < 0.0 || sample_times[i] > T + 1e-12)
            throw std::invalid_argument("run: sample times must lie in [0,T]");
        if (i > 0 && sample_times[i] < sample_times[i - 1])
            throw std::invalid_argument("run: sample times must be sorted");
    }
    std::vector<std::pair<FlowState, Diagnostics>> out;
    out.reserve(sample_times.size());
    FlowState s = s0;
    run_streamed(s, sample_times, [&](const FlowState& at) { out.emplace_back(at, diagnostics(at)); },
                 cfl_factor);
    return out;
}

FlowState shear_state(const ShearProfile& p, const TorusGrid& g) {
    auto [omega, mean] = profile_vorticity(p, g);
    return FlowState{std::move(omega), mean, 0.0};
}

namespace {
constexpr char kMagic[8] = {'S', 'H', 'W', 'C', 'K', 'P', 'T', '1'};
}

void write_checkpoint(const std::filesystem::path& file, const FlowState& s, bool binary) {
    std::ofstream os(file, binary ? std::ios::binary : std::ios::out);
    if (!os) throw std::runtime_error("write_checkpoint: cannot open " + file.string());
    const TorusGrid& g = s.omega.grid;
    if (binary) {
        os.write(kMagic, 8);
        std::int32_t dims[3] = {g.n1, g.n2, g.m};
        os.write(reinterpret_cast<const char*>(dims), sizeof dims);
        double head[3] = {s.t, s.mean.x1, s.mean.x2};
        os.write(reinterpret_cast<const char*>(head), sizeof head);
        os.write(reinterpret_cast<const char*>(s.omega.c.data()),
                 static_cast<std::streamsize>(s.omega.c.size() * sizeof(cplx)));
    } else {
        os << "# n1=" << g.n1 << " n2=" << g.n2 << " m=" << g.m << " t=" << s.t
           << " mean1=" << s.mean.x1 << " mean2=" << s.mean.x2 << "\n";
        os.precision(17);
        for (const auto& v : s.omega.c) os << v.real() << "," << v.imag() << "\n";
    }
    if (!os) throw std::runtime_error("write_checkpoint: write failed for " + file.string());
}

FlowState read_checkpoint(const std::filesystem::path& file) {
    std::ifstream is(file, std::ios::binary);
    if (!is) throw std::runtime_error("read_checkpoint: cannot open " + file.string());
    char magic[8];
    is.read(magic, 8);
    if (is && std::memcmp(magic, kMagic, 8) == 0) {
        std::int32_t dims[3];
        is.read(reinterpret_cast<char*>(dims), sizeof dims);
        double head[3];
        is.read(reinterpret_cast<char*>(head), sizeof head);
        FlowState s{SpectralField(make_grid(dims[0], dims[1], dims[2])), {head[1], head[2]}, head[0]};
        is.read(reinterpret_cast<char*>(s.omega.c.data()),
                static_cast<std::streamsize>(s.omega.c.size() * sizeof(cplx)));
        if (!is) throw std::runtime_error("read_checkpoint: truncated file " + file.string());
        return s;
    }
    // CSV fallback
    is.close();
    std::ifstream ts(file);
    std::string header;
    std::getline(ts, header);
    int n1 = 0, n2 = 0, m = 0;
    double t = 0, m1 = 0, m2 = 0;
    if (std::sscanf(header.c_str(), "# n1=%d n2=%d m=%d t=%lf mean1=%lf mean2=%lf", &n1, &n2, &m, &t,
                    &m1, &m2) != 6)
        throw std::runtime_error("read_checkpoint: unrecognized header in " + file.string());
    FlowState s{SpectralField(make_grid(n1, n2, m)), {m1, m2}, t};
    for (auto& v : s.omega.c) {
        double re, im;
        char comma;
        if (!(ts >> re >> comma >> im))
            throw std::runtime_error("read_checkpoint: truncated CSV in " + file.string());
        v = cplx(re, im);
    }
    return s;
}

}  // namespace shearflow

#include "shearflow/profile.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "shearflow/fft.hpp"
#include "shearflow/spectral_ops.hpp"

namespace shearflow {

ProfileFamily profile_family_from_string(const std::string& s) {
    if (s == "kolmogorov") return ProfileFamily::kolmogorov;
    if (s == "smoothed_couette") return ProfileFamily::smoothed_couette;
    if (s == "tanh_shear") return ProfileFamily::tanh_shear;
    if (s == "custom_series") return ProfileFamily::custom_series;
    throw std::invalid_argument("unknown profile family: " + s);
}

std::string to_string(ProfileFamily f) {
    switch (f) {
        case ProfileFamily::kolmogorov: return "kolmogorov";
        case ProfileFamily::smoothed_couette: return "smoothed_couette";
        case ProfileFamily::tanh_shear: return "tanh_shear";
        case ProfileFamily::custom_series: return "custom_series";
    }
    return "?";
}

namespace {

// C-infinity step: 0 for tau <= -1, 1 for tau >= 1, smooth in between.
double phi(double u) { return u > 0.0 ? std::exp(-1.0 / u) : 0.0; }
double phi_prime(double u) { return u > 0.0 ? std::exp(-1.0 / u) / (u * u) : 0.0; }

double smooth_step(double tau) {
    if (tau <= -1.0) return 0.0;
    if (tau >= 1.0) return 1.0;
    double u = 0.5 * (1.0 + tau);
    double p = phi(u), q = phi(1.0 - u);
    return p / (p + q);
}

double smooth_step_prime(double tau) {
    if (tau <= -1.0 || tau >= 1.0) return 0.0;
    double u = 0.5 * (1.0 + tau);
    double p = phi(u), q = phi(1.0 - u);
    double pp = phi_prime(u), qp = phi_prime(1.0 - u);
    // d/dtau = (1/2) d/du [p/(p+q)]
    return 0.5 * (pp * q + p * qp) / ((p + q) * (p + q));
}

// reduce to the fundamental cell (-m, m]
double wrap_cell(double x2, int m) {
    double period = 2.0 * m;
    double y = std::fmod(x2, period);
    if (y > m) y -= period;
    if (y <= -static_cast<double>(m)) y += period;
    return y;
}

struct CouettePieces {
    double half_lin;   // (1-delta)*m/2
    double half_wide;  // (1+delta)*m/2
    double hw;         // delta*m/2, turnaround half-width
};

CouettePieces couette_pieces(double delta, int m) {
    return {(1.0 - delta) * m / 2.0, (1.0 + delta) * m / 2.0, delta * m / 2.0};
}

double couette_fprime(double x2, double delta, int m) {
    double y = std::fabs(wrap_cell(x2, m));
    auto p = couette_pieces(delta, m);
    if (y <= p.half_lin) return 1.0;
    if (y >= p.half_wide) return -1.0;
    return 1.0 - 2.0 * smooth_step((y - 0.5 * m) / p.hw);
}

double couette_fsecond(double x2, double delta, int m) {
    double w = wrap_cell(x2, m);
    double y = std::fabs(w);
    auto p = couette_pieces(delta, m);
    if (y <= p.half_lin || y >= p.half_wide) return 0.0;
    double d = -2.0 * smooth_step_prime((y - 0.5 * m) / p.hw) / p.hw;
    return w >= 0.0 ? d : -d;  // f' even, so f'' is odd
}

// order-6 Lagrange read of a periodic uniform table with samples at -m + i*h
double table_eval(const std::vector<double>& tbl, int m, double x2) {
    const int n = static_cast<int>(tbl.size());
    const double h = 2.0 * m / n;
    double u = (x2 + m) / h;
    double i0f = std::floor(u);
    double t = u - i0f;
    long long i0 = static_cast<long long>(i0f);
    double acc = 0.0;
    for (int j = -2; j <= 3; ++j) {
        double w = 1.0;
        for (int k = -2; k <= 3; ++k)
            if (k != j) w *= (t - k) / (j - k);
        long long idx = (i0 + j) % n;
        if (idx < 0) idx += n;
        acc += w * tbl[static_cast<std::size_t>(idx)];
    }
    return acc;
}

double tanh_f(double x2, double a, int m) {
    double s = (m / M_PI) * std::sin(M_PI * x2 / m);
    return std::tanh(a * s);
}

double tanh_fprime(double x2, double a, int m) {
    double s = (m / M_PI) * std::sin(M_PI * x2 / m);
    double c = std::cos(M_PI * x2 / m);
    double sech = 1.0 / std::cosh(a * s);
    return a * c * sech * sech;
}

double tanh_fsecond(double x2, double a, int m) {
    double s = (m / M_PI) * std::sin(M_PI * x2 / m);
    double c = std::cos(M_PI * x2 / m);
    double th = std::tanh(a * s);
    double sech2 = 1.0 - th * th;
    return -a * (M_PI / m) * std::sin(M_PI * x2 / m) * sech2 - 2.0 * a * a * c * c * sech2 * th;
}

double series_eval(const std::vector<double>& cosc, const std::vector<double>& sinc, int m, double x2,
                   int deriv) {
    double acc = 0.0;
    double base = M_PI / m;
    for (std::size_t j = 0; j < cosc.size(); ++j) {
        double k = base * (j + 1);
        double c = cosc[j];
        if (c == 0.0) continue;
        switch (deriv) {
            case 0: acc += c * std::cos(k * x2); break;
            case 1: acc += -c * k * std::sin(k * x2); break;
            default: acc += -c * k * k * std::cos(k * x2); break;
        }
    }
    for (std::size_t j = 0; j < sinc.size(); ++j) {
        double k = base * (j + 1);
        double s = sinc[j];
        if (s == 0.0) continue;
        switch (deriv) {
            case 0: acc += s * std::sin(k * x2); break;
            case 1: acc += s * k * std::cos(k * x2); break;
            default: acc += -s * k * k * std::sin(k * x2); break;
        }
    }
    return acc;
}

// dense scan of |f'| followed by golden-section refinement of the best bracket
template <class F>
double sup_abs(F&& fp, double period, int samples) {
    double best = 0.0;
    int best_i = 0;
    double h = period / samples;
    std::vector<double> vals(samples + 1);
    for (int i = 0; i <= samples; ++i) {
        vals[i] = std::fabs(fp(i * h));
        if (vals[i] > best) {
            best = vals[i];
            best_i = i;
        }
    }
    double lo = (best_i - 1) * h, hi = (best_i + 1) * h;
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = hi - gr * (hi - lo), d = lo + gr * (hi - lo);
    double fc = std::fabs(fp(c)), fd = std::fabs(fp(d));
    for (int it = 0; it < 200 && hi - lo > 1e-13 * std::max(1.0, period); ++it) {
        if (fc > fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - gr * (hi - lo);
            fc = std::fabs(fp(c));
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + gr * (hi - lo);
            fd = std::fabs(fp(d));
        }
    }
    return std::max({best, fc, fd});
}

}  // namespace

ShearProfile make_profile(ProfileFamily family, const ProfileParams& params, int m) {
    if (m < 1) throw std::invalid_argument("make_profile: m must be >= 1");
    ShearProfile p;
    p.family_ = family;
    p.params_ = params;
    p.m_ = m;

    switch (family) {
        case ProfileFamily::kolmogorov:
            if (params.k < 1) throw std::invalid_argument("make_profile: kolmogorov needs k >= 1");
            if (params.amplitude <= 0.0)
                throw std::invalid_argument("make_profile: kolmogorov needs amplitude > 0");
            break;
        case ProfileFamily::tanh_shear:
            if (params.a <= 0.0) throw std::invalid_argument("make_profile: tanh_shear needs a > 0");
            break;
        case ProfileFamily::smoothed_couette: {
            if (params.delta <= 0.0 || params.delta >= 0.5)
                throw std::invalid_argument("make_profile: smoothed_couette needs delta in (0,1/2)");
            // Build the sine series of f from the closed-form f' (cosine series,
            // zero mean since f is periodic): b_j = a_j * m / (pi j).
            const int N = 1 << 16;
            std::vector<std::complex<double>> buf(N);
            double period = 2.0 * m;
            for (int i = 0; i < N; ++i)
                buf[i] = couette_fprime(period * i / N - m, params.delta, m);
            fft::forward(1, N, buf.data());
            // f' is even about 0 in cell coordinates; samples start at -m, so
            // undo that offset phase when reading coefficients.
            int keep = N / 2;
            p.sine_coeffs_.assign(keep, 0.0);
            double maxb = 0.0;
            for (int j = 1; j < keep; ++j) {
                // coefficient of e^{i pi j y/m} with y starting at -m: phase (-1)^j
                std::complex<double> cj = buf[j] / static_cast<double>(N);
                double sign = (j % 2 == 0) ? 1.0 : -1.0;
                double aj = 2.0 * (sign * cj).real();  // cos-series coefficient of f'
                double bj = aj * m / (M_PI * j);
                p.sine_coeffs_[j] = bj;
                maxb = std::max(maxb, std::fabs(bj));
            }
            // drop the sub-roundoff tail; the kept range carries the full signal
            int last = keep - 1;
            while (last > 1 && std::fabs(p.sine_coeffs_[last]) < 1e-15 * maxb) --last;
            p.sine_coeffs_.resize(last + 1);
            // antidifferentiate spectrally and tabulate f on the same grid so
            // pointwise evaluation does not walk the whole series
            for (int j = 1; j < N; ++j) {
                int idx = (j < N / 2) ? j : j - N;
                if (idx == -N / 2 || idx == N / 2) {
                    buf[j] = 0.0;
                    continue;
                }
                double kj = M_PI * idx / m;
                buf[j] /= std::complex<double>(0.0, kj) * static_cast<double>(N);
            }
            buf[0] = 0.0;
            fft::backward(1, N, buf.data());
            p.f_table_.resize(N);
            for (int i = 0; i < N; ++i) p.f_table_[i] = buf[i].real();
            break;
        }
        case ProfileFamily::custom_series:
            if (params.cos_coeffs.empty() && params.sin_coeffs.empty())
                throw std::invalid_argument("make_profile: custom_series needs coefficients");
            break;
    }

    int samples = std::max(1 << 15, (1 << 12) * m);
    p.sup_fprime_ = sup_abs([&](double x) { return p.fprime(x); }, 2.0 * m, samples);
    return p;
}

double ShearProfile::f(double x2) const {
    switch (family_) {
        case ProfileFamily::kolmogorov:
            return params_.amplitude * std::sin(M_PI * params_.k * x2);
        case ProfileFamily::tanh_shear: return tanh_f(x2, params_.a, m_);
        case ProfileFamily::smoothed_couette: {
            if (!f_table_.empty()) return table_eval(f_table_, m_, x2);
            double acc = 0.0;
            double base = M_PI / m_;
            for (std::size_t j = 1; j < sine_coeffs_.size(); ++j)
                if (sine_coeffs_[j] != 0.0) acc += sine_coeffs_[j] * std::sin(base * j * x2);
            return acc;
        }
        case ProfileFamily::custom_series:
            return series_eval(params_.cos_coeffs, params_.sin_coeffs, m_, x2, 0);
    }
    return 0.0;
}

double ShearProfile::fprime(double x2) const {
    switch (family_) {
        case ProfileFamily::kolmogorov:
            return params_.amplitude * M_PI * params_.k * std::cos(M_PI * params_.k * x2);
        case ProfileFamily::tanh_shear: return tanh_fprime(x2, params_.a, m_);
        case ProfileFamily::smoothed_couette: return couette_fprime(x2, params_.delta, m_);
        case ProfileFamily::custom_series:
            return series_eval(params_.cos_coeffs, params_.sin_coeffs, m_, x2, 1);
    }
    return 0.0;
}

double ShearProfile::fsecond(double x2) const {
    switch (family_) {
        case ProfileFamily::kolmogorov: {
            double kk = M_PI * params_.k;
            return -params_.amplitude * kk * kk * std::sin(kk * x2);
        }
        case ProfileFamily::tanh_shear: return tanh_fsecond(x2, params_.a, m_);
        case ProfileFamily::smoothed_couette: return couette_fsecond(x2, params_.delta, m_);
        case ProfileFamily::custom_series:
            return series_eval(params_.cos_coeffs, params_.sin_coeffs, m_, x2, 2);
    }
    return 0.0;
}

bool ShearProfile::has_limit() const { return family_ != ProfileFamily::custom_series; }

double ShearProfile::limit_f(double x2) const {
    switch (family_) {
        case ProfileFamily::kolmogorov:
            return params_.amplitude * std::sin(M_PI * params_.k * x2);
        case ProfileFamily::tanh_shear: return std::tanh(params_.a * x2);
        case ProfileFamily::smoothed_couette: return x2;
        case ProfileFamily::custom_series: break;
    }
    throw std::logic_error("limit_f: family has no declared limit");
}

ConvergenceTable check_profile_convergence(ProfileFamily family, const ProfileParams& params,
                                           const std::vector<int>& m_list) {
    if (family == ProfileFamily::custom_series)
        throw std::invalid_argument("check_profile_convergence: custom_series has no declared limit");
    ConvergenceTable table;
    const int K = 1 << 16;
    for (int m : m_list) {
        ShearProfile p = make_profile(family, params, m);
        double half = m / 2.0;
        double gap = 0.0;
        double interior = 0.0;
        double lin = (family == ProfileFamily::smoothed_couette) ? (1.0 - params.delta) * m / 2.0 : half;
        auto limit_fprime = [&](double x) {
            switch (family) {
                case ProfileFamily::kolmogorov:
                    return params.amplitude * M_PI * params.k * std::cos(M_PI * params.k * x);
                case ProfileFamily::tanh_shear: {
                    double th = std::tanh(params.a * x);
                    return params.a * (1.0 - th * th);
                }
                default: return 1.0;  // smoothed_couette limit is x2 itself
            }
        };
        for (int i = 1; i <= K; ++i) {  // sup over (-m/2, m/2]
            double x = -half + 2.0 * half * i / K;
            double d = std::fabs(p.f(x) - p.limit_f(x)) + std::fabs(p.fprime(x) - limit_fprime(x));
            gap = std::max(gap, d);
            if (std::fabs(x) <= lin) interior = std::max(interior, d);
        }
        if (family == ProfileFamily::smoothed_couette && interior < 1e-10) interior = 0.0;
        table.rows.push_back({m, gap, interior, p.sup_fprime()});
    }
    table.gaps_decreasing = true;
    for (std::size_t i = 1; i < table.rows.size(); ++i)
        if (table.rows[i].gap > table.rows[i - 1].gap) table.gaps_decreasing = false;
    double mx = 0.0;
    bool finite = true;
    for (const auto& r : table.rows) {
        if (!std::isfinite(r.sup_fprime)) finite = false;
        mx = std::max(mx, r.sup_fprime);
    }
    table.sup_fprime_bounded = finite && mx < 1e6;
    return table;
}

std::pair<SpectralField, Vec2> profile_vorticity(const ShearProfile& p, const TorusGrid& g) {
    if (g.m != p.m()) throw std::invalid_argument("profile_vorticity: grid m does not match profile m");
    std::vector<double> w(g.size());
    for (int i2 = 0; i2 < g.n2; ++i2) {
        double v = -p.fprime(g.x2(i2));
        for (int i1 = 0; i1 < g.n1; ++i1) w[static_cast<std::size_t>(i1) * g.n2 + i2] = v;
    }
    SpectralField omega = transform_forward(g, w);
    // resolution check: spectral tail beyond the dealias band
    double peak = 0.0, tail = 0.0;
    int cut2 = g.n2 / 3;
    for (int i2 = 0; i2 < g.n2; ++i2) {
        double a = std::abs(omega.at(0, i2));
        peak = std::max(peak, a);
        if (std::abs(g.index2(i2)) > cut2) tail = std::max(tail, a);
    }
    // delta=0.2 on n2=512 sits at ~6e-8; grossly under-resolved profiles are 1e-3 and up
    if (peak > 0.0 && tail > 1e-6 * peak)
        throw std::runtime_error("profile_vorticity: grid too coarse to resolve f'_m for family " +
                                 to_string(p.family()));
    omega.c[0] = 0.0;  // -f' has zero mean over the period; drop rounding residue

    // mean velocity of u_inf = x2-average of f_m (trapezoid over one period)
    const int Q = 1 << 14;
    double s = 0.0;
    for (int i = 0; i < Q; ++i) s += p.f(-static_cast<double>(p.m()) + 2.0 * p.m() * i / Q);
    Vec2 mean{s / Q, 0.0};
    if (std::fabs(mean.x1) < 1e-13) mean.x1 = 0.0;
    return {std::move(omega), mean};
}

}  // namespace shearflow

#include "shearflow/kernels.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>

namespace shearflow::kernels {

namespace {
std::atomic<Exec> g_policy{Exec::omp};
}

Exec exec_policy() { return g_policy.load(std::memory_order_relaxed); }
void set_exec_policy(Exec e) { g_policy.store(e, std::memory_order_relaxed); }

// ---- spectral derivative ----------------------------------------------------

namespace {
inline void derivative_row(const TorusGrid& g, const cplx* in, int axis, cplx* out, int i1) {
    const int n2 = g.n2;
    const std::size_t off = static_cast<std::size_t>(i1) * n2;
    if (axis == 1) {
        // k1 constant along the row; Nyquist mode of an axis has no signed
        // partner, so its derivative is dropped to keep the result real.
        double k = (i1 == g.n1 / 2) ? 0.0 : g.k1(i1);
        const cplx ik(0.0, k);
        for (int i2 = 0; i2 < n2; ++i2) out[off + i2] = ik * in[off + i2];
    } else {
        for (int i2 = 0; i2 < n2; ++i2) {
            double k = (i2 == n2 / 2) ? 0.0 : g.k2(i2);
            out[off + i2] = cplx(0.0, k) * in[off + i2];
        }
    }
}
}  // namespace

void spectral_derivative_serial(const TorusGrid& g, const cplx* in, int axis, cplx* out) {
    for (int i1 = 0; i1 < g.n1; ++i1) derivative_row(g, in, axis, out, i1);
}

void spectral_derivative_omp(const TorusGrid& g, const cplx* in, int axis, cplx* out) {
#pragma omp parallel for schedule(static)
    for (int i1 = 0; i1 < g.n1; ++i1) derivative_row(g, in, axis, out, i1);
}

void spectral_derivative(const TorusGrid& g, const cplx* in, int axis, cplx* out) {
    if (exec_policy() == Exec::omp)
        spectral_derivative_omp(g, in, axis, out);
    else
        spectral_derivative_serial(g, in, axis, out);
}

// ---- Biot-Savart ------------------------------------------------------------

namespace {
inline void biot_savart_row(const TorusGrid& g, const cplx* omega, cplx* u1, cplx* u2, int i1) {
    const int n2 = g.n2;
    const double k1 = g.k1(i1);
    const std::size_t off = static_cast<std::size_t>(i1) * n2;
    for (int i2 = 0; i2 < n2; ++i2) {
        double k2 = g.k2(i2);
        double kk = k1 * k1 + k2 * k2;
        if (kk == 0.0) {
            u1[off + i2] = 0.0;
            u2[off + i2] = 0.0;
            continue;
        }
        // u = (-d2 psi, d1 psi), psi_hat = omega_hat / (-|k|^2)
        cplx w = omega[off + i2];
        u1[off + i2] = cplx(0.0, k2 / kk) * w;
        u2[off + i2] = cplx(0.0, -k1 / kk) * w;
    }
}
}  // namespace

void biot_savart_serial(const TorusGrid& g, const cplx* omega, cplx* u1, cplx* u2) {
    for (int i1 = 0; i1 < g.n1; ++i1) biot_savart_row(g, omega, u1, u2, i1);
}

void biot_savart_omp(const TorusGrid& g, const cplx* omega, cplx* u1, cplx* u2) {
#pragma omp parallel for schedule(static)
    for (int i1 = 0; i1 < g.n1; ++i1) biot_savart_row(g, omega, u1, u2, i1);
}

void biot_savart(const TorusGrid& g, const cplx* omega, cplx* u1, cplx* u2) {
    if (exec_policy() == Exec::omp)
        biot_savart_omp(g, omega, u1, u2);
    else
        biot_savart_serial(g, omega, u1, u2);
}

// ---- dealias ----------------------------------------------------------------

namespace {
inline void dealias_row(const TorusGrid& g, cplx* c, int i1) {
    const int n2 = g.n2;
    const int cut1 = g.n1 / 3;
    const int cut2 = g.n2 / 3;
    const std::size_t off = static_cast<std::size_t>(i1) * n2;
    int j1 = std::abs(g.index1(i1));
    if (j1 > cut1) {
        for (int i2 = 0; i2 < n2; ++i2) c[off + i2] = 0.0;
        return;
    }
    for (int i2 = 0; i2 < n2; ++i2)
        if (std::abs(g.index2(i2)) > cut2) c[off + i2] = 0.0;
}
}  // namespace

void dealias_serial(const TorusGrid& g, cplx* c) {
    for (int i1 = 0; i1 < g.n1; ++i1) dealias_row(g, c, i1);
}

void dealias_omp(const TorusGrid& g, cplx* c) {
#pragma omp parallel for schedule(static)
    for (int i1 = 0; i1 < g.n1; ++i1) dealias_row(g, c, i1);
}

void dealias(const TorusGrid& g, cplx* c) {
    if (exec_policy() == Exec::omp)
        dealias_omp(g, c);
    else
        dealias_serial(g, c);
}

// ---- advection product ------------------------------------------------------

void advection_product_serial(std::size_t n1, std::size_t n2, const cplx* u1, const cplx* u2,
                              const cplx* w1, const cplx* w2, cplx* out) {
    const std::size_t n = n1 * n2;
    for (std::size_t i = 0; i < n; ++i)
        out[i] = cplx(-(u1[i].real() * w1[i].real() + u2[i].real() * w2[i].real()), 0.0);
}

void advection_product_omp(std::size_t n1, std::size_t n2, const cplx* u1, const cplx* u2,
                           const cplx* w1, const cplx* w2, cplx* out) {
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(n1 * n2);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i)
        out[i] = cplx(-(u1[i].real() * w1[i].real() + u2[i].real() * w2[i].real()), 0.0);
}

void advection_product(std::size_t n1, std::size_t n2, const cplx* u1, const cplx* u2,
                       const cplx* w1, const cplx* w2, cplx* out) {
    if (exec_policy() == Exec::omp)
        advection_product_omp(n1, n2, u1, u2, w1, w2, out);
    else
        advection_product_serial(n1, n2, u1, u2, w1, w2, out);
}

// ---- row combine (linearized transport) --------------------------------------

void row_linear_combine_serial(std::size_t n1, std::size_t n2, const double* row_a, const cplx* a,
                               const double* row_b, const cplx* b, cplx* out) {
    for (std::size_t i1 = 0; i1 < n1; ++i1) {
        const std::size_t off = i1 * n2;
        for (std::size_t i2 = 0; i2 < n2; ++i2)
            out[off + i2] = cplx(-row_a[i2] * a[off + i2].real() + row_b[i2] * b[off + i2].real(), 0.0);
    }
}

void row_linear_combine_omp(std::size_t n1, std::size_t n2, const double* row_a, const cplx* a,
                            const double* row_b, const cplx* b, cplx* out) {
    const std::ptrdiff_t pn1 = static_cast<std::ptrdiff_t>(n1);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i1 = 0; i1 < pn1; ++i1) {
        const std::size_t off = static_cast<std::size_t>(i1) * n2;
        for (std::size_t i2 = 0; i2 < n2; ++i2)
            out[off + i2] = cplx(-row_a[i2] * a[off + i2].real() + row_b[i2] * b[off + i2].real(), 0.0);
    }
}

void row_linear_combine(std::size_t n1, std::size_t n2, const double* row_a, const cplx* a,
                        const double* row_b, const cplx* b, cplx* out) {
    if (exec_policy() == Exec::omp)
        row_linear_combine_omp(n1, n2, row_a, a, row_b, b, out);
    else
        row_linear_combine_serial(n1, n2, row_a, a, row_b, b, out);
}

// ---- axpy / RK4 combine -----------------------------------------------------

void axpy_serial(std::size_t n, const cplx* a, double s, const cplx* b, cplx* out) {
    for (std::size_t i = 0; i < n; ++i) out[i] = a[i] + s * b[i];
}

void axpy_omp(std::size_t n, const cplx* a, double s, const cplx* b, cplx* out) {
    const std::ptrdiff_t pn = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < pn; ++i) out[i] = a[i] + s * b[i];
}

void axpy(std::size_t n, const cplx* a, double s, const cplx* b, cplx* out) {
    if (exec_policy() == Exec::omp)
        axpy_omp(n, a, s, b, out);
    else
        axpy_serial(n, a, s, b, out);
}

void rk4_combine_serial(std::size_t n, const cplx* a, double s1, const cplx* k1, double s2, const cplx* k2,
                        double s3, const cplx* k3, double s4, const cplx* k4, cplx* out) {
    for (std::size_t i = 0; i < n; ++i)
        out[i] = a[i] + s1 * k1[i] + s2 * k2[i] + s3 * k3[i] + s4 * k4[i];
}

void rk4_combine_omp(std::size_t n, const cplx* a, double s1, const cplx* k1, double s2, const cplx* k2,
                     double s3, const cplx* k3, double s4, const cplx* k4, cplx* out) {
    const std::ptrdiff_t pn = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < pn; ++i)
        out[i] = a[i] + s1 * k1[i] + s2 * k2[i] + s3 * k3[i] + s4 * k4[i];
}

void rk4_combine(std::size_t n, const cplx* a, double s1, const cplx* k1, double s2, const cplx* k2,
                 double s3, const cplx* k3, double s4, const cplx* k4, cplx* out) {
    if (exec_policy() == Exec::omp)
        rk4_combine_omp(n, a, s1, k1, s2, k2, s3, k3, s4, k4, out);
    else
        rk4_combine_serial(n, a, s1, k1, s2, k2, s3, k3, s4, k4, out);
}

// ---- Lagrange interpolation ---------------------------------------------------

namespace {
// weights for the order-point stencil at fractional offset s in [0,1) from node 0;
// stencil nodes sit at integer offsets lo..lo+order-1 with lo = -(order/2 - 1).
inline void lagrange_weights(double s, int order, double* w) {
    const int lo = -(order / 2 - 1);
    for (int j = 0; j < order; ++j) {
        double xj = lo + j;
        double num = 1.0, den = 1.0;
        for (int i = 0; i < order; ++i) {
            if (i == j) continue;
            double xi = lo + i;
            num *= (s - xi);
            den *= (xj - xi);
        }
        w[j] = num / den;
    }
}

inline double lagrange_point(const InterpGrid& gi, int order, Vec2 p) {
    const double h1 = gi.period1 / gi.n1;
    const double h2 = gi.period2 / gi.n2;
    double t1 = p.x1 / h1;
    double t2 = p.x2 / h2;
    double f1 = std::floor(t1);
    double f2 = std::floor(t2);
    double s1 = t1 - f1;
    double s2 = t2 - f2;
    long b1 = static_cast<long>(f1);
    long b2 = static_cast<long>(f2);

    double w1[12], w2[12];
    lagrange_weights(s1, order, w1);
    lagrange_weights(s2, order, w2);

    const int lo = -(order / 2 - 1);
    int idx1[12], idx2[12];
    for (int j = 0; j < order; ++j) {
        long a = (b1 + lo + j) % gi.n1;
        if (a < 0) a += gi.n1;
        idx1[j] = static_cast<int>(a);
        long b = (b2 + lo + j) % gi.n2;
        if (b < 0) b += gi.n2;
        idx2[j] = static_cast<int>(b);
    }
    double acc = 0.0;
    for (int j1 = 0; j1 < order; ++j1) {
        const double* row = gi.values + static_cast<std::size_t>(idx1[j1]) * gi.n2;
        double r = 0.0;
        for (int j2 = 0; j2 < order; ++j2) r += w2[j2] * row[idx2[j2]];
        acc += w1[j1] * r;
    }
    return acc;
}
}  // namespace

void lagrange_eval_serial(const InterpGrid& gi, int order, const Vec2* pts, std::size_t np, double* out) {
    for (std::size_t i = 0; i < np; ++i) out[i] = lagrange_point(gi, order, pts[i]);
}

void lagrange_eval_omp(const InterpGrid& gi, int order, const Vec2* pts, std::size_t np, double* out) {
    const std::ptrdiff_t pn = static_cast<std::ptrdiff_t>(np);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < pn; ++i) out[i] = lagrange_point(gi, order, pts[i]);
}

void lagrange_eval(const InterpGrid& gi, int order, const Vec2* pts, std::size_t np, double* out) {
    if (exec_policy() == Exec::omp)
        lagrange_eval_omp(gi, order, pts, np, out);
    else
        lagrange_eval_serial(gi, order, pts, np, out);
}

// ---- exact Fourier evaluation -------------------------------------------------

namespace {
inline double fourier_point(const TorusGrid& g, const cplx* c, Vec2 p) {
    // factorized sum: precompute e^{i k1 x1} per i1 and e^{i k2 x2} per i2
    // would need scratch; for the reference path keep the direct double loop
    // over modes but accumulate rows with a recurrence for the x2 phases.
    const int n1 = g.n1, n2 = g.n2;
    const cplx e2 = std::polar(1.0, (M_PI / g.m) * p.x2);
    const cplx e2c = std::conj(e2);
    double acc = 0.0;
    for (int i1 = 0; i1 < n1; ++i1) {
        const std::size_t off = static_cast<std::size_t>(i1) * n2;
        // phases for i2 = 0..n2/2 and the negative half by conjugate stepping
        cplx row(0.0, 0.0);
        cplx ph(1.0, 0.0);
        for (int i2 = 0; i2 <= n2 / 2; ++i2) {
            row += c[off + i2] * ph;
            ph *= e2;
        }
        ph = e2c;
        for (int i2 = n2 - 1; i2 > n2 / 2; --i2) {
            row += c[off + i2] * ph;
            ph *= e2c;
        }
        double a1 = M_PI * g.index1(i1) * p.x1;
        cplx p1 = std::polar(1.0, a1);
        acc += (row * p1).real();
    }
    return acc;
}
}  // namespace

void fourier_eval_serial(const TorusGrid& g, const cplx* c, const Vec2* pts, std::size_t np, double* out) {
    for (std::size_t i = 0; i < np; ++i) out[i] = fourier_point(g, c, pts[i]);
}

void fourier_eval_omp(const TorusGrid& g, const cplx* c, const Vec2* pts, std::size_t np, double* out) {
    const std::ptrdiff_t pn = static_cast<std::ptrdiff_t>(np);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < pn; ++i) out[i] = fourier_point(g, c, pts[i]);
}

void fourier_eval(const TorusGrid& g, const cplx* c, const Vec2* pts, std::size_t np, double* out) {
    if (exec_policy() == Exec::omp)
        fourier_eval_omp(g, c, pts, np, out);
    else
        fourier_eval_serial(g, c, pts, np, out);
}

double max_abs_real(std::size_t n, const cplx* a) {
    double mx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double v = std::fabs(a[i].real());
        if (v > mx) mx = v;
    }
    return mx;
}

}  // namespace shearflow::kernels

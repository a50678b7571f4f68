#pragma once
// Hot loops, each in a serial reference version and an OpenMP version.
// The serial versions are the ground truth in tests; dispatch is a
// process-wide switch so whole runs can be forced onto either path.

#include <complex>
#include <cstddef>

#include "shearflow/grid.hpp"

namespace shearflow::kernels {

enum class Exec { serial, omp };

Exec exec_policy();
void set_exec_policy(Exec e);

using cplx = std::complex<double>;

// out = d/dx_axis in Fourier space (multiply by i*k_axis, Nyquist rows zeroed).
void spectral_derivative_serial(const TorusGrid& g, const cplx* in, int axis, cplx* out);
void spectral_derivative_omp(const TorusGrid& g, const cplx* in, int axis, cplx* out);
void spectral_derivative(const TorusGrid& g, const cplx* in, int axis, cplx* out);

// u_hat = (i k2 / |k|^2, -i k1 / |k|^2) * omega_hat, zero mode left at 0.
void biot_savart_serial(const TorusGrid& g, const cplx* omega, cplx* u1, cplx* u2);
void biot_savart_omp(const TorusGrid& g, const cplx* omega, cplx* u1, cplx* u2);
void biot_savart(const TorusGrid& g, const cplx* omega, cplx* u1, cplx* u2);

// 2/3-rule sharp truncation, in place.
void dealias_serial(const TorusGrid& g, cplx* c);
void dealias_omp(const TorusGrid& g, cplx* c);
void dealias(const TorusGrid& g, cplx* c);

// out = -(re(u1)*re(w1) + re(u2)*re(w2)), imag parts zeroed (advection nonlinearity).
void advection_product_serial(std::size_t n1, std::size_t n2, const cplx* u1, const cplx* u2,
                              const cplx* w1, const cplx* w2, cplx* out);
void advection_product_omp(std::size_t n1, std::size_t n2, const cplx* u1, const cplx* u2,
                           const cplx* w1, const cplx* w2, cplx* out);
void advection_product(std::size_t n1, std::size_t n2, const cplx* u1, const cplx* u2,
                       const cplx* w1, const cplx* w2, cplx* out);

// out = -row_a(x2)*re(a) + row_b(x2)*re(b), rows indexed by i2 (linearized transport).
void row_linear_combine_serial(std::size_t n1, std::size_t n2, const double* row_a, const cplx* a,
                               const double* row_b, const cplx* b, cplx* out);
void row_linear_combine_omp(std::size_t n1, std::size_t n2, const double* row_a, const cplx* a,
                            const double* row_b, const cplx* b, cplx* out);
void row_linear_combine(std::size_t n1, std::size_t n2, const double* row_a, const cplx* a,
                        const double* row_b, const cplx* b, cplx* out);

// out = a + s*b elementwise (RK4 stage assembly).
void axpy_serial(std::size_t n, const cplx* a, double s, const cplx* b, cplx* out);
void axpy_omp(std::size_t n, const cplx* a, double s, const cplx* b, cplx* out);
void axpy(std::size_t n, const cplx* a, double s, const cplx* b, cplx* out);

// out = a + s1*k1 + s2*k2 + s3*k3 + s4*k4 (RK4 combine).
void rk4_combine_serial(std::size_t n, const cplx* a, double s1, const cplx* k1, double s2, const cplx* k2,
                        double s3, const cplx* k3, double s4, const cplx* k4, cplx* out);
void rk4_combine_omp(std::size_t n, const cplx* a, double s1, const cplx* k1, double s2, const cplx* k2,
                     double s3, const cplx* k3, double s4, const cplx* k4, cplx* out);
void rk4_combine(std::size_t n, const cplx* a, double s1, const cplx* k1, double s2, const cplx* k2,
                 double s3, const cplx* k3, double s4, const cplx* k4, cplx* out);

// Tensor-product Lagrange interpolation of a real grid sample, periodic wrap.
// order is the number of points per axis (6 = quintic). pts/out length np.
struct InterpGrid {
    const double* values;  // row-major n1 x n2
    int n1, n2;
    double period1, period2;
};
void lagrange_eval_serial(const InterpGrid& gi, int order, const Vec2* pts, std::size_t np, double* out);
void lagrange_eval_omp(const InterpGrid& gi, int order, const Vec2* pts, std::size_t np, double* out);
void lagrange_eval(const InterpGrid& gi, int order, const Vec2* pts, std::size_t np, double* out);

// Exact truncated Fourier sum at arbitrary points (reference path, O(N^2 * np)).
void fourier_eval_serial(const TorusGrid& g, const cplx* c, const Vec2* pts, std::size_t np, double* out);
void fourier_eval_omp(const TorusGrid& g, const cplx* c, const Vec2* pts, std::size_t np, double* out);
void fourier_eval(const TorusGrid& g, const cplx* c, const Vec2* pts, std::size_t np, double* out);

// max |re(a)| over buffer; exact (order independent), used for CFL bounds.
double max_abs_real(std::size_t n, const cplx* a);

}  // namespace shearflow::kernels

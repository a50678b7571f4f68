// Serial vs OpenMP kernel timings on a few representative grids.
#include <complex>
#include <cstdio>
#include <random>
#include <vector>

#include <omp.h>

#include "shearflow/fft.hpp"
#include "shearflow/grid.hpp"
#include "shearflow/kernels.hpp"

using namespace shearflow;
using cplx = std::complex<double>;

namespace {

std::vector<cplx> random_field(const TorusGrid& g, std::mt19937_64& rng) {
    std::normal_distribution<double> dist;
    std::vector<cplx> v(g.size());
    for (auto& c : v) c = {dist(rng), dist(rng)};
    return v;
}

template <typename F>
double time_best_of(int reps, F&& fn) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        double t0 = omp_get_wtime();
        fn();
        best = std::min(best, omp_get_wtime() - t0);
    }
    return best;
}

void bench_grid(int n1, int m) {
    TorusGrid g = make_grid(n1, n1 * m, m);
    std::mt19937_64 rng(12345);
    std::vector<cplx> w = random_field(g, rng);
    std::vector<cplx> a = random_field(g, rng), b = random_field(g, rng);
    std::vector<cplx> u1(g.size()), u2(g.size()), out(g.size());
    const int reps = 20;

    struct RowResult {
        const char* name;
        double serial_ms;
        double omp_ms;
    };
    std::vector<RowResult> rows;

    rows.push_back({"derivative",
                    1e3 * time_best_of(reps, [&] {
                        kernels::spectral_derivative_serial(g, w.data(), 1, out.data());
                    }),
                    1e3 * time_best_of(reps, [&] {
                        kernels::spectral_derivative_omp(g, w.data(), 1, out.data());
                    })});
    rows.push_back({"biot_savart",
                    1e3 * time_best_of(reps, [&] {
                        kernels::biot_savart_serial(g, w.data(), u1.data(), u2.data());
                    }),
                    1e3 * time_best_of(reps, [&] {
                        kernels::biot_savart_omp(g, w.data(), u1.data(), u2.data());
                    })});
    rows.push_back({"advection_product",
                    1e3 * time_best_of(reps, [&] {
                        kernels::advection_product_serial(g.n1, g.n2, a.data(), b.data(), u1.data(),
                                                          u2.data(), out.data());
                    }),
                    1e3 * time_best_of(reps, [&] {
                        kernels::advection_product_omp(g.n1, g.n2, a.data(), b.data(), u1.data(),
                                                       u2.data(), out.data());
                    })});
    rows.push_back({"dealias",
                    1e3 * time_best_of(reps, [&] { kernels::dealias_serial(g, out.data()); }),
                    1e3 * time_best_of(reps, [&] { kernels::dealias_omp(g, out.data()); })});
    rows.push_back({"axpy",
                    1e3 * time_best_of(
                              reps, [&] { kernels::axpy_serial(g.size(), a.data(), 0.5, b.data(),
                                                               out.data()); }),
                    1e3 * time_best_of(reps, [&] {
                        kernels::axpy_omp(g.size(), a.data(), 0.5, b.data(), out.data());
                    })});

    std::vector<Vec2> pts(10000);
    std::uniform_real_distribution<double> ux(0.0, 2.0), uy(0.0, 2.0 * m);
    for (auto& p : pts) p = {ux(rng), uy(rng)};
    std::vector<double> vals(g.size()), pout(pts.size());
    for (std::size_t i = 0; i < vals.size(); ++i) vals[i] = a[i].real();
    kernels::InterpGrid gi{vals.data(), g.n1, g.n2, 2.0, 2.0 * m};
    rows.push_back({"lagrange_eval(10k pts)",
                    1e3 * time_best_of(reps, [&] {
                        kernels::lagrange_eval_serial(gi, 6, pts.data(), pts.size(), pout.data());
                    }),
                    1e3 * time_best_of(reps, [&] {
                        kernels::lagrange_eval_omp(gi, 6, pts.data(), pts.size(), pout.data());
                    })});

    double fft_ms = 1e3 * time_best_of(reps, [&] { fft::backward(g.n1, g.n2, out.data()); });

    std::printf("\ngrid %d x %d (m = %d), %d threads\n", g.n1, g.n2, m, omp_get_max_threads());
    std::printf("%-24s %12s %12s %8s\n", "kernel", "serial (ms)", "omp (ms)", "speedup");
    for (const auto& r : rows)
        std::printf("%-24s %12.3f %12.3f %8.2f\n", r.name, r.serial_ms, r.omp_ms,
                    r.serial_ms / r.omp_ms);
    std::printf("%-24s %12.3f   (fftw, single plan)\n", "fft_backward", fft_ms);
}

}  // namespace

int main() {
    bench_grid(128, 4);
    bench_grid(128, 8);
    bench_grid(256, 4);
    return 0;
}

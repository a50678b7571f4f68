#include "shearflow/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>

namespace shearflow::fft {

namespace {

struct PlanPair {
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
};

// Plan creation is not thread-safe in FFTW; execution via fftw_execute_dft is.
// FFTW_MEASURE pays a one-time planning cost per grid; within a process the
// cached plan keeps every execution on one grid bitwise identical.
// FFTW_UNALIGNED lets plans run on plain std::vector storage.
std::mutex g_mutex;
std::map<std::pair<int, int>, PlanPair>& cache() {
    static std::map<std::pair<int, int>, PlanPair> c;
    return c;
}

PlanPair get_plans(int n1, int n2) {
    std::lock_guard<std::mutex> lock(g_mutex);
    auto key = std::make_pair(n1, n2);
    auto it = cache().find(key);
    if (it != cache().end()) return it->second;

    fftw_complex* buf = fftw_alloc_complex(static_cast<std::size_t>(n1) * n2);
    PlanPair p;
    unsigned flags = FFTW_MEASURE | FFTW_UNALIGNED;
    p.fwd = fftw_plan_dft_2d(n1, n2, buf, buf, FFTW_FORWARD, flags);
    p.bwd = fftw_plan_dft_2d(n1, n2, buf, buf, FFTW_BACKWARD, flags);
    fftw_free(buf);
    cache()[key] = p;
    return p;
}

}  // namespace

void forward(int n1, int n2, std::complex<double>* data) {
    PlanPair p = get_plans(n1, n2);
    fftw_execute_dft(p.fwd, reinterpret_cast<fftw_complex*>(data), reinterpret_cast<fftw_complex*>(data));
}

void backward(int n1, int n2, std::complex<double>* data) {
    PlanPair p = get_plans(n1, n2);
    fftw_execute_dft(p.bwd, reinterpret_cast<fftw_complex*>(data), reinterpret_cast<fftw_complex*>(data));
}

}  // namespace shearflow::fft

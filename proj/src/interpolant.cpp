#include "shearflow/interpolant.hpp"

#include <stdexcept>

#include "shearflow/fft.hpp"
#include "shearflow/kernels.hpp"

namespace shearflow {

PaddedInterpolant::PaddedInterpolant(const SpectralField& f, int pad_factor, int order)
    : pad_(pad_factor), order_(order) {
    if (pad_factor < 1) throw std::invalid_argument("PaddedInterpolant: pad_factor must be >= 1");
    if (order < 2 || order > 12 || order % 2 != 0)
        throw std::invalid_argument("PaddedInterpolant: order must be even, in [2,12]");
    const TorusGrid& g = f.grid;
    n1_ = g.n1 * pad_factor;
    n2_ = g.n2 * pad_factor;
    period1_ = g.period1();
    period2_ = g.period2();

    std::vector<std::complex<double>> buf(static_cast<std::size_t>(n1_) * n2_);
    // scatter coefficients into the padded spectrum by signed index
    for (int i1 = 0; i1 < g.n1; ++i1) {
        int j1 = g.index1(i1);
        int p1 = j1 >= 0 ? j1 : j1 + n1_;
        for (int i2 = 0; i2 < g.n2; ++i2) {
            int j2 = g.index2(i2);
            int p2 = j2 >= 0 ? j2 : j2 + n2_;
            buf[static_cast<std::size_t>(p1) * n2_ + p2] = f.at(i1, i2);
        }
    }
    fft::backward(n1_, n2_, buf.data());
    values_.resize(buf.size());
    for (std::size_t i = 0; i < buf.size(); ++i) values_[i] = buf[i].real();
}

double PaddedInterpolant::operator()(Vec2 p) const {
    double out;
    kernels::InterpGrid gi{values_.data(), n1_, n2_, period1_, period2_};
    kernels::lagrange_eval_serial(gi, order_, &p, 1, &out);
    return out;
}

void PaddedInterpolant::eval(std::span<const Vec2> pts, std::span<double> out) const {
    kernels::InterpGrid gi{values_.data(), n1_, n2_, period1_, period2_};
    kernels::lagrange_eval(gi, order_, pts.data(), pts.size(), out.data());
}

}  // namespace shearflow

#pragma once
// Thin FFTW facade: cached c2c plans per grid size, thread-safe execution.

#include <complex>
#include <cstddef>

namespace shearflow::fft {

// In-place 2D transforms on row-major n1 x n2 complex data.
// forward applies no normalization (callers divide by n1*n2);
// backward is the unnormalized inverse.
void forward(int n1, int n2, std::complex<double>* data);
void backward(int n1, int n2, std::complex<double>* data);

}  // namespace shearflow::fft

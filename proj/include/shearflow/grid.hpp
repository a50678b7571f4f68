#pragma once
// Anisotropic torus (R/2Z) x (R/2mZ), uniform collocation grid, FFT mode layout.

#include <complex>
#include <cstddef>
#include <vector>

namespace shearflow {

struct Vec2 {
    double x1 = 0.0;
    double x2 = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x1 + b.x1, a.x2 + b.x2}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x1 - b.x1, a.x2 - b.x2}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x1, s * a.x2}; }

struct TorusGrid {
    int n1 = 0;   // points along x1, period 2
    int n2 = 0;   // points along x2, period 2m
    int m = 1;    // aspect ratio

    double period1() const { return 2.0; }
    double period2() const { return 2.0 * m; }
    double dx1() const { return 2.0 / n1; }
    double dx2() const { return 2.0 * m / n2; }
    double area() const { return 4.0 * m; }
    std::size_t size() const { return static_cast<std::size_t>(n1) * n2; }

    double x1(int i) const { return 2.0 * i / n1; }
    double x2(int j) const { return 2.0 * m * j / n2; }

    // signed integer mode index for FFT bin i: 0,1,...,n/2,-n/2+1,...,-1
    static int mode_index(int i, int n) { return i <= n / 2 ? i : i - n; }
    int index1(int i) const { return mode_index(i, n1); }
    int index2(int j) const { return mode_index(j, n2); }

    // wavenumbers: k1 = pi*j1, k2 = (pi/m)*j2
    double k1(int i) const { return M_PI * index1(i); }
    double k2(int j) const { return (M_PI / m) * index2(j); }

    bool operator==(const TorusGrid&) const = default;
};

// Validates sizes (even, >= 8, power-of-two n1 and n2/m) and m >= 1.
// Throws std::invalid_argument naming the offending value.
TorusGrid make_grid(int n1, int n2, int m);

// Spectral coefficients of a real scalar field, full complex spectrum,
// row-major c[i1*n2 + i2], normalized so c[k] is the Fourier coefficient
// (transform_forward divides by n1*n2).
struct SpectralField {
    TorusGrid grid;
    std::vector<std::complex<double>> c;

    SpectralField() = default;
    explicit SpectralField(const TorusGrid& g) : grid(g), c(g.size()) {}

    std::complex<double>& at(int i1, int i2) { return c[static_cast<std::size_t>(i1) * grid.n2 + i2]; }
    const std::complex<double>& at(int i1, int i2) const { return c[static_cast<std::size_t>(i1) * grid.n2 + i2]; }
};

}  // namespace shearflow

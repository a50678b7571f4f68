#pragma once
// Shared test utilities: closed-form field sampling and reproducible random
// band-limited fields.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <random>
#include <string>

#include "shearflow/grid.hpp"
#include "shearflow/spectral_ops.hpp"

namespace testutil {

using shearflow::SpectralField;
using shearflow::TorusGrid;
using shearflow::Vec2;

inline SpectralField sample_field(const TorusGrid& g,
                                  const std::function<double(double, double)>& f) {
    std::vector<double> v(g.size());
    for (int i = 0; i < g.n1; ++i)
        for (int j = 0; j < g.n2; ++j) v[static_cast<std::size_t>(i) * g.n2 + j] = f(g.x1(i), g.x2(j));
    return shearflow::transform_forward(g, v);
}

// real zero-mean field with modes in |j1| <= b1, |j2| <= b2
inline SpectralField random_band_limited(const TorusGrid& g, int b1, int b2, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> dist;
    SpectralField f(g);
    for (int i = 0; i < g.n1; ++i)
        for (int j = 0; j < g.n2; ++j) {
            int j1 = g.index1(i), j2 = g.index2(j);
            if ((j1 == 0 && j2 == 0) || std::abs(j1) > b1 || std::abs(j2) > b2) continue;
            f.at(i, j) = {dist(rng), dist(rng)};
        }
    shearflow::enforce_real_symmetry(f);
    f.c[0] = 0.0;
    return f;
}

inline double max_coeff_diff(const SpectralField& a, const SpectralField& b) {
    double mx = 0.0;
    for (std::size_t i = 0; i < a.c.size(); ++i) mx = std::max(mx, std::abs(a.c[i] - b.c[i]));
    return mx;
}

inline double max_abs_coeff(const SpectralField& a) {
    double mx = 0.0;
    for (const auto& z : a.c) mx = std::max(mx, std::abs(z));
    return mx;
}

// fresh scratch directory under the system temp root
inline std::filesystem::path scratch_dir(const std::string& tag) {
    auto p = std::filesystem::temp_directory_path() / ("shearflow_test_" + tag);
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
    return p;
}

}  // namespace testutil

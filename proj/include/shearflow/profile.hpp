#pragma once
// Stationary shear profiles u_inf = (f_m(x2), 0) on the 2m-periodic torus,
// with evaluators for f_m, f'_m, f''_m and the m -> infinity limit where one
// is declared. All families give exact steady Euler solutions.

#include <string>
#include <vector>

#include "shearflow/grid.hpp"

namespace shearflow {

enum class ProfileFamily { kolmogorov, smoothed_couette, tanh_shear, custom_series };

ProfileFamily profile_family_from_string(const std::string& s);
std::string to_string(ProfileFamily f);

struct ProfileParams {
    double amplitude = 1.0;  // A (kolmogorov)
    int k = 1;               // integer wavenumber (kolmogorov)
    double a = 1.0;          // steepness (tanh_shear)
    double delta = 0.2;      // turnaround width fraction (smoothed_couette)
    // custom_series: f = sum_j cos_coeffs[j-1] cos(pi j x2/m) + sin_coeffs[j-1] sin(pi j x2/m)
    std::vector<double> cos_coeffs;
    std::vector<double> sin_coeffs;
};

class ShearProfile {
  public:
    ProfileFamily family() const { return family_; }
    const ProfileParams& params() const { return params_; }
    int m() const { return m_; }

    double f(double x2) const;
    double fprime(double x2) const;
    double fsecond(double x2) const;

    // ||f'_m||_inf, dense sampling with golden-section refinement, cached
    double sup_fprime() const { return sup_fprime_; }

    bool has_limit() const;
    double limit_f(double x2) const;

    friend ShearProfile make_profile(ProfileFamily, const ProfileParams&, int);

  private:
    ProfileFamily family_ = ProfileFamily::kolmogorov;
    ProfileParams params_;
    int m_ = 1;
    double sup_fprime_ = 0.0;
    // sine series of f for smoothed_couette: f = sum b_j sin(pi j x2 / m)
    std::vector<double> sine_coeffs_;
    // dense samples of f over one period, for fast evaluation of the series
    std::vector<double> f_table_;
};

ShearProfile make_profile(ProfileFamily family, const ProfileParams& params, int m);

struct ConvergenceRow {
    int m;
    double gap;           // sup over (-m/2, m/2] of |f_m - f| + |f'_m - f'|
    double interior_gap;  // smoothed_couette: sup over the linear region; otherwise = gap
    double sup_fprime;
};

struct ConvergenceTable {
    std::vector<ConvergenceRow> rows;
    bool gaps_decreasing = false;
    bool sup_fprime_bounded = false;  // max over rows finite and no growth trend
};

ConvergenceTable check_profile_convergence(ProfileFamily family, const ProfileParams& params,
                                           const std::vector<int>& m_list);

// omega_inf = -f'_m on the grid (spectral), mean velocity of u_inf.
// Throws if the profile's spectral tail beyond the dealias band exceeds
// 1e-10 of the peak (grid cannot resolve f'_m).
std::pair<SpectralField, Vec2> profile_vorticity(const ShearProfile& p, const TorusGrid& g);

}  // namespace shearflow

#pragma once
// Sweep orchestration: per-(m, sigma) cells run the nonlinear solver at
// +sigma (and -sigma for the finite-difference route), the linearized solver,
// and the Lagrangian integrations in lockstep, then write series, check
// reports and plots into a bundle directory.

#include <filesystem>
#include <string>
#include <vector>

#include "shearflow/checks.hpp"
#include "shearflow/perturbation.hpp"
#include "shearflow/profile.hpp"

namespace shearflow {

struct RouteToggles {
    bool linearized = true;
    bool fd = true;
};

struct ExperimentConfig {
    int n1 = 128;  // n2 = n1 * m per cell, equal spacing on both axes
    ProfileFamily family = ProfileFamily::smoothed_couette;
    ProfileParams profile;
    std::vector<int> m_list{4};
    std::vector<double> sigma_list{1e-2, 5e-3, 2.5e-3};
    UinParams u_in;
    double epsilon = 0.1;
    double T = 20.0;
    double sample_dt = 0.025;
    double cfl = 0.5;
    std::string output_dir = "out";
    RouteToggles routes;
    int label_factor = 2;  // label grid is (n1/factor) x (n2/factor)
    double tau_d = 0.02;   // Gronwall slack
    double d_floor = 1e-3; // indicator floor for the disjunction check
};

ExperimentConfig config_from_json(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& file);
std::string config_to_json(const ExperimentConfig& cfg);

// sweep mode wants the whole sigma_list positive descending; run mode uses
// only the front cell and accepts sigma = 0 there
void validate_config(const ExperimentConfig& cfg, bool sweep);

struct FitReport {
    std::string field;
    bool ok = false;
    double alpha = 0.0;
    double residual = 0.0;
    int samples = 0;
    std::string note;  // refusal reason when !ok
};

struct CellResult {
    int m = 0;
    double sigma = 0.0;
    std::string dir;  // relative to the bundle root
    bool completed = false;
    bool checks_pass = true;
    std::string error;
    std::vector<CheckResult> checks;
    double inf_d = 0.0;
    double argmin_t = 0.0;
    double norm_uin = 0.0;
    double norm_u0 = 0.0;
    double norm_uinf = 0.0;
    double sup_fprime = 0.0;
    double initial_slope_norm = 0.0;  // d||J||/dt at 0, quadratic fit on [0, 0.1]
    double collapse_K = 0.0;          // max_t | ||U||/sigma - ||dU|| | / sigma
    double cross_route_gap = 0.0;     // max_t |dU_fd - dU_lin| over components
    double route_discrepancy = 0.0;   // max_t ||J_fd - J_lin|| on labels
    double vol_det_plus = 0.0;        // max |det - 1| monitors
    double vol_det_minus = 0.0;
    double max_tail_fraction = 0.0;
    double wall_seconds = 0.0;
    std::vector<FitReport> fits;
};

struct SweepResult {
    std::vector<CellResult> cells;
    bool any_execution_error = false;
    bool any_check_failure = false;
};

std::string cell_dir_name(int m, double sigma);

// one cell; writes series.csv (+ fd_series.csv), report.json, meta.json under
// bundle_dir/cells/<name>; throws on execution errors
CellResult run_cell(const ExperimentConfig& cfg, int m, double sigma,
                    const std::filesystem::path& bundle_dir);

// whole bundle: config copy, cells (parallel when sweep), summary.json, plots
SweepResult run_experiment(const ExperimentConfig& cfg, bool sweep, int threads);

// re-run the checkers over the stored series of a bundle
SweepResult check_bundle(const std::filesystem::path& bundle_dir);

// render the SVG plots from the stored series
void plot_bundle(const std::filesystem::path& bundle_dir);

}  // namespace shearflow

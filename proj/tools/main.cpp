#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "shearflow/checks.hpp"
#include "shearflow/experiment.hpp"
#include "shearflow/kernels.hpp"
#include "shearflow/series.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using namespace shearflow;

void print_cells(const SweepResult& sw) {
    for (const auto& c : sw.cells) {
        if (!c.completed) {
            std::cout << c.dir << ": FAILED (" << c.error << ")\n";
            continue;
        }
        std::cout << c.dir << ": " << (c.checks_pass ? "ok" : "CHECK FAILURES");
        if (c.sigma > 0.0) std::cout << ", inf_t D = " << format_double(c.inf_d);
        std::cout << '\n';
        for (const auto& ch : c.checks)
            if (!ch.pass)
                std::cout << "  " << ch.check_name << " failed at t = " << format_double(ch.worst_t)
                          << " (margin " << format_double(ch.margin) << ")\n";
    }
}

int exit_code(const SweepResult& sw) {
    if (sw.any_execution_error) return 1;
    if (sw.any_check_failure) return 2;
    return 0;
}

int resolve_threads(int cli_threads) {
    int n = cli_threads;
    if (const char* env = std::getenv("SHEARFLOW_THREADS"); env && *env) {
        int cap = std::atoi(env);
        if (cap > 0 && (n <= 0 || cap < n)) n = cap;
    }
    if (n <= 0) {
#ifdef _OPENMP
        n = omp_get_max_threads();
#else
        n = 1;
#endif
    }
    return n;
}

ExperimentConfig load_with_env(const std::string& path) {
    ExperimentConfig cfg = load_config(path);
    if (const char* env = std::getenv("SHEARFLOW_OUTPUT_DIR"); env && *env) cfg.output_dir = env;
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "shear-flow perturbation experiments\n"
        "Environment: SHEARFLOW_OUTPUT_DIR overrides the config output directory,\n"
        "SHEARFLOW_THREADS caps cell parallelism (both are overridden by flags)."};
    app.require_subcommand(1);

    std::string config_path, bundle_path, field_name = "U2", cell_name;
    int threads = 0;
    std::vector<double> window{10.0, 20.0};

    auto* run = app.add_subcommand("run", "run the single cell (m_list[0], sigma_list[0])");
    run->add_option("config", config_path, "config file (JSON)")->required();
    run->add_option("--threads", threads, "worker cap (unused for a single cell)");

    auto* sweep = app.add_subcommand("sweep", "run every (m, sigma) cell of the grid");
    sweep->add_option("config", config_path, "config file (JSON)")->required();
    sweep->add_option("--threads", threads, "parallel cell cap (default: all cores)");

    auto* check = app.add_subcommand("check", "re-run the checkers on a stored bundle");
    check->add_option("bundle", bundle_path, "bundle directory")->required();

    auto* fit = app.add_subcommand("fit", "decay-exponent fit on stored series");
    fit->add_option("bundle", bundle_path, "bundle directory")->required();
    fit->add_option("--field", field_name, "series field: U1, U2, dU1 or dU2");
    fit->add_option("--window", window, "fit window [t_a t_b]")->expected(2);
    fit->add_option("--cell", cell_name, "cell directory name (default: all cells)");

    auto* plot = app.add_subcommand("plot", "render SVG plots from a stored bundle");
    plot->add_option("bundle", bundle_path, "bundle directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (*run || *sweep) {
            ExperimentConfig cfg = load_with_env(config_path);
            SweepResult sw = run_experiment(cfg, sweep->parsed(), resolve_threads(threads));
            print_cells(sw);
            std::cout << "bundle written to " << cfg.output_dir << '\n';
            return exit_code(sw);
        }
        if (*check) {
            SweepResult sw = check_bundle(bundle_path);
            print_cells(sw);
            return exit_code(sw);
        }
        if (*fit) {
            SeriesField field = series_field_from_string(field_name);
            SweepResult sw = check_bundle(bundle_path);
            bool found = false;
            for (const auto& c : sw.cells) {
                if (!c.completed) continue;
                std::string name = cell_dir_name(c.m, c.sigma);
                if (!cell_name.empty() && name != cell_name) continue;
                found = true;
                PerturbationSeries s =
                    read_series_csv(std::filesystem::path(bundle_path) / c.dir / "series.csv");
                try {
                    FitResult fr = fit_decay(s, field, window[0], window[1]);
                    std::cout << name << " " << field_name << ": alpha = "
                              << format_double(fr.alpha) << ", residual = "
                              << format_double(fr.residual) << " (" << fr.samples
                              << " samples)\n";
                } catch (const std::invalid_argument& e) {
                    std::cout << name << " " << field_name << ": fit refused: " << e.what()
                              << '\n';
                }
            }
            if (!found) {
                std::cerr << "no matching cell"
                          << (cell_name.empty() ? "" : " '" + cell_name + "'") << '\n';
                return 1;
            }
            return 0;
        }
        if (*plot) {
            plot_bundle(bundle_path);
            std::cout << "plots written to " << bundle_path << "/plots\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}

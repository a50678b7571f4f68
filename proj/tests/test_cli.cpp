#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <sys/wait.h>

#include "helpers.hpp"
#include "shearflow/experiment.hpp"
#include "shearflow/series.hpp"

using namespace shearflow;
namespace fs = std::filesystem;

namespace {

int run_cmd(const std::string& cmd) {
    int rc = std::system((cmd + " > /dev/null 2>&1").c_str());
    REQUIRE(rc != -1);
    REQUIRE(WIFEXITED(rc));
    return WEXITSTATUS(rc);
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    REQUIRE(f.good());
    return std::string((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
}

fs::path write_config(const fs::path& dir, const fs::path& out_dir) {
    ExperimentConfig cfg;
    cfg.n1 = 32;
    cfg.family = ProfileFamily::kolmogorov;
    cfg.profile.amplitude = 1.0;
    cfg.profile.k = 1;
    cfg.m_list = {2};
    cfg.sigma_list = {1e-3};
    cfg.T = 0.5;
    cfg.sample_dt = 0.05;
    cfg.label_factor = 2;
    cfg.output_dir = out_dir.string();
    fs::path file = dir / "config.json";
    std::ofstream f(file, std::ios::binary);
    f << config_to_json(cfg);
    REQUIRE(f.good());
    return file;
}

}  // namespace

TEST_CASE("cli end to end") {
    const std::string bin = SHEARFLOW_BIN;
    fs::path dir = testutil::scratch_dir("cli");
    fs::path bundle = dir / "bundle";
    fs::path cfg_file = write_config(dir, bundle);

    // a successful run exits 0 and writes the bundle
    CHECK(run_cmd(bin + " run " + cfg_file.string()) == 0);
    std::string cell = "cells/" + cell_dir_name(2, 1e-3);
    REQUIRE(fs::exists(bundle / cell / "series.csv"));
    CHECK(fs::exists(bundle / "summary.json"));

    // stored bundle passes its own re-check
    CHECK(run_cmd(bin + " check " + bundle.string()) == 0);

    // fit over the stored series
    CHECK(run_cmd(bin + " fit " + bundle.string() + " --field U2 --window 0.25 0.5") == 0);
    CHECK(run_cmd(bin + " fit " + bundle.string() + " --cell no_such_cell") == 1);

    // plots are regenerated on demand and are plausible svg markup
    fs::remove_all(bundle / "plots");
    CHECK(run_cmd(bin + " plot " + bundle.string()) == 0);
    int n_svg = 0;
    for (const auto& e : fs::directory_iterator(bundle / "plots")) {
        if (e.path().extension() != ".svg") continue;
        ++n_svg;
        std::string text = slurp(e.path());
        CHECK(text.find("<svg") != std::string::npos);
        CHECK(text.rfind("</svg>") != std::string::npos);
        CHECK(text.find("<polyline") != std::string::npos);
    }
    CHECK(n_svg == 3);  // two per cell plus the indicator overlay

    // a doctored series turns check into exit code 2
    PerturbationSeries s = read_series_csv(bundle / cell / "series.csv");
    for (auto& r : s.rows) {
        r.J *= 10.0;
        r.J1 *= 10.0;
        r.J2 *= 10.0;
    }
    write_series_csv(bundle / cell / "series.csv", s);
    CHECK(run_cmd(bin + " check " + bundle.string()) == 2);

    // usage and i/o errors exit 1
    CHECK(run_cmd(bin + " run " + (dir / "missing.json").string()) == 1);
    CHECK(run_cmd(bin + " frobnicate") == 1);
    CHECK(run_cmd(bin + " run") == 1);
    CHECK(run_cmd(bin + " check " + (dir / "not_a_bundle").string()) == 1);

    // --help exits 0
    CHECK(run_cmd(bin + " --help") == 0);

    fs::remove_all(dir);
}

TEST_CASE("cli environment overrides") {
    const std::string bin = SHEARFLOW_BIN;
    fs::path dir = testutil::scratch_dir("cli_env");
    fs::path cfg_file = write_config(dir, dir / "ignored");
    fs::path redirected = dir / "redirected";

    int rc = run_cmd("SHEARFLOW_OUTPUT_DIR=" + redirected.string() + " SHEARFLOW_THREADS=1 " +
                     bin + " run " + cfg_file.string());
    CHECK(rc == 0);
    CHECK(fs::exists(redirected / "summary.json"));
    CHECK_FALSE(fs::exists(dir / "ignored"));
    fs::remove_all(dir);
}

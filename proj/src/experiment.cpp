#include "shearflow/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <optional>
#include <set>
#include <stdexcept>

#include <json.hpp>

#include "shearflow/euler.hpp"
#include "shearflow/flow_map.hpp"
#include "shearflow/linear_euler.hpp"
#include "shearflow/series.hpp"
#include "shearflow/spectral_ops.hpp"
#include "shearflow/svg_plot.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace shearflow {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

void reject_unknown_keys(const json& j, const std::set<std::string>& allowed,
                         const std::string& where) {
    for (const auto& [key, val] : j.items()) {
        (void)val;
        if (!allowed.count(key))
            throw std::invalid_argument("config: unknown field '" + where + key + "'");
    }
}

template <typename T>
void read_field(const json& j, const char* key, T& out) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception&) {
        throw std::invalid_argument(std::string("config: field '") + key + "' has the wrong type");
    }
}

json checks_to_json(const std::vector<CheckResult>& checks) {
    json arr = json::array();
    for (const auto& c : checks)
        arr.push_back({{"check_name", c.check_name},
                       {"pass", c.pass},
                       {"worst_t", c.worst_t},
                       {"margin", c.margin}});
    return arr;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
    f << text;
    if (!f) throw std::runtime_error("write failed for " + path.string());
}

json read_json_file(const fs::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path.string());
    try {
        return json::parse(f);
    } catch (const json::exception& e) {
        throw std::runtime_error(path.string() + ": " + e.what());
    }
}

// checks recomputable from stored series + cell metadata; shared by run_cell
// and check_bundle so `check` reproduces the stored verdicts exactly
struct CellCheckInputs {
    double sigma = 0.0;
    double norm_uin = 0.0;
    double norm_u0 = 0.0;
    double norm_uinf = 0.0;
    double sup_fprime = 0.0;
    bool has_chain = false;  // some route produced J and dU columns
    bool chain_on_fd = false;
};

struct CellChecks {
    std::vector<CheckResult> checks;
    IndicatorResult indicator;
    bool pass = true;
};

CellChecks evaluate_cell_checks(const PerturbationSeries& main_series,
                                const PerturbationSeries* fd_series, const CellCheckInputs& in,
                                const ExperimentConfig& cfg) {
    CellChecks out;
    if (in.has_chain) {
        const PerturbationSeries& chain_src =
            in.chain_on_fd && fd_series ? *fd_series : main_series;
        auto chain = check_gronwall_chain(chain_src, in.sup_fprime, in.norm_uin, cfg.tau_d);
        if (in.sigma > 0.0) {
            out.indicator = theorem_indicator(main_series, in.sigma, cfg.epsilon);
            out.checks.push_back(cross_reference(out.indicator, chain, cfg.d_floor));
        }
        out.checks.insert(out.checks.end(), chain.begin(), chain.end());
    } else if (in.sigma > 0.0) {
        out.indicator = theorem_indicator(main_series, in.sigma, cfg.epsilon);
    }
    out.checks.push_back(check_energy_remark(main_series, in.norm_u0, in.norm_uinf));
    if (in.sigma == 0.0) {
        double worst = 0.0, worst_t = 0.0;
        for (const auto& r : main_series.rows) {
            double v = std::hypot(r.U1, r.U2);
            if (v > worst) {
                worst = v;
                worst_t = r.t;
            }
        }
        out.checks.push_back({"stationarity", worst <= 1e-9, worst_t, 1e-9 - worst});
    }
    for (const auto& c : out.checks)
        if (!c.pass) out.pass = false;
    return out;
}

std::vector<FitReport> evaluate_fits(const PerturbationSeries& s, double T) {
    std::vector<FitReport> out;
    double t_a = T / 2.0, t_b = T;
    for (SeriesField f : {SeriesField::U1, SeriesField::U2, SeriesField::dU1, SeriesField::dU2}) {
        FitReport r;
        r.field = to_string(f);
        try {
            FitResult fit = fit_decay(s, f, t_a, t_b);
            r.ok = true;
            r.alpha = fit.alpha;
            r.residual = fit.residual;
            r.samples = fit.samples;
        } catch (const std::invalid_argument& e) {
            r.note = e.what();
        }
        out.push_back(std::move(r));
    }
    return out;
}

json fits_to_json(const std::vector<FitReport>& fits) {
    json arr = json::array();
    for (const auto& f : fits) {
        json j = {{"field", f.field}, {"ok", f.ok}};
        if (f.ok) {
            j["alpha"] = f.alpha;
            j["residual"] = f.residual;
            j["samples"] = f.samples;
        } else {
            j["note"] = f.note;
        }
        arr.push_back(std::move(j));
    }
    return arr;
}

}  // namespace

ExperimentConfig config_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("config: ") + e.what());
    }
    ExperimentConfig cfg;
    reject_unknown_keys(j, {"n1", "profile", "m_list", "sigma_list", "u_in", "epsilon", "T",
                            "sample_dt", "cfl", "output_dir", "routes", "label_factor", "tau_d",
                            "d_floor"},
                        "");
    read_field(j, "n1", cfg.n1);
    if (j.contains("profile")) {
        const json& p = j.at("profile");
        reject_unknown_keys(p, {"family", "amplitude", "k", "a", "delta", "cos_coeffs",
                                "sin_coeffs"},
                            "profile.");
        std::string family;
        read_field(p, "family", family);
        if (!family.empty()) cfg.family = profile_family_from_string(family);
        read_field(p, "amplitude", cfg.profile.amplitude);
        read_field(p, "k", cfg.profile.k);
        read_field(p, "a", cfg.profile.a);
        read_field(p, "delta", cfg.profile.delta);
        read_field(p, "cos_coeffs", cfg.profile.cos_coeffs);
        read_field(p, "sin_coeffs", cfg.profile.sin_coeffs);
    }
    read_field(j, "m_list", cfg.m_list);
    read_field(j, "sigma_list", cfg.sigma_list);
    if (j.contains("u_in")) {
        const json& u = j.at("u_in");
        reject_unknown_keys(u, {"A", "k", "center", "width", "normalize"}, "u_in.");
        read_field(u, "A", cfg.u_in.amplitude);
        read_field(u, "k", cfg.u_in.k);
        read_field(u, "center", cfg.u_in.center);
        read_field(u, "width", cfg.u_in.width);
        read_field(u, "normalize", cfg.u_in.normalize);
    }
    read_field(j, "epsilon", cfg.epsilon);
    read_field(j, "T", cfg.T);
    read_field(j, "sample_dt", cfg.sample_dt);
    read_field(j, "cfl", cfg.cfl);
    read_field(j, "output_dir", cfg.output_dir);
    if (j.contains("routes")) {
        const json& r = j.at("routes");
        reject_unknown_keys(r, {"linearized", "fd"}, "routes.");
        read_field(r, "linearized", cfg.routes.linearized);
        read_field(r, "fd", cfg.routes.fd);
    }
    read_field(j, "label_factor", cfg.label_factor);
    read_field(j, "tau_d", cfg.tau_d);
    read_field(j, "d_floor", cfg.d_floor);
    return cfg;
}

ExperimentConfig load_config(const fs::path& file) {
    std::ifstream f(file, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open config file " + file.string());
    std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    return config_from_json(text);
}

std::string config_to_json(const ExperimentConfig& cfg) {
    json j;
    j["n1"] = cfg.n1;
    j["profile"] = {{"family", to_string(cfg.family)},
                    {"amplitude", cfg.profile.amplitude},
                    {"k", cfg.profile.k},
                    {"a", cfg.profile.a},
                    {"delta", cfg.profile.delta}};
    if (!cfg.profile.cos_coeffs.empty()) j["profile"]["cos_coeffs"] = cfg.profile.cos_coeffs;
    if (!cfg.profile.sin_coeffs.empty()) j["profile"]["sin_coeffs"] = cfg.profile.sin_coeffs;
    j["m_list"] = cfg.m_list;
    j["sigma_list"] = cfg.sigma_list;
    j["u_in"] = {{"A", cfg.u_in.amplitude},
                 {"k", cfg.u_in.k},
                 {"center", cfg.u_in.center},
                 {"width", cfg.u_in.width},
                 {"normalize", cfg.u_in.normalize}};
    j["epsilon"] = cfg.epsilon;
    j["T"] = cfg.T;
    j["sample_dt"] = cfg.sample_dt;
    j["cfl"] = cfg.cfl;
    j["output_dir"] = cfg.output_dir;
    j["routes"] = {{"linearized", cfg.routes.linearized}, {"fd", cfg.routes.fd}};
    j["label_factor"] = cfg.label_factor;
    j["tau_d"] = cfg.tau_d;
    j["d_floor"] = cfg.d_floor;
    return j.dump(2) + "\n";
}

void validate_config(const ExperimentConfig& cfg, bool sweep) {
    if (cfg.m_list.empty()) throw std::invalid_argument("config: m_list is empty");
    for (int m : cfg.m_list)
        if (m < 1) throw std::invalid_argument("config: m_list entries must be >= 1");
    if (cfg.sigma_list.empty()) throw std::invalid_argument("config: sigma_list is empty");
    if (sweep) {
        for (std::size_t i = 0; i < cfg.sigma_list.size(); ++i) {
            if (cfg.sigma_list[i] <= 0.0)
                throw std::invalid_argument("config: sigma_list must be positive for sweeps");
            if (i > 0 && cfg.sigma_list[i] >= cfg.sigma_list[i - 1])
                throw std::invalid_argument("config: sigma_list must be strictly descending");
        }
    } else if (cfg.sigma_list.front() < 0.0) {
        throw std::invalid_argument("config: sigma must be >= 0");
    }
    if (!(cfg.epsilon > 0.0 && cfg.epsilon < 1.0))
        throw std::invalid_argument("config: epsilon must lie in (0,1)");
    if (cfg.T <= 0.0) throw std::invalid_argument("config: T must be positive");
    if (cfg.sample_dt <= 0.0) throw std::invalid_argument("config: sample_dt must be positive");
    double k = cfg.T / cfg.sample_dt;
    if (std::fabs(k - std::round(k)) > 1e-9 || std::round(k) < 1.0)
        throw std::invalid_argument("config: T must be a positive multiple of sample_dt");
    if (!(cfg.cfl > 0.0 && cfg.cfl <= 1.0))
        throw std::invalid_argument("config: cfl must lie in (0,1]");
    if (cfg.label_factor < 1 || cfg.n1 % cfg.label_factor != 0)
        throw std::invalid_argument("config: label_factor must divide n1");
    if (!(cfg.tau_d >= 0.0 && cfg.tau_d < 1.0))
        throw std::invalid_argument("config: tau_d must lie in [0,1)");
    if (cfg.d_floor <= 0.0) throw std::invalid_argument("config: d_floor must be positive");
    if (cfg.u_in.width <= 0.0) throw std::invalid_argument("config: u_in.width must be positive");
    if (cfg.u_in.k < 0) throw std::invalid_argument("config: u_in.k must be >= 0");
    int m_min = *std::min_element(cfg.m_list.begin(), cfg.m_list.end());
    if (std::fabs(cfg.u_in.center) + cfg.u_in.width >= m_min)
        throw std::invalid_argument(
            "config: u_in support |center| + width must fit inside the smallest m");
    if (cfg.output_dir.empty()) throw std::invalid_argument("config: output_dir is empty");
    // grid constraints surface early with the field name rather than from make_grid
    if (cfg.n1 < 8 || (cfg.n1 & (cfg.n1 - 1)) != 0)
        throw std::invalid_argument("config: n1 must be a power of two >= 8");
}

std::string cell_dir_name(int m, double sigma) {
    return "m" + std::to_string(m) + "_sigma" + format_double(sigma);
}

CellResult run_cell(const ExperimentConfig& cfg, int m, double sigma,
                    const fs::path& bundle_dir) {
    auto wall0 = std::chrono::steady_clock::now();
    CellResult res;
    res.m = m;
    res.sigma = sigma;
    res.dir = "cells/" + cell_dir_name(m, sigma);
    fs::path cdir = bundle_dir / res.dir;
    fs::create_directories(cdir);

    const TorusGrid g = make_grid(cfg.n1, cfg.n1 * m, m);
    auto profile = std::make_shared<const ShearProfile>(make_profile(cfg.family, cfg.profile, m));
    res.sup_fprime = profile->sup_fprime();
    res.norm_uin = uin_norm(cfg.u_in);

    const bool lin = cfg.routes.linearized;
    const bool fd = cfg.routes.fd && sigma > 0.0;

    FlowState shear = shear_state(*profile, g);
    auto [uinf1, uinf2] = velocity_from_vorticity(shear.omega, shear.mean);
    res.norm_uinf = l2_norm(uinf1, uinf2);

    SpectralField win = uin_vorticity(cfg.u_in, g);
    FlowState sp = shear;
    for (std::size_t i = 0; i < win.c.size(); ++i) sp.omega.c[i] += sigma * win.c[i];
    {
        auto [u01, u02] = velocity_from_vorticity(sp.omega, sp.mean);
        res.norm_u0 = l2_norm(u01, u02);
    }
    FlowState sm = shear;
    if (fd)
        for (std::size_t i = 0; i < win.c.size(); ++i) sm.omega.c[i] -= sigma * win.c[i];
    LinearState sl{win, profile, 0.0};

    const int p1 = cfg.n1 / cfg.label_factor;
    const int p2 = (cfg.n1 * m) / cfg.label_factor;
    const LabelGrid lg = make_label_grid(p1, p2, m);
    FlowMap fmP = initial_flow_map(lg), fmM = initial_flow_map(lg), fm0 = initial_flow_map(lg);
    JacobiField J = initial_jacobi(lg);
    std::vector<double> f_at_labels(lg.size());
    for (int i = 0; i < p1; ++i)
        for (int j = 0; j < p2; ++j)
            f_at_labels[static_cast<std::size_t>(i) * p2 + j] = profile->f(lg.label(i, j).x2);

    EulerAdvancer ap(g, cfg.cfl);
    std::optional<EulerAdvancer> am;
    if (fd) am.emplace(g, cfg.cfl);
    std::optional<LinearAdvancer> al;
    if (lin) al.emplace(g, profile, cfg.cfl);
    SampledProvider provP(4), provM(4), provL(4);

    auto push_full = [](SampledProvider& prov, const FlowState& s) {
        auto [u1, u2] = velocity_from_vorticity(s.omega, s.mean);
        prov.push(s.t, u1, u2);
    };
    auto push_lin = [](SampledProvider& prov, const LinearState& s) {
        auto [u1, u2] = velocity_from_vorticity(s.omega_prime, Vec2{0.0, 0.0});
        prov.push(s.t, u1, u2);
    };

    PerturbationSeries series, fd_series;
    auto record = [&](double t) {
        SeriesRow row;
        row.t = t;
        auto [u1, u2] = velocity_from_vorticity(sp.omega, sp.mean);
        row.U1 = l2_norm_diff(u1, uinf1);
        row.U2 = l2_norm_diff(u2, uinf2);
        if (lin) {
            auto [l1, l2f] = velocity_from_vorticity(sl.omega_prime, Vec2{0.0, 0.0});
            row.dU1 = l2_norm(l1);
            row.dU2 = l2_norm(l2f);
            row.J = label_l2_norm(J);
            row.J1 = label_component_norm(J, 1);
            row.J2 = label_component_norm(J, 2);
        }
        Diagnostics d = diagnostics(sp);
        row.energy = d.energy;
        row.enstrophy = d.enstrophy;
        res.max_tail_fraction = std::max(res.max_tail_fraction, d.tail_enstrophy_fraction);

        if (fd) {
            SeriesRow frow = row;
            JacobiField Jfd = fd_jacobi_field(fmP, fmM, sigma);
            frow.J = label_l2_norm(Jfd);
            frow.J1 = label_component_norm(Jfd, 1);
            frow.J2 = label_component_norm(Jfd, 2);
            auto [v1, v2] = velocity_from_vorticity(sm.omega, sm.mean);
            frow.dU1 = l2_norm_diff(u1, v1) / (2.0 * sigma);
            frow.dU2 = l2_norm_diff(u2, v2) / (2.0 * sigma);
            fd_series.rows.push_back(frow);

            res.vol_det_plus = std::max(res.vol_det_plus, volume_det_max_error(fmP));
            res.vol_det_minus = std::max(res.vol_det_minus, volume_det_max_error(fmM));
            if (lin) {
                res.cross_route_gap =
                    std::max({res.cross_route_gap, std::fabs(frow.dU1 - row.dU1),
                              std::fabs(frow.dU2 - row.dU2)});
                JacobiField diff = Jfd;
                for (std::size_t k = 0; k < diff.J.size(); ++k)
                    diff.J[k] = {diff.J[k].x1 - J.J[k].x1, diff.J[k].x2 - J.J[k].x2};
                res.route_discrepancy = std::max(res.route_discrepancy, label_l2_norm(diff));
            } else {
                // single available route carries the J columns
                row.J = frow.J;
                row.J1 = frow.J1;
                row.J2 = frow.J2;
            }
        }
        if (lin && sigma > 0.0) {
            double gap = std::fabs(std::hypot(row.U1, row.U2) / sigma -
                                   std::hypot(row.dU1, row.dU2));
            res.collapse_K = std::max(res.collapse_K, gap / sigma);
        }
        series.rows.push_back(row);
    };

    const int K = static_cast<int>(std::round(cfg.T / cfg.sample_dt));
    const double half = cfg.sample_dt / 2.0;
    const double h = cfg.sample_dt;

    if (fd) {
        push_full(provP, sp);
        push_full(provM, sm);
    }
    if (lin) push_lin(provL, sl);
    record(0.0);

    for (int j = 1; j <= 2 * K; ++j) {
        double t = (j == 2 * K) ? cfg.T : j * half;
        ap.advance(sp, t);
        if (fd) am->advance(sm, t);
        if (lin) al->advance(sl, t);
        if (fd) {
            push_full(provP, sp);
            push_full(provM, sm);
        }
        if (lin) push_lin(provL, sl);
        if (j % 2) continue;

        if (fd) {
            fmP = advect(fmP, provP, h);
            fmM = advect(fmM, provM, h);
        }
        if (lin) {
            J = jacobi_step(J, fm0, provL, *profile, h);
            for (std::size_t k = 0; k < fm0.d.size(); ++k) fm0.d[k].x1 = t * f_at_labels[k];
            fm0.t = t;
        }
        record(t);
    }

    finalize_series(series);
    write_series_csv(cdir / "series.csv", series);
    if (fd) {
        finalize_series(fd_series);
        write_series_csv(cdir / "fd_series.csv", fd_series);
    }

    if (lin || fd) {
        std::vector<double> ts, js;
        for (const auto& r : series.rows) {
            ts.push_back(r.t);
            js.push_back(r.J);
        }
        try {
            res.initial_slope_norm = initial_slope(ts, js, 0.1);
        } catch (const std::invalid_argument&) {
            res.initial_slope_norm = 0.0;  // too few early samples; left unreported
        }
    }

    CellCheckInputs in;
    in.sigma = sigma;
    in.norm_uin = res.norm_uin;
    in.norm_u0 = res.norm_u0;
    in.norm_uinf = res.norm_uinf;
    in.sup_fprime = res.sup_fprime;
    in.has_chain = lin || fd;
    in.chain_on_fd = !lin && fd;
    CellChecks cc = evaluate_cell_checks(series, fd ? &fd_series : nullptr, in, cfg);
    res.checks = cc.checks;
    res.checks_pass = cc.pass;
    res.inf_d = cc.indicator.inf_d;
    res.argmin_t = cc.indicator.argmin_t;
    res.fits = evaluate_fits(series, cfg.T);

    res.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - wall0).count();
    res.completed = true;

    json report;
    report["checks"] = checks_to_json(res.checks);
    report["checks_pass"] = res.checks_pass;
    if (sigma > 0.0) report["indicator"] = {{"inf_D", res.inf_d}, {"argmin_t", res.argmin_t}};
    report["fits"] = fits_to_json(res.fits);
    write_text(cdir / "report.json", report.dump(2) + "\n");

    json meta;
    meta["m"] = m;
    meta["sigma"] = sigma;
    meta["n1"] = g.n1;
    meta["n2"] = g.n2;
    meta["labels"] = {{"p1", p1}, {"p2", p2}};
    meta["routes"] = {{"linearized", lin}, {"fd", fd}};
    meta["norm_uin"] = res.norm_uin;
    meta["norm_u0"] = res.norm_u0;
    meta["norm_uinf"] = res.norm_uinf;
    meta["sup_fprime"] = res.sup_fprime;
    meta["initial_slope"] = res.initial_slope_norm;
    meta["collapse_K"] = res.collapse_K;
    meta["cross_route_gap"] = res.cross_route_gap;
    meta["route_discrepancy"] = res.route_discrepancy;
    meta["vol_det_plus"] = res.vol_det_plus;
    meta["vol_det_minus"] = res.vol_det_minus;
    meta["max_tail_fraction"] = res.max_tail_fraction;
    meta["wall_seconds"] = res.wall_seconds;
    write_text(cdir / "meta.json", meta.dump(2) + "\n");

    return res;
}

namespace {

json summary_json(const ExperimentConfig& cfg, const SweepResult& sw) {
    json cells = json::array();
    for (const auto& c : sw.cells) {
        json jc = {{"m", c.m},
                   {"sigma", c.sigma},
                   {"dir", c.dir},
                   {"completed", c.completed}};
        if (!c.completed) {
            jc["error"] = c.error;
        } else {
            jc["checks_pass"] = c.checks_pass;
            jc["inf_D"] = c.inf_d;
            jc["argmin_t"] = c.argmin_t;
            jc["norm_uin"] = c.norm_uin;
            jc["initial_slope"] = c.initial_slope_norm;
            jc["collapse_K"] = c.collapse_K;
            jc["route_discrepancy"] = c.route_discrepancy;
            jc["wall_seconds"] = c.wall_seconds;
        }
        cells.push_back(std::move(jc));
    }

    // inf_t D tabulated over sigma x m, plus the stability ratios the theorem
    // witnesses: spread across sigma (per m) and across m (per sigma)
    json table = json::array();
    for (const auto& c : sw.cells)
        if (c.completed && c.sigma > 0.0)
            table.push_back({{"m", c.m}, {"sigma", c.sigma}, {"inf_D", c.inf_d}});

    json sigma_stability = json::array();
    for (int m : cfg.m_list) {
        double lo = 0.0, hi = 0.0;
        bool any = false;
        for (const auto& c : sw.cells) {
            if (!c.completed || c.m != m || c.sigma <= 0.0) continue;
            if (!any) {
                lo = hi = c.inf_d;
                any = true;
            } else {
                lo = std::min(lo, c.inf_d);
                hi = std::max(hi, c.inf_d);
            }
        }
        if (any && lo > 0.0)
            sigma_stability.push_back({{"m", m}, {"max_over_min", hi / lo}});
    }

    json m_agreement = json::array();
    for (double s : cfg.sigma_list) {
        double lo = 0.0, hi = 0.0;
        bool any = false;
        for (const auto& c : sw.cells) {
            if (!c.completed || c.sigma != s) continue;
            if (!any) {
                lo = hi = c.inf_d;
                any = true;
            } else {
                lo = std::min(lo, c.inf_d);
                hi = std::max(hi, c.inf_d);
            }
        }
        if (any && lo > 0.0)
            m_agreement.push_back({{"sigma", s}, {"rel_spread", hi / lo - 1.0}});
    }

    // Richardson slope of the fd-vs-linearized Jacobi discrepancy in sigma
    json richardson = json::array();
    for (int m : cfg.m_list) {
        std::vector<double> xs, ys;
        for (const auto& c : sw.cells)
            if (c.completed && c.m == m && c.sigma > 0.0 && c.route_discrepancy > 0.0) {
                xs.push_back(std::log(c.sigma));
                ys.push_back(std::log(c.route_discrepancy));
            }
        if (xs.size() < 2) continue;
        double n = static_cast<double>(xs.size());
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            sx += xs[i];
            sy += ys[i];
            sxx += xs[i] * xs[i];
            sxy += xs[i] * ys[i];
        }
        double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        richardson.push_back({{"m", m}, {"slope", slope}});
    }

    json j;
    j["cells"] = std::move(cells);
    j["indicator_table"] = std::move(table);
    j["sigma_stability"] = std::move(sigma_stability);
    j["m_agreement"] = std::move(m_agreement);
    j["richardson"] = std::move(richardson);
    j["all_completed"] = !sw.any_execution_error;
    j["all_checks_pass"] = !sw.any_check_failure;
    return j;
}

}  // namespace

SweepResult run_experiment(const ExperimentConfig& cfg, bool sweep, int threads) {
    validate_config(cfg, sweep);
    fs::path bundle = cfg.output_dir;
    fs::create_directories(bundle / "cells");
    write_text(bundle / "config.json", config_to_json(cfg));

    std::vector<std::pair<int, double>> cells;
    if (sweep) {
        for (int m : cfg.m_list)
            for (double s : cfg.sigma_list) cells.emplace_back(m, s);
    } else {
        cells.emplace_back(cfg.m_list.front(), cfg.sigma_list.front());
    }

    SweepResult sw;
    sw.cells.resize(cells.size());
    int nthreads = std::max(1, threads);

#pragma omp parallel for schedule(dynamic, 1) num_threads(nthreads)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(cells.size()); ++i) {
        auto [m, s] = cells[i];
        try {
            sw.cells[i] = run_cell(cfg, m, s, bundle);
        } catch (const std::exception& e) {
            CellResult fail;
            fail.m = m;
            fail.sigma = s;
            fail.dir = "cells/" + cell_dir_name(m, s);
            fail.completed = false;
            fail.error = e.what();
            sw.cells[i] = std::move(fail);
        }
    }

    for (const auto& c : sw.cells) {
        if (!c.completed) sw.any_execution_error = true;
        else if (!c.checks_pass) sw.any_check_failure = true;
    }

    write_text(bundle / "summary.json", summary_json(cfg, sw).dump(2) + "\n");
    plot_bundle(bundle);
    return sw;
}

SweepResult check_bundle(const fs::path& bundle_dir) {
    ExperimentConfig cfg = load_config(bundle_dir / "config.json");
    SweepResult sw;
    json summary = read_json_file(bundle_dir / "summary.json");
    if (!summary.contains("cells") || !summary["cells"].is_array())
        throw std::runtime_error("summary.json: missing cells array");

    for (const auto& jc : summary["cells"]) {
        CellResult res;
        res.m = jc.at("m").get<int>();
        res.sigma = jc.at("sigma").get<double>();
        res.dir = jc.at("dir").get<std::string>();
        if (!jc.at("completed").get<bool>()) {
            res.completed = false;
            res.error = jc.value("error", std::string("unknown"));
            sw.cells.push_back(std::move(res));
            sw.any_execution_error = true;
            continue;
        }
        fs::path cdir = bundle_dir / res.dir;
        json meta = read_json_file(cdir / "meta.json");
        PerturbationSeries series = read_series_csv(cdir / "series.csv");
        std::optional<PerturbationSeries> fd_series;
        if (fs::exists(cdir / "fd_series.csv"))
            fd_series = read_series_csv(cdir / "fd_series.csv");

        CellCheckInputs in;
        in.sigma = res.sigma;
        in.norm_uin = meta.at("norm_uin").get<double>();
        in.norm_u0 = meta.at("norm_u0").get<double>();
        in.norm_uinf = meta.at("norm_uinf").get<double>();
        in.sup_fprime = meta.at("sup_fprime").get<double>();
        bool lin = meta.at("routes").at("linearized").get<bool>();
        bool fd = meta.at("routes").at("fd").get<bool>();
        in.has_chain = lin || fd;
        in.chain_on_fd = !lin && fd;

        CellChecks cc =
            evaluate_cell_checks(series, fd_series ? &*fd_series : nullptr, in, cfg);
        res.checks = cc.checks;
        res.checks_pass = cc.pass;
        res.inf_d = cc.indicator.inf_d;
        res.argmin_t = cc.indicator.argmin_t;
        res.norm_uin = in.norm_uin;
        res.norm_u0 = in.norm_u0;
        res.norm_uinf = in.norm_uinf;
        res.sup_fprime = in.sup_fprime;
        res.completed = true;
        if (!res.checks_pass) sw.any_check_failure = true;
        sw.cells.push_back(std::move(res));
    }
    return sw;
}

void plot_bundle(const fs::path& bundle_dir) {
    ExperimentConfig cfg = load_config(bundle_dir / "config.json");
    fs::create_directories(bundle_dir / "plots");
    json summary = read_json_file(bundle_dir / "summary.json");

    std::vector<PlotSeries> indicator_curves;
    for (const auto& jc : summary.at("cells")) {
        if (!jc.at("completed").get<bool>()) continue;
        std::string dir = jc.at("dir").get<std::string>();
        double sigma = jc.at("sigma").get<double>();
        int m = jc.at("m").get<int>();
        PerturbationSeries s = read_series_csv(bundle_dir / dir / "series.csv");
        std::string stem = cell_dir_name(m, sigma);

        PlotSeries u1{"U1", {}, {}}, u2{"U2", {}, {}}, du1{"dU1", {}, {}}, du2{"dU2", {}, {}};
        PlotSeries jn{"J", {}, {}}, j1{"J1", {}, {}}, j2{"J2", {}, {}};
        PlotSeries dcurve{stem, {}, {}};
        for (const auto& r : s.rows) {
            u1.x.push_back(r.t_bracket);
            u1.y.push_back(r.U1);
            u2.x.push_back(r.t_bracket);
            u2.y.push_back(r.U2);
            du1.x.push_back(r.t_bracket);
            du1.y.push_back(r.dU1);
            du2.x.push_back(r.t_bracket);
            du2.y.push_back(r.dU2);
            jn.x.push_back(r.t);
            jn.y.push_back(r.J);
            j1.x.push_back(r.t);
            j1.y.push_back(r.J1);
            j2.x.push_back(r.t);
            j2.y.push_back(r.J2);
            if (sigma > 0.0) {
                dcurve.x.push_back(r.t);
                dcurve.y.push_back(std::max(
                    r.U1 / sigma, r.U2 * std::pow(r.t_bracket, 1.0 + cfg.epsilon) / sigma));
            }
        }
        PlotOptions lo;
        lo.title = stem + " perturbation norms";
        lo.xlabel = "<t>";
        lo.ylabel = "L2 norm";
        lo.logx = true;
        lo.logy = true;
        write_svg(bundle_dir / "plots" / (stem + "_norms_loglog.svg"), {u1, u2, du1, du2}, lo);

        PlotOptions ln;
        ln.title = stem + " Jacobi field norms";
        ln.xlabel = "t";
        ln.ylabel = "label-grid L2 norm";
        write_svg(bundle_dir / "plots" / (stem + "_norms_linear.svg"), {jn, j1, j2}, ln);

        if (sigma > 0.0) indicator_curves.push_back(std::move(dcurve));
    }

    PlotOptions io;
    io.title = "theorem indicator D(sigma, t)";
    io.xlabel = "t";
    io.ylabel = "D";
    io.logy = true;
    write_svg(bundle_dir / "plots" / "indicator.svg", indicator_curves, io);
}

}  // namespace shearflow

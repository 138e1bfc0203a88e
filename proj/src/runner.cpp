#include "spindd/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "spindd/errors.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace spindd {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17e", v);
    return buf;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);  // fixed \n line endings
    if (!out) throw SolverError("cannot open output file '" + path + "'");
    return out;
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw SolverError("cannot create output directory '" + dir + "': " + ec.message());
}

std::string effective_out_dir(const RunConfig& cfg, const CliOptions& opts) {
    return opts.out_override.empty() ? cfg.out_dir : opts.out_override;
}

}  // namespace

RunOutputs execute_run(const RunConfig& cfg, const kernels::ExecPolicy& exec, std::ostream* log) {
    if (!cfg.has_time) throw ConfigError("missing required section [time]", -1, "time");
    ModelSetup setup = build_setup(cfg);
    const Grid1D& grid = setup.grid;

    RunOutputs out;
    out.t_star = setup.t_star;
    out.eta = setup.params.eta;
    out.d_plus = setup.params.d_plus;
    out.d_minus = setup.params.d_minus;
    out.lambda2 = setup.params.lambda2;

    out.steady = solve_stationary(grid, setup.params.lambda2, setup.bc, setup.params.doping,
                                  cfg.stationary);

    SpinState initial = build_initial_state(cfg, grid, setup.params.mu);

    TransientOptions topts;
    topts.t_end = cfg.t_end;
    topts.dt = cfg.dt;
    topts.dt_min = cfg.dt_min;
    topts.record_every = cfg.record_every;

    DiagnosticsRecorder recorder(grid, setup.params, setup.bc, out.steady, initial);
    out.final_state = initial;
    StepObserver snapshot = [&](int, double, const SpinState& s, const CellField& v,
                                const StepReport&) {
        out.final_state = s;
        out.final_v = v;
    };
    out.series = run_transient(grid, initial, setup.params, setup.bc, out.steady, topts,
                               cfg.gummel, exec, &recorder, snapshot, log);
    if (cfg.t_end == 0.0) {
        // No steps taken: reconstruct the initial potential for the outputs.
        PoissonSolver poisson(grid, setup.params.lambda2);
        std::vector<double> rhs(static_cast<size_t>(grid.n_cells()));
        for (int i = 0; i < grid.n_cells(); ++i)
            rhs[static_cast<size_t>(i)] = initial.n_plus[i] + initial.n_minus[i] - setup.params.doping[i];
        out.final_v = poisson.solve(rhs, setup.bc.v_left, setup.bc.v_right);
    }

    out.big_m = recorder.data_upper_bound();
    out.m_observed = recorder.m_observed();
    out.upper_ok_all = recorder.upper_ok_all();
    out.sandwich_all_ok = recorder.sandwich_all_ok();
    out.nperp_max = recorder.nperp_linf_over_time();

    const double g_sup = setup.params.doping_sup();
    if (g_sup > 0.0) {
        out.tau_cond = check_tau_condition(setup.params, g_sup);
    } else {
        out.tau_cond.threshold = std::numeric_limits<double>::infinity();
        out.tau_cond.satisfied = true;
    }

    try {
        out.h_fit = fit_decay_rate(out.series, DecayQuantity::free_energy,
                                   default_fit_window(out.series));
        out.h_fit_ok = true;
    } catch (const FitError& e) {
        out.h_fit_ok = false;
        out.h_fit_message = e.what();
    }
    try {
        out.nperp_fit =
            fit_decay_rate(out.series, DecayQuantity::nperp_l2, default_fit_window(out.series));
        out.nperp_fit_ok = true;
    } catch (const FitError&) {
        out.nperp_fit_ok = false;
    }
    return out;
}

void write_energy_csv(const std::string& path, const EnergySeries& series) {
    std::ofstream out = open_out(path);
    out << "t,H,dissipation,relax_dissipation,min_np,min_nm,max_n0,nperp_l2,l2_np_err,l2_nm_err,"
           "h1_v_err\n";
    for (const auto& r : series.records) {
        out << fmt(r.t) << ',' << fmt(r.free_energy) << ',' << fmt(r.dissipation) << ','
            << fmt(r.relax_dissipation) << ',' << fmt(r.min_np) << ',' << fmt(r.min_nm) << ','
            << fmt(r.max_n0) << ',' << fmt(r.nperp_l2) << ',' << fmt(r.l2_np_err) << ','
            << fmt(r.l2_nm_err) << ',' << fmt(r.h1_v_err) << '\n';
    }
}

void write_state_csv(const std::string& path, const Grid1D& grid, const SpinState& state,
                     const CellField& v) {
    std::ofstream out = open_out(path);
    out << "x,n_plus,n_minus,nperp_1,nperp_2,nperp_3,n0,V\n";
    for (int i = 0; i < grid.n_cells(); ++i) {
        const Vec3& np = state.n_perp[static_cast<size_t>(i)];
        out << fmt(grid.cell_center(i)) << ',' << fmt(state.n_plus[i]) << ','
            << fmt(state.n_minus[i]) << ',' << fmt(np[0]) << ',' << fmt(np[1]) << ',' << fmt(np[2])
            << ',' << fmt(state.n_plus[i] + state.n_minus[i]) << ',' << fmt(v[i]) << '\n';
    }
}

void write_steady_csv(const std::string& path, const Grid1D& grid, const SteadyState& steady) {
    std::ofstream out = open_out(path);
    out << "x,n_inf,V_inf,phi_inf\n";
    for (int i = 0; i < grid.n_cells(); ++i) {
        out << fmt(grid.cell_center(i)) << ',' << fmt(steady.n_inf[i]) << ',' << fmt(steady.v_inf[i])
            << ',' << fmt(steady.phi_inf[i]) << '\n';
    }
}

void write_summary_json(const std::string& path, const RunConfig& cfg, const RunOutputs& out) {
    nlohmann::json j;
    j["schema_version"] = cfg.schema_version;
    j["grid"] = {{"n_cells", cfg.n_cells}, {"length", cfg.length}};
    j["model"] = {{"gamma", cfg.gamma}, {"p", cfg.p},           {"D", cfg.diff},
                  {"eta", out.eta},     {"d_plus", out.d_plus}, {"d_minus", out.d_minus},
                  {"lambda2", out.lambda2}};
    if (out.t_star > 0.0) j["model"]["t_star"] = out.t_star;

    j["free_energy"] = {{"H0", out.series.empty() ? 0.0 : out.series.records.front().free_energy},
                        {"H_final",
                         out.series.empty() ? 0.0 : out.series.records.back().free_energy}};
    if (out.h_fit_ok) {
        j["decay_fit"] = {{"kappa_est", out.h_fit.kappa_est},
                          {"r_squared", out.h_fit.r_squared},
                          {"window", {out.h_fit.window.t_lo, out.h_fit.window.t_hi}},
                          {"n_points", out.h_fit.n_points}};
    } else {
        j["decay_fit"] = {{"declined", true}, {"reason", out.h_fit_message}};
    }
    if (out.nperp_fit_ok) {
        j["nperp_fit"] = {{"rate", out.nperp_fit.kappa_est},
                          {"r_squared", out.nperp_fit.r_squared}};
    } else {
        j["nperp_fit"] = {{"declined", true}};
    }
    j["nperp_max"] = out.nperp_max;
    j["bounds"] = {{"M", out.big_m},
                   {"m_observed", out.m_observed},
                   {"upper_ok", out.upper_ok_all},
                   {"sandwich_ok", out.sandwich_all_ok}};
    j["tau_condition"] = {{"threshold", out.tau_cond.threshold},
                          {"satisfied", out.tau_cond.satisfied}};
    j["steady"] = {{"m_inf", out.steady.m_inf},
                   {"M_inf", out.steady.big_m_inf},
                   {"grad_phi_inf_max", out.steady.grad_phi_inf_max},
                   {"gummel_iterations", out.steady.iterations}};

    std::ofstream f = open_out(path);
    f << j.dump(2) << '\n';
}

int cmd_run(const std::string& config_path, const CliOptions& opts) {
    try {
        const RunConfig cfg = parse_config_file(config_path);
        const std::string dir = effective_out_dir(cfg, opts);
        ensure_dir(dir);

        kernels::ExecPolicy exec{opts.threads};
        RunOutputs out = execute_run(cfg, exec, opts.quiet ? nullptr : &std::cerr);

        const ModelSetup setup = build_setup(cfg);
        write_energy_csv(dir + "/energy.csv", out.series);
        write_state_csv(dir + "/final_state.csv", setup.grid, out.final_state, out.final_v);
        write_steady_csv(dir + "/steady_state.csv", setup.grid, out.steady);
        write_summary_json(dir + "/summary.json", cfg, out);

        if (!opts.quiet) {
            std::cout << "run complete: " << out.series.size() << " records -> " << dir << "\n";
            if (out.h_fit_ok)
                std::cout << "kappa_est = " << out.h_fit.kappa_est
                          << " (r^2 = " << out.h_fit.r_squared << ")\n";
            else
                std::cout << "decay fit declined\n";
        }
        return exit_code::ok;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code::config_error;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code::config_error;
    } catch (const std::exception& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return exit_code::solver_failure;
    }
}

int cmd_steady(const std::string& config_path, const CliOptions& opts) {
    try {
        const RunConfig cfg = parse_config_file(config_path);
        const std::string dir = effective_out_dir(cfg, opts);
        ensure_dir(dir);

        ModelSetup setup = build_setup(cfg);
        const SteadyState steady = solve_stationary(setup.grid, setup.params.lambda2, setup.bc,
                                                    setup.params.doping, cfg.stationary);
        write_steady_csv(dir + "/steady_state.csv", setup.grid, steady);

        if (!opts.quiet) {
            std::cout << "steady state: " << steady.iterations << " Gummel iterations, "
                      << "n_inf in [" << steady.m_inf << ", " << steady.big_m_inf << "], "
                      << "sup |grad phi_inf| = " << steady.grad_phi_inf_max << "\n";
        }
        return exit_code::ok;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code::config_error;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code::config_error;
    } catch (const std::exception& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return exit_code::solver_failure;
    }
}

int cmd_scale(const std::string& config_path, const CliOptions&, std::ostream& report) {
    try {
        const RunConfig cfg = parse_config_file(config_path);
        if (!cfg.has_physical)
            throw ConfigError("scale requires a [physical] section", -1, "physical");

        Grid1D grid(cfg.n_cells, cfg.length);
        CellField doping = sample(grid, cfg.doping);
        const ScalingResult r = scale(cfg.phys, cfg.p, cfg.gamma, cfg.diff, doping, cfg.mu);

        double g_sup = 0.0;
        for (double g : doping.values) g_sup = std::max(g_sup, g);
        TauCondition cond;
        if (g_sup > 0.0) {
            cond = check_tau_condition(r.params, g_sup);
        } else {
            cond.threshold = std::numeric_limits<double>::infinity();
            cond.satisfied = true;
        }

        report << "lambda2 = " << fmt(r.lambda2) << "\n"
               << "t_star = " << fmt(r.t_star) << "\n"
               << "tau = " << fmt(r.tau) << "\n"
               << "eta = " << fmt(r.params.eta) << "\n"
               << "d_plus = " << fmt(r.params.d_plus) << "\n"
               << "d_minus = " << fmt(r.params.d_minus) << "\n"
               << "tau_threshold = " << fmt(cond.threshold) << "\n"
               << "tau_condition = " << (cond.satisfied ? "satisfied" : "violated") << "\n";
        return exit_code::ok;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code::config_error;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code::config_error;
    } catch (const std::exception& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return exit_code::solver_failure;
    }
}

namespace {

RunConfig patch_config(const RunConfig& base, const std::string& param, double value) {
    RunConfig cfg = base;
    if (param == "delta") {
        if (!cfg.has_phid)
            throw ConfigError("delta sweep requires a phi_D boundary specification", -1, "delta");
        cfg.delta = value;
    } else if (param == "tau") {
        if (cfg.has_physical)
            throw ConfigError("tau sweep conflicts with a [physical] section (tau is derived)", -1,
                              "tau");
        cfg.tau = value;
    } else if (param == "p") {
        cfg.p = value;
    } else {
        throw ConfigError("unknown sweep parameter '" + param + "' (use delta, tau or p)", -1,
                          param);
    }
    return cfg;
}

}  // namespace

std::vector<SweepRow> run_sweep(const RunConfig& base, const std::string& param,
                                const std::vector<double>& values, int threads) {
    if (values.empty()) throw ConfigError("sweep: empty value list", -1, param);

    std::vector<SweepRow> rows(values.size());
    const int n = static_cast<int>(values.size());
#ifdef _OPENMP
#pragma omp parallel for num_threads(std::max(1, threads)) schedule(dynamic) if (threads > 1)
#endif
    for (int i = 0; i < n; ++i) {
        SweepRow row;
        row.value = values[static_cast<size_t>(i)];
        try {
            const RunConfig cfg = patch_config(base, param, row.value);
            const RunOutputs out = execute_run(cfg, kernels::ExecPolicy{1}, nullptr);
            row.ok = true;
            row.status = "ok";
            row.kappa_est = out.h_fit_ok ? out.h_fit.kappa_est : std::nan("");
            row.r_squared = out.h_fit_ok ? out.h_fit.r_squared : std::nan("");
            row.h0 = out.series.empty() ? std::nan("") : out.series.records.front().free_energy;
            row.min_density = out.m_observed;
            row.condition_satisfied = out.tau_cond.satisfied;
        } catch (const std::exception& e) {
            row.ok = false;
            row.status = std::string("failed: ") + e.what();
            row.kappa_est = row.r_squared = row.h0 = row.min_density = std::nan("");
        }
        rows[static_cast<size_t>(i)] = std::move(row);
    }
    return rows;
}

int cmd_sweep(const std::string& config_path, const std::string& param,
              const std::vector<double>& values, const CliOptions& opts) {
    try {
        const RunConfig cfg = parse_config_file(config_path);
        const std::string dir = effective_out_dir(cfg, opts);
        ensure_dir(dir);

        const std::vector<SweepRow> rows = run_sweep(cfg, param, values, opts.threads);

        std::ofstream out = open_out(dir + "/sweep.csv");
        out << "value,kappa_est,r_squared,H0,min_density,condition_satisfied,status\n";
        for (const auto& r : rows) {
            out << fmt(r.value) << ',' << fmt(r.kappa_est) << ',' << fmt(r.r_squared) << ','
                << fmt(r.h0) << ',' << fmt(r.min_density) << ','
                << (r.condition_satisfied ? "true" : "false") << ',' << '"' << r.status << '"'
                << '\n';
        }
        if (!opts.quiet) std::cout << "sweep: " << rows.size() << " rows -> " << dir << "/sweep.csv\n";
        return exit_code::ok;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code::config_error;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code::config_error;
    } catch (const std::exception& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return exit_code::solver_failure;
    }
}

}  // namespace spindd

#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "spindd/config.hpp"
#include "spindd/diagnostics.hpp"
#include "spindd/params.hpp"
#include "spindd/stationary.hpp"
#include "spindd/transport.hpp"

namespace spindd {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int config_error = 2;
inline constexpr int solver_failure = 3;
}  // namespace exit_code

struct CliOptions {
    std::string out_override;  // overrides [output].directory when nonempty
    int threads = 1;
    bool quiet = false;
};

/// Everything a transient run produces, before serialization.
struct RunOutputs {
    SteadyState steady;
    EnergySeries series;
    SpinState final_state;
    CellField final_v;

    bool h_fit_ok = false;
    DecayFit h_fit;
    std::string h_fit_message;

    bool nperp_fit_ok = false;
    DecayFit nperp_fit;

    TauCondition tau_cond;
    double big_m = 0.0;
    double m_observed = 0.0;
    bool upper_ok_all = false;
    bool sandwich_all_ok = false;
    double nperp_max = 0.0;
    double t_star = 0.0;
    double eta = 0.0, d_plus = 0.0, d_minus = 0.0, lambda2 = 0.0;
};

/// Stationary solve followed by the transient run with diagnostics and
/// the decay-rate fits. Throws ConfigError / SolverError.
RunOutputs execute_run(const RunConfig& cfg, const kernels::ExecPolicy& exec,
                       std::ostream* log = nullptr);

void write_energy_csv(const std::string& path, const EnergySeries& series);
void write_state_csv(const std::string& path, const Grid1D& grid, const SpinState& state,
                     const CellField& v);
void write_steady_csv(const std::string& path, const Grid1D& grid, const SteadyState& steady);
void write_summary_json(const std::string& path, const RunConfig& cfg, const RunOutputs& out);

/// CLI entry points; map exceptions to exit codes (0 ok, 2 config
/// error, 3 solver failure) and write artifacts to the output directory.
int cmd_run(const std::string& config_path, const CliOptions& opts);
int cmd_steady(const std::string& config_path, const CliOptions& opts);
int cmd_scale(const std::string& config_path, const CliOptions& opts, std::ostream& report);

struct SweepRow {
    double value = 0.0;
    bool ok = false;
    double kappa_est = 0.0;
    double r_squared = 0.0;
    double h0 = 0.0;
    double min_density = 0.0;
    bool condition_satisfied = false;
    std::string status;  // "ok" or the failure message
};

int cmd_sweep(const std::string& config_path, const std::string& param,
              const std::vector<double>& values, const CliOptions& opts);

/// Worker behind cmd_sweep, exposed for testing: runs one simulation per
/// value (parallel across OpenMP workers), one row per run; individual
/// failures are recorded in the row and the sweep continues.
std::vector<SweepRow> run_sweep(const RunConfig& base, const std::string& param,
                                const std::vector<double>& values, int threads);

}  // namespace spindd

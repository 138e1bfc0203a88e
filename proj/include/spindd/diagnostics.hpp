#pragma once

#include <stdexcept>
#include <vector>

#include "spindd/grid.hpp"
#include "spindd/model.hpp"
#include "spindd/stationary.hpp"

namespace spindd {

/// Decay-rate fitting failure (nonpositive values in the window, decay
/// stalled or at the floating-point floor).
class FitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct EnergyRecord {
    double t = 0.0;
    double free_energy = 0.0;           // H
    double dissipation = 0.0;           // Dirichlet-form value
    double relax_dissipation = 0.0;     // (1/(8 tau)) int (sqrt(n+) - sqrt(n-))^2
    double min_np = 0.0, max_np = 0.0;
    double min_nm = 0.0, max_nm = 0.0;
    double max_n0 = 0.0;
    double nperp_l2 = 0.0;              // || |n_perp| ||_L2
    double l2_np_err = 0.0;             // ||n+ - n_inf/2||_L2
    double l2_nm_err = 0.0;
    double h1_v_err = 0.0;              // ||V - V_inf||_H1
    bool sandwich_lower_ok = true;
    bool sandwich_upper_ok = true;
};

struct EnergySeries {
    std::vector<EnergyRecord> records;

    bool empty() const { return records.empty(); }
    size_t size() const { return records.size(); }
    const EnergyRecord& operator[](size_t i) const { return records[i]; }
};

/// Relative free energy
///   H = int h(n+|n_inf) + h(n-|n_inf) + (lambda^2/2) |grad(V - V_inf)|^2,
/// h(y|z) = y log(2y/z) - y + z/2 >= 0, evaluated in the stable form
/// (z/2) [(1+e) log1p(e) - e] with e = (2y - z)/z. Throws on nonpositive
/// densities, naming the cell.
double relative_free_energy(const Grid1D& grid, const SpinState& state, const CellField& v,
                            const SteadyState& steady, double lambda2);

/// Energy dissipation int n+ |grad(phi+ - phi_inf)|^2 + n- |...|^2 with
/// phi_pm = log n_pm + V, face densities by harmonic means, and the
/// log 2 offset absorbed so the boundary traces agree with phi_inf.
double dissipation(const Grid1D& grid, const SpinState& state, const CellField& v,
                   const SteadyState& steady, const BoundaryData& bc);

/// (1/(8 tau)) int (sqrt(n+) - sqrt(n-))^2; logged alongside H.
double relax_dissipation(const Grid1D& grid, const SpinState& state, double tau);

struct BoundsReport {
    double big_m = 0.0;       // max{sup nD, sup n0^0, sup g}
    double m_observed = 0.0;  // min over cells of min(n+, n-)
    bool upper_ok = false;    // n0 <= M + 1e-8 cellwise
};

BoundsReport bounds_monitor(const SpinState& state, const BoundaryData& bc, const CellField& doping,
                            const SpinState& initial);

enum class DecayQuantity { free_energy, nperp_l2, l2_np_err, l2_nm_err, h1_v_err };

struct FitWindow {
    double t_lo = 0.0;
    double t_hi = 0.0;
};

struct DecayFit {
    double kappa_est = 0.0;
    double r_squared = 0.0;
    FitWindow window;
    int n_points = 0;
};

/// Least-squares line through (t, log q) on the window. kappa_est is
/// -slope/2 for the free energy (H ~ e^{-2 kappa t}) and -slope otherwise,
/// clamped at 0. Throws FitError if fewer than 10 records fall in the
/// window or any value is at or below the 1e-300 floor.
DecayFit fit_decay_rate(const EnergySeries& series, DecayQuantity quantity,
                        const FitWindow& window);

/// Default fit window: the last 60% of the recorded horizon.
FitWindow default_fit_window(const EnergySeries& series);

struct SandwichCheck {
    bool lower_ok = false;
    bool upper_ok = false;
    double free_energy = 0.0;
    double entropy_part = 0.0;   // int h(n+|n_inf) + h(n-|n_inf)
    double density_dist_sq = 0.0;  // sum ||n_pm - n_inf/2||_L2^2
    double lower_bound = 0.0;    // density_dist_sq / (2 max{M, M_inf/2})
    double upper_bound = 0.0;    // density_dist_sq / (2 min{m, m_inf/2})
};

/// Two-sided control of H by the L2 distance of the densities with the
/// explicit Taylor constants: H >= dist^2/(2 max{M, M_inf/2}) and
/// entropy part <= dist^2/(2 min{m, m_inf/2}). m_lower/big_m are the
/// (observed) uniform bounds of n_pm.
SandwichCheck lemma35_sandwich_check(const Grid1D& grid, const SpinState& state, const CellField& v,
                                     const SteadyState& steady, double lambda2, double m_lower,
                                     double big_m);

/// Per-step observer computing and accumulating the full record set,
/// tracking the data bound M, the running density minimum, and the
/// sandwich flags. One instance per run.
class DiagnosticsRecorder {
public:
    DiagnosticsRecorder(const Grid1D& grid, const ScaledParams& params, const BoundaryData& bc,
                        const SteadyState& steady, const SpinState& initial);

    /// Compute a record at time t; store_record selects whether it is
    /// appended to the series (extrema and flags update either way).
    const EnergyRecord& observe(double t, const SpinState& state, const CellField& v,
                                bool store_record = true);

    const EnergySeries& series() const { return series_; }
    double data_upper_bound() const { return big_m_; }
    double m_observed() const { return m_observed_; }
    bool upper_ok_all() const { return upper_ok_all_; }
    bool sandwich_all_ok() const { return sandwich_all_ok_; }
    double nperp_linf_over_time() const { return nperp_max_; }

private:
    const Grid1D grid_;
    ScaledParams params_;
    BoundaryData bc_;
    const SteadyState& steady_;
    EnergySeries series_;
    EnergyRecord last_{};
    double big_m_ = 0.0;
    double m_observed_ = 0.0;
    bool upper_ok_all_ = true;
    bool sandwich_all_ok_ = true;
    double nperp_max_ = 0.0;
    double last_t_ = 0.0;
    bool have_record_ = false;
};

}  // namespace spindd

#include "spindd/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "spindd/errors.hpp"
#include "spindd/numerics.hpp"

namespace spindd {

namespace {

constexpr double kLogFloor = 1e-300;

/// h(y|z) = y log(2y/z) - y + z/2 via (z/2) [(1+e) log1p(e) - e],
/// e = (2y - z)/z; stable near y = z/2. Tiny negative rounding residue
/// is clamped (the function is nonnegative).
double relative_entropy_cell(double y, double z) {
    const double e = (2.0 * y - z) / z;
    double val;
    if (std::abs(e) < 0.5) {
        val = (1.0 + e) * std::log1p(e) - e;
    } else {
        val = (2.0 * y / z) * std::log(2.0 * y / z) - (2.0 * y / z) + 1.0;
    }
    return std::max(0.0, 0.5 * z * val);
}

void require_positive(const CellField& f, const char* name) {
    for (int i = 0; i < f.size(); ++i)
        if (!(f[i] > 0.0))
            throw ValidationError(std::string(name) + " must be positive, cell " +
                                  std::to_string(i) + " holds " + std::to_string(f[i]));
}

double harmonic_mean(double a, double b) { return 2.0 * a * b / (a + b); }

double quantity_of(const EnergyRecord& r, DecayQuantity q) {
    switch (q) {
        case DecayQuantity::free_energy: return r.free_energy;
        case DecayQuantity::nperp_l2: return r.nperp_l2;
        case DecayQuantity::l2_np_err: return r.l2_np_err;
        case DecayQuantity::l2_nm_err: return r.l2_nm_err;
        case DecayQuantity::h1_v_err: return r.h1_v_err;
    }
    return 0.0;
}

}  // namespace

double relative_free_energy(const Grid1D& grid, const SpinState& state, const CellField& v,
                            const SteadyState& steady, double lambda2) {
    require_positive(state.n_plus, "relative_free_energy: n_plus");
    require_positive(state.n_minus, "relative_free_energy: n_minus");
    require_positive(steady.n_inf, "relative_free_energy: n_inf");

    const int n = grid.n_cells();
    double entropy = 0.0;
    for (int i = 0; i < n; ++i) {
        entropy += relative_entropy_cell(state.n_plus[i], steady.n_inf[i]);
        entropy += relative_entropy_cell(state.n_minus[i], steady.n_inf[i]);
    }
    entropy *= grid.h();

    CellField dv(n, 0.0, v.bc_left - steady.v_inf.bc_left, v.bc_right - steady.v_inf.bc_right);
    for (int i = 0; i < n; ++i) dv[i] = v[i] - steady.v_inf[i];
    const double semi = h1_seminorm(grid, dv);

    return entropy + 0.5 * lambda2 * semi * semi;
}

double dissipation(const Grid1D& grid, const SpinState& state, const CellField& v,
                   const SteadyState& steady, const BoundaryData& bc) {
    require_positive(state.n_plus, "dissipation: n_plus");
    require_positive(state.n_minus, "dissipation: n_minus");

    const int n = grid.n_cells();
    // psi_pm = log(2 n_pm) + V carries the boundary traces
    // log n_D + V_D, matching phi_inf there.
    CellField psi_p(n, 0.0, bc.phi_left(), bc.phi_right());
    CellField psi_m = psi_p;
    for (int i = 0; i < n; ++i) {
        psi_p[i] = std::log(2.0 * state.n_plus[i]) + v[i];
        psi_m[i] = std::log(2.0 * state.n_minus[i]) + v[i];
    }

    CellField np = state.n_plus;
    np.bc_left = 0.5 * bc.n_left;
    np.bc_right = 0.5 * bc.n_right;
    CellField nm = state.n_minus;
    nm.bc_left = np.bc_left;
    nm.bc_right = np.bc_right;

    double total = 0.0;
    for (int f = 0; f < grid.n_faces(); ++f) {
        const double d = grid.face_dist(f);
        const double w = grid.face_weight(f);
        const double dpsi_inf = steady.phi_inf.right_of_face(f) - steady.phi_inf.left_of_face(f);

        const double gp = ((psi_p.right_of_face(f) - psi_p.left_of_face(f)) - dpsi_inf) / d;
        const double gm = ((psi_m.right_of_face(f) - psi_m.left_of_face(f)) - dpsi_inf) / d;
        const double wp = harmonic_mean(np.left_of_face(f), np.right_of_face(f));
        const double wm = harmonic_mean(nm.left_of_face(f), nm.right_of_face(f));
        total += w * (wp * gp * gp + wm * gm * gm);
    }
    return total;
}

double relax_dissipation(const Grid1D& grid, const SpinState& state, double tau) {
    double s = 0.0;
    for (int i = 0; i < grid.n_cells(); ++i) {
        const double d = std::sqrt(state.n_plus[i]) - std::sqrt(state.n_minus[i]);
        s += d * d;
    }
    return grid.h() * s / (8.0 * tau);
}

BoundsReport bounds_monitor(const SpinState& state, const BoundaryData& bc, const CellField& doping,
                            const SpinState& initial) {
    BoundsReport r;
    double sup_g = 0.0;
    for (double g : doping.values) sup_g = std::max(sup_g, g);
    double sup_n0 = 0.0;
    for (int i = 0; i < initial.size(); ++i)
        sup_n0 = std::max(sup_n0, initial.n_plus[i] + initial.n_minus[i]);
    r.big_m = std::max({bc.n_left, bc.n_right, sup_n0, sup_g});

    double max_n0 = 0.0;
    double m_obs = std::numeric_limits<double>::infinity();
    for (int i = 0; i < state.size(); ++i) {
        max_n0 = std::max(max_n0, state.n_plus[i] + state.n_minus[i]);
        m_obs = std::min({m_obs, state.n_plus[i], state.n_minus[i]});
    }
    r.m_observed = m_obs;
    r.upper_ok = max_n0 <= r.big_m + 1e-8;
    return r;
}

FitWindow default_fit_window(const EnergySeries& series) {
    if (series.empty()) return {};
    const double t0 = series.records.front().t;
    const double t1 = series.records.back().t;
    return {t0 + 0.4 * (t1 - t0), t1};
}

DecayFit fit_decay_rate(const EnergySeries& series, DecayQuantity quantity,
                        const FitWindow& window) {
    std::vector<double> ts, logs;
    for (const auto& rec : series.records) {
        if (rec.t < window.t_lo || rec.t > window.t_hi) continue;
        const double q = quantity_of(rec, quantity);
        if (!(q > kLogFloor))
            throw FitError("fit_decay_rate: nonpositive/floored value " + std::to_string(q) +
                           " at t = " + std::to_string(rec.t) +
                           " (decay stalled or hit floor; shrink the window)");
        ts.push_back(rec.t);
        logs.push_back(std::log(q));
    }
    if (ts.size() < 10)
        throw FitError("fit_decay_rate: only " + std::to_string(ts.size()) +
                       " records in window, need >= 10");

    const LineFit line = fit_line(ts, logs);
    DecayFit fit;
    const double factor = (quantity == DecayQuantity::free_energy) ? 0.5 : 1.0;
    fit.kappa_est = std::max(0.0, -line.slope * factor);
    fit.r_squared = line.r_squared;
    fit.window = window;
    fit.n_points = static_cast<int>(ts.size());
    return fit;
}

SandwichCheck lemma35_sandwich_check(const Grid1D& grid, const SpinState& state, const CellField& v,
                                     const SteadyState& steady, double lambda2, double m_lower,
                                     double big_m) {
    if (!(m_lower > 0.0 && big_m > 0.0))
        throw ConfigError("lemma35_sandwich_check: bound estimates m, M must be positive");
    if (!(steady.m_inf > 0.0 && steady.big_m_inf > 0.0))
        throw ConfigError("lemma35_sandwich_check: steady-state bounds unavailable");

    SandwichCheck c;
    c.free_energy = relative_free_energy(grid, state, v, steady, lambda2);

    double entropy = 0.0, dist_sq = 0.0;
    for (int i = 0; i < grid.n_cells(); ++i) {
        entropy += relative_entropy_cell(state.n_plus[i], steady.n_inf[i]);
        entropy += relative_entropy_cell(state.n_minus[i], steady.n_inf[i]);
        const double ep = state.n_plus[i] - 0.5 * steady.n_inf[i];
        const double em = state.n_minus[i] - 0.5 * steady.n_inf[i];
        dist_sq += ep * ep + em * em;
    }
    c.entropy_part = grid.h() * entropy;
    c.density_dist_sq = grid.h() * dist_sq;

    const double denom_lo = 2.0 * std::max(big_m, 0.5 * steady.big_m_inf);
    const double denom_hi = 2.0 * std::min(m_lower, 0.5 * steady.m_inf);
    c.lower_bound = c.density_dist_sq / denom_lo;
    c.upper_bound = c.density_dist_sq / denom_hi;

    // Small absolute slack for roundoff at (or numerically at) equilibrium.
    const double eps = 1e-14 * (1.0 + c.free_energy + c.upper_bound);
    c.lower_ok = c.free_energy >= c.lower_bound - eps;
    c.upper_ok = c.entropy_part <= c.upper_bound + eps;
    return c;
}

DiagnosticsRecorder::DiagnosticsRecorder(const Grid1D& grid, const ScaledParams& params,
                                         const BoundaryData& bc, const SteadyState& steady,
                                         const SpinState& initial)
    : grid_(grid), params_(params), bc_(bc), steady_(steady) {
    const BoundsReport b = bounds_monitor(initial, bc, params.doping, initial);
    big_m_ = b.big_m;
    m_observed_ = b.m_observed;
}

const EnergyRecord& DiagnosticsRecorder::observe(double t, const SpinState& state,
                                                 const CellField& v, bool store_record) {
    if (have_record_ && !(t > last_t_))
        throw ValidationError("DiagnosticsRecorder: time must be strictly increasing");

    EnergyRecord r;
    r.t = t;
    r.free_energy = relative_free_energy(grid_, state, v, steady_, params_.lambda2);
    r.dissipation = dissipation(grid_, state, v, steady_, bc_);
    r.relax_dissipation = relax_dissipation(grid_, state, params_.tau);

    r.min_np = r.max_np = state.n_plus[0];
    r.min_nm = r.max_nm = state.n_minus[0];
    r.max_n0 = 0.0;
    for (int i = 0; i < state.size(); ++i) {
        r.min_np = std::min(r.min_np, state.n_plus[i]);
        r.max_np = std::max(r.max_np, state.n_plus[i]);
        r.min_nm = std::min(r.min_nm, state.n_minus[i]);
        r.max_nm = std::max(r.max_nm, state.n_minus[i]);
        r.max_n0 = std::max(r.max_n0, state.n_plus[i] + state.n_minus[i]);
    }

    double perp_sq = 0.0;
    for (int i = 0; i < state.size(); ++i)
        perp_sq += dot(state.n_perp[static_cast<size_t>(i)], state.n_perp[static_cast<size_t>(i)]);
    r.nperp_l2 = std::sqrt(grid_.h() * perp_sq);

    CellField diff(grid_.n_cells());
    for (int i = 0; i < grid_.n_cells(); ++i) diff[i] = state.n_plus[i] - 0.5 * steady_.n_inf[i];
    r.l2_np_err = l2_norm(grid_, diff);
    for (int i = 0; i < grid_.n_cells(); ++i) diff[i] = state.n_minus[i] - 0.5 * steady_.n_inf[i];
    r.l2_nm_err = l2_norm(grid_, diff);

    CellField dv(grid_.n_cells(), 0.0, v.bc_left - steady_.v_inf.bc_left,
                 v.bc_right - steady_.v_inf.bc_right);
    for (int i = 0; i < grid_.n_cells(); ++i) dv[i] = v[i] - steady_.v_inf[i];
    r.h1_v_err = h1_norm(grid_, dv);

    m_observed_ = std::min(m_observed_, std::min(r.min_np, r.min_nm));
    upper_ok_all_ = upper_ok_all_ && (r.max_n0 <= big_m_ + 1e-8);
    nperp_max_ = std::max(nperp_max_, r.nperp_l2);

    const SandwichCheck sc =
        lemma35_sandwich_check(grid_, state, v, steady_, params_.lambda2, m_observed_, big_m_);
    r.sandwich_lower_ok = sc.lower_ok;
    r.sandwich_upper_ok = sc.upper_ok;
    sandwich_all_ok_ = sandwich_all_ok_ && sc.lower_ok && sc.upper_ok;

    last_ = r;
    last_t_ = t;
    have_record_ = true;
    if (store_record) series_.records.push_back(r);
    return last_;
}

}  // namespace spindd

#include "spindd/transport.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "spindd/params.hpp"

namespace spindd {

double bernoulli(double x) {
    const double ax = std::abs(x);
    if (ax < 1e-4) {
        // x/(e^x - 1) = 1 - x/2 + x^2/12 - x^4/720 + ...
        return 1.0 - 0.5 * x + x * x / 12.0 * (1.0 - x * x / 60.0);
    }
    if (x > 0.0) {
        // Avoid overflow of e^x for large x: B(x) = x e^{-x}/(1 - e^{-x}).
        return x * std::exp(-x) / (-std::expm1(-x));
    }
    return x / std::expm1(x);
}

double sg_flux(double n_left, double n_right, double dv, double d_coef, double dist) {
    return (d_coef / dist) * (bernoulli(-dv) * n_right - bernoulli(dv) * n_left);
}

namespace {

double rel_update(const std::vector<double>& next, const std::vector<double>& prev) {
    double num = 0.0, den = 0.0;
    for (size_t i = 0; i < next.size(); ++i) {
        num = std::max(num, std::abs(next[i] - prev[i]));
        den = std::max(den, std::abs(next[i]));
    }
    return num / (1.0 + den);
}

/// Matrix of x -> x cross m (applied from the left to a column vector).
std::array<std::array<double, 3>, 3> cross_matrix(const Vec3& m) {
    return {{{0.0, m[2], -m[1]}, {-m[2], 0.0, m[0]}, {m[1], -m[0], 0.0}}};
}

void check_nonnegative(const std::vector<std::array<double, 2>>& sol) {
    double scale = 0.0;
    for (const auto& c : sol) scale = std::max({scale, std::abs(c[0]), std::abs(c[1])});
    const double floor = -1e-14 * (1.0 + scale);
    for (size_t i = 0; i < sol.size(); ++i)
        if (sol[i][0] < floor || sol[i][1] < floor)
            throw SolverError("step_npm: negative density in cell " + std::to_string(i) +
                              " (n+ = " + std::to_string(sol[i][0]) +
                              ", n- = " + std::to_string(sol[i][1]) + ")");
}

}  // namespace

TransientStepper::TransientStepper(const Grid1D& grid, const ScaledParams& params,
                                   const BoundaryData& bc, GummelOptions gummel, BcMode mode,
                                   kernels::ExecPolicy exec)
    : grid_(grid),
      params_(params),
      bc_(bc),
      gummel_(gummel),
      mode_(mode),
      exec_(exec),
      poisson_(grid, params.lambda2),
      sys2_(grid.n_cells()),
      sys3_(grid.n_cells()),
      v_lagged_(grid.n_cells()),
      rhs_work_(static_cast<size_t>(grid.n_cells())) {
    if (params_.doping.size() != grid.n_cells())
        throw ValidationError("TransientStepper: doping field does not match the grid");
}

void TransientStepper::assemble_npm(const SpinState& old_state, const CellField& v, double dt) {
    const int n = grid_.n_cells();
    const double h = grid_.h();
    const double relax = 0.5 / params_.tau;
    const double np_trace_l = 0.5 * bc_.n_left, np_trace_r = 0.5 * bc_.n_right;

    sys2_.clear();
    const int nf = grid_.n_faces();
    // Face factors B(dV), B(-dV) over the face distance; data-parallel.
    static thread_local std::vector<double> bw_fwd, bw_bwd;
    bw_fwd.assign(static_cast<size_t>(nf), 0.0);
    bw_bwd.assign(static_cast<size_t>(nf), 0.0);
    const auto fill_face = [&](int f) {
        const double dv = v.right_of_face(f) - v.left_of_face(f);
        const double inv = 1.0 / (h * grid_.face_dist(f));
        bw_fwd[static_cast<size_t>(f)] = bernoulli(dv) * inv;
        bw_bwd[static_cast<size_t>(f)] = bernoulli(-dv) * inv;
    };
#ifdef _OPENMP
#pragma omp parallel for num_threads(exec_.threads) schedule(static) if (exec_.threads > 1)
#endif
    for (int f = 0; f < nf; ++f) fill_face(f);

    const double dcoef[2] = {params_.d_plus, params_.d_minus};
    for (int i = 0; i < n; ++i) {
        auto& diag = sys2_.diag(i);
        auto& rhs = sys2_.rhs(i);
        const double old_vals[2] = {old_state.n_plus[i], old_state.n_minus[i]};
        for (int s = 0; s < 2; ++s) {
            double a_diag = 1.0 / dt + relax;
            double b = old_vals[s] / dt;

            const int fl = i, fr = i + 1;
            const bool skip_left = mode_ == BcMode::reflect && grid_.is_boundary_face(fl);
            const bool skip_right = mode_ == BcMode::reflect && grid_.is_boundary_face(fr);

            if (!skip_left) {
                a_diag += dcoef[s] * bw_bwd[static_cast<size_t>(fl)];
                if (i > 0)
                    sys2_.lower(i)[static_cast<size_t>(s * 2 + s)] =
                        -dcoef[s] * bw_fwd[static_cast<size_t>(fl)];
                else
                    b += dcoef[s] * bw_fwd[static_cast<size_t>(fl)] * np_trace_l;
            }
            if (!skip_right) {
                a_diag += dcoef[s] * bw_fwd[static_cast<size_t>(fr)];
                if (i < n - 1)
                    sys2_.upper(i)[static_cast<size_t>(s * 2 + s)] =
                        -dcoef[s] * bw_bwd[static_cast<size_t>(fr)];
                else
                    b += dcoef[s] * bw_bwd[static_cast<size_t>(fr)] * np_trace_r;
            }
            diag[static_cast<size_t>(s * 2 + s)] = a_diag;
            rhs[static_cast<size_t>(s)] = b;
        }
        diag[1] = -relax;  // n+ row, n- column
        diag[2] = -relax;  // n- row, n+ column
    }
}

StepReport TransientStepper::step_npm(SpinState& state, CellField& v, double dt) {
    if (!(dt > 0.0)) throw ValidationError("step_npm: dt must be > 0");
    const int n = grid_.n_cells();

    CellField v_iter = v;
    v_iter.bc_left = bc_.v_left;
    v_iter.bc_right = bc_.v_right;

    std::vector<std::array<double, 2>> sol(static_cast<size_t>(n));
    StepReport report;
    report.dt_used = dt;

    bool converged = false;
    for (int it = 1; it <= gummel_.max_iter; ++it) {
        assemble_npm(state, v_iter, dt);
        sys2_.solve();
        for (int i = 0; i < n; ++i) sol[static_cast<size_t>(i)] = sys2_.rhs(i);
        check_nonnegative(sol);

        for (int i = 0; i < n; ++i)
            rhs_work_[static_cast<size_t>(i)] =
                sol[static_cast<size_t>(i)][0] + sol[static_cast<size_t>(i)][1] - params_.doping[i];
        CellField v_next = poisson_.solve(rhs_work_, bc_.v_left, bc_.v_right);

        const double rel = rel_update(v_next.values, v_iter.values);
        report.gummel_iterations = it;
        report.residual = rel;
        v_lagged_ = v_iter;
        v_iter = std::move(v_next);
        if (rel <= gummel_.tol) {
            converged = true;
            break;
        }
    }
    if (!converged)
        throw SolverError("step_npm: Gummel cycle did not converge within " +
                          std::to_string(gummel_.max_iter) + " iterations (last update " +
                          std::to_string(report.residual) + ")");

    for (int i = 0; i < n; ++i) {
        state.n_plus[i] = std::max(0.0, sol[static_cast<size_t>(i)][0]);
        state.n_minus[i] = std::max(0.0, sol[static_cast<size_t>(i)][1]);
    }
    state.n_plus.bc_left = 0.5 * bc_.n_left;
    state.n_plus.bc_right = 0.5 * bc_.n_right;
    state.n_minus.bc_left = 0.5 * bc_.n_left;
    state.n_minus.bc_right = 0.5 * bc_.n_right;
    v = v_iter;
    return report;
}

void TransientStepper::step_nperp(std::vector<Vec3>& n_perp, const CellField& v, double dt) {
    if (!(dt > 0.0)) throw ValidationError("step_nperp: dt must be > 0");
    const int n = grid_.n_cells();
    if (static_cast<int>(n_perp.size()) != n)
        throw ValidationError("step_nperp: field/grid size mismatch");

    CellField vb = v;
    vb.bc_left = bc_.v_left;
    vb.bc_right = bc_.v_right;

    const double dcoef = params_.diff / params_.eta;
    const double h = grid_.h();
    const auto cm = cross_matrix(params_.mu);

    sys3_.clear();
    for (int i = 0; i < n; ++i) {
        auto& diag = sys3_.diag(i);
        auto& rhs = sys3_.rhs(i);

        double a_diag = 1.0 / dt + 1.0 / params_.tau;
        const int fl = i, fr = i + 1;
        const bool skip_left = mode_ == BcMode::reflect && grid_.is_boundary_face(fl);
        const bool skip_right = mode_ == BcMode::reflect && grid_.is_boundary_face(fr);

        if (!skip_left) {
            const double dv = vb.right_of_face(fl) - vb.left_of_face(fl);
            const double c = dcoef / (h * grid_.face_dist(fl));
            a_diag += c * bernoulli(-dv);
            if (i > 0) {
                const double off = -c * bernoulli(dv);
                for (int k = 0; k < 3; ++k) sys3_.lower(i)[static_cast<size_t>(k * 3 + k)] = off;
            }
            // zero Dirichlet trace: no rhs contribution
        }
        if (!skip_right) {
            const double dv = vb.right_of_face(fr) - vb.left_of_face(fr);
            const double c = dcoef / (h * grid_.face_dist(fr));
            a_diag += c * bernoulli(dv);
            if (i < n - 1) {
                const double off = -c * bernoulli(-dv);
                for (int k = 0; k < 3; ++k) sys3_.upper(i)[static_cast<size_t>(k * 3 + k)] = off;
            }
        }

        for (int r = 0; r < 3; ++r) {
            for (int c = 0; c < 3; ++c) {
                double val = -2.0 * params_.gamma * cm[static_cast<size_t>(r)][static_cast<size_t>(c)];
                if (r == c) val += a_diag;
                diag[static_cast<size_t>(r * 3 + c)] = val;
            }
            rhs[static_cast<size_t>(r)] = n_perp[static_cast<size_t>(i)][static_cast<size_t>(r)] / dt;
        }
    }
    sys3_.solve();

    // Re-projection onto the plane perpendicular to mu suppresses
    // alignment drift; exact property of the continuous system.
    for (int i = 0; i < n; ++i) {
        Vec3 x = sys3_.rhs(i);
        const double along = dot(x, params_.mu);
        for (int k = 0; k < 3; ++k)
            x[static_cast<size_t>(k)] -= along * params_.mu[static_cast<size_t>(k)];
        n_perp[static_cast<size_t>(i)] = x;
    }
}

StepReport step_npm(const Grid1D& grid, SpinState& state, CellField& v, const ScaledParams& params,
                    const BoundaryData& bc, double dt, const GummelOptions& gummel, BcMode mode) {
    TransientStepper stepper(grid, params, bc, gummel, mode);
    return stepper.step_npm(state, v, dt);
}

void step_nperp(const Grid1D& grid, std::vector<Vec3>& n_perp, const CellField& v,
                const ScaledParams& params, double dt, BcMode mode) {
    BoundaryData bc;
    bc.v_left = v.bc_left;
    bc.v_right = v.bc_right;
    TransientStepper stepper(grid, params, bc, GummelOptions{}, mode);
    stepper.step_nperp(n_perp, v, dt);
}

MatrixOracleStepper::MatrixOracleStepper(const Grid1D& grid, const ScaledParams& params,
                                         const BoundaryData& bc, GummelOptions gummel)
    : grid_(grid),
      params_(params),
      bc_(bc),
      gummel_(gummel),
      poisson_(grid, params.lambda2),
      sys4_(grid.n_cells()),
      basis_(spin_eigenbasis(params.diff, params.p, params.mu)) {
    if (grid.n_cells() > 64)
        throw ValidationError("MatrixOracleStepper: reference stepper is guarded to <= 64 cells");
    if (params_.doping.size() != grid.n_cells())
        throw ValidationError("MatrixOracleStepper: doping field does not match the grid");

    // Source matrix in y = (n0, 2 nvec) coordinates: zero charge row,
    // 2 gamma (y cross mu) - y/tau on the vector block; then rotated into
    // the eigenbasis.
    Mat4 src{};
    const auto cm = cross_matrix(params_.mu);
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) {
            double val = 2.0 * params_.gamma * cm[static_cast<size_t>(r)][static_cast<size_t>(c)];
            if (r == c) val -= 1.0 / params_.tau;
            src[static_cast<size_t>(r + 1)][static_cast<size_t>(c + 1)] = val;
        }
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) {
            double s = 0.0;
            for (int k = 0; k < 4; ++k)
                for (int l = 0; l < 4; ++l)
                    s += basis_.q[static_cast<size_t>(k)][static_cast<size_t>(r)] *
                         src[static_cast<size_t>(k)][static_cast<size_t>(l)] *
                         basis_.q[static_cast<size_t>(l)][static_cast<size_t>(c)];
            source_eig_[static_cast<size_t>(r)][static_cast<size_t>(c)] = s;
        }

    // Boundary traces y_D = (n_D, 0, 0, 0) rotated into the eigenbasis.
    for (int k = 0; k < 4; ++k) {
        w_left_[static_cast<size_t>(k)] = basis_.q[0][static_cast<size_t>(k)] * bc.n_left;
        w_right_[static_cast<size_t>(k)] = basis_.q[0][static_cast<size_t>(k)] * bc.n_right;
    }
}

StepReport MatrixOracleStepper::step(std::vector<double>& n0, std::vector<Vec3>& nvec, CellField& v,
                                     double dt) {
    if (!(dt > 0.0)) throw ValidationError("matrix oracle: dt must be > 0");
    const int n = grid_.n_cells();
    const double h = grid_.h();

    // w = Q^T y per cell, y = (n0, 2 nvec).
    std::vector<Vec4> w_old(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        const Vec4 y{n0[static_cast<size_t>(i)], 2.0 * nvec[static_cast<size_t>(i)][0],
                     2.0 * nvec[static_cast<size_t>(i)][1], 2.0 * nvec[static_cast<size_t>(i)][2]};
        for (int k = 0; k < 4; ++k) {
            double s = 0.0;
            for (int r = 0; r < 4; ++r)
                s += basis_.q[static_cast<size_t>(r)][static_cast<size_t>(k)] * y[static_cast<size_t>(r)];
            w_old[static_cast<size_t>(i)][static_cast<size_t>(k)] = s;
        }
    }

    CellField v_iter = v;
    v_iter.bc_left = bc_.v_left;
    v_iter.bc_right = bc_.v_right;

    std::vector<Vec4> sol(static_cast<size_t>(n));
    std::vector<double> rhs_poisson(static_cast<size_t>(n));
    StepReport report;
    report.dt_used = dt;

    bool converged = false;
    for (int it = 1; it <= gummel_.max_iter; ++it) {
        sys4_.clear();
        for (int i = 0; i < n; ++i) {
            auto& diag = sys4_.diag(i);
            auto& rhs = sys4_.rhs(i);

            for (int k = 0; k < 4; ++k) {
                double a_diag = 1.0 / dt;
                double b = w_old[static_cast<size_t>(i)][static_cast<size_t>(k)] / dt;
                const double dc = basis_.eigenvalues[static_cast<size_t>(k)];

                {
                    const int f = i;
                    const double dv = v_iter.right_of_face(f) - v_iter.left_of_face(f);
                    const double c = dc / (h * grid_.face_dist(f));
                    a_diag += c * bernoulli(-dv);
                    if (i > 0)
                        sys4_.lower(i)[static_cast<size_t>(k * 4 + k)] = -c * bernoulli(dv);
                    else
                        b += c * bernoulli(dv) * w_left_[static_cast<size_t>(k)];
                }
                {
                    const int f = i + 1;
                    const double dv = v_iter.right_of_face(f) - v_iter.left_of_face(f);
                    const double c = dc / (h * grid_.face_dist(f));
                    a_diag += c * bernoulli(dv);
                    if (i < n - 1)
                        sys4_.upper(i)[static_cast<size_t>(k * 4 + k)] = -c * bernoulli(-dv);
                    else
                        b += c * bernoulli(-dv) * w_right_[static_cast<size_t>(k)];
                }

                for (int l = 0; l < 4; ++l) {
                    double val = -source_eig_[static_cast<size_t>(k)][static_cast<size_t>(l)];
                    if (l == k) val += a_diag;
                    diag[static_cast<size_t>(k * 4 + l)] = val;
                }
                rhs[static_cast<size_t>(k)] = b;
            }
        }
        sys4_.solve();
        for (int i = 0; i < n; ++i) sol[static_cast<size_t>(i)] = sys4_.rhs(i);

        for (int i = 0; i < n; ++i) {
            double charge = 0.0;
            for (int k = 0; k < 4; ++k)
                charge += basis_.q[0][static_cast<size_t>(k)] * sol[static_cast<size_t>(i)][static_cast<size_t>(k)];
            rhs_poisson[static_cast<size_t>(i)] = charge - params_.doping[i];
        }
        CellField v_next = poisson_.solve(rhs_poisson, bc_.v_left, bc_.v_right);

        const double rel = rel_update(v_next.values, v_iter.values);
        report.gummel_iterations = it;
        report.residual = rel;
        v_iter = std::move(v_next);
        if (rel <= gummel_.tol) {
            converged = true;
            break;
        }
    }
    if (!converged)
        throw SolverError("matrix oracle: Gummel cycle did not converge within " +
                          std::to_string(gummel_.max_iter) + " iterations");

    for (int i = 0; i < n; ++i) {
        Vec4 y{};
        for (int r = 0; r < 4; ++r) {
            double s = 0.0;
            for (int k = 0; k < 4; ++k)
                s += basis_.q[static_cast<size_t>(r)][static_cast<size_t>(k)] *
                     sol[static_cast<size_t>(i)][static_cast<size_t>(k)];
            y[static_cast<size_t>(r)] = s;
        }
        n0[static_cast<size_t>(i)] = y[0];
        nvec[static_cast<size_t>(i)] = {0.5 * y[1], 0.5 * y[2], 0.5 * y[3]};

        const double along = dot(nvec[static_cast<size_t>(i)], params_.mu);
        const double np = 0.5 * y[0] + along;
        const double nm = 0.5 * y[0] - along;
        if (np < -1e-14 * (1.0 + std::abs(y[0])) || nm < -1e-14 * (1.0 + std::abs(y[0])))
            throw SolverError("matrix oracle: negative density in cell " + std::to_string(i));
    }
    v = v_iter;
    return report;
}

StepReport step_matrix_oracle(const Grid1D& grid, std::vector<double>& n0, std::vector<Vec3>& nvec,
                              CellField& v, const ScaledParams& params, const BoundaryData& bc,
                              double dt, const GummelOptions& gummel) {
    MatrixOracleStepper stepper(grid, params, bc, gummel);
    return stepper.step(n0, nvec, v, dt);
}

EnergySeries run_transient(const Grid1D& grid, const SpinState& initial,
                           const ScaledParams& params, const BoundaryData& bc,
                           const SteadyState& steady, const TransientOptions& opts,
                           const GummelOptions& gummel, kernels::ExecPolicy exec,
                           DiagnosticsRecorder* recorder, const StepObserver& observer,
                           std::ostream* warnings) {
    if (!(opts.dt > 0.0)) throw ValidationError("run_transient: dt must be > 0");
    if (opts.t_end < 0.0) throw ValidationError("run_transient: t_end must be >= 0");
    for (int i = 0; i < initial.size(); ++i)
        if (!(initial.n_plus[i] > 0.0 && initial.n_minus[i] > 0.0))
            throw ValidationError("run_transient: initial densities must be positive (cell " +
                                  std::to_string(i) + ")");

    if (opts.warn_tau_condition && warnings) {
        const TauCondition cond = check_tau_condition(params, std::max(params.doping_sup(), 1e-300));
        if (!cond.satisfied)
            *warnings << "warning: relaxation-time condition violated (tau = " << params.tau
                      << " > threshold " << cond.threshold
                      << "); perpendicular spin decay is not guaranteed\n";
    }

    const double dt_min = opts.dt_min > 0.0 ? opts.dt_min : opts.dt / 1024.0;

    TransientStepper stepper(grid, params, bc, gummel, BcMode::dirichlet, exec);
    SpinState state = initial;
    state.n_plus.bc_left = 0.5 * bc.n_left;
    state.n_plus.bc_right = 0.5 * bc.n_right;
    state.n_minus.bc_left = 0.5 * bc.n_left;
    state.n_minus.bc_right = 0.5 * bc.n_right;

    PoissonSolver poisson(grid, params.lambda2);
    std::vector<double> rhs(static_cast<size_t>(grid.n_cells()));
    for (int i = 0; i < grid.n_cells(); ++i)
        rhs[static_cast<size_t>(i)] = state.n_plus[i] + state.n_minus[i] - params.doping[i];
    CellField v = poisson.solve(rhs, bc.v_left, bc.v_right);

    DiagnosticsRecorder local(grid, params, bc, steady, initial);
    DiagnosticsRecorder& rec = recorder ? *recorder : local;
    rec.observe(0.0, state, v);

    const auto advance = [&](double dt) -> StepReport {
        SpinState saved_state = state;
        CellField saved_v = v;
        try {
            StepReport rep = stepper.step_npm(state, v, dt);
            stepper.step_nperp(state.n_perp, stepper.v_lagged(), dt);
            return rep;
        } catch (const SolverError&) {
            state = std::move(saved_state);
            v = std::move(saved_v);
            throw;
        }
    };

    double t = 0.0;
    int step = 0;
    while (t < opts.t_end - 1e-12 * std::max(1.0, opts.t_end)) {
        const double dt = std::min(opts.dt, opts.t_end - t);
        StepReport report;
        try {
            report = advance(dt);
            t += dt;
        } catch (const SolverError&) {
            // One halving retry: two half steps keep the time grid.
            const double half = 0.5 * dt;
            if (half < dt_min)
                throw SolverError("run_transient: step failed at t = " + std::to_string(t) +
                                  " and dt/2 is below dt_min");
            report = advance(half);
            t += half;
            report = advance(half);
            t += half;
            report.dt_used = half;
        }
        ++step;
        const bool store = (step % std::max(1, opts.record_every) == 0) ||
                           !(t < opts.t_end - 1e-12 * std::max(1.0, opts.t_end));
        rec.observe(t, state, v, store);
        if (observer) observer(step, t, state, v, report);
    }
    return rec.series();
}

double total_charge(const Grid1D& grid, const SpinState& state) {
    double s = 0.0;
    for (int i = 0; i < grid.n_cells(); ++i) s += state.n_plus[i] + state.n_minus[i];
    return grid.h() * s;
}

}  // namespace spindd

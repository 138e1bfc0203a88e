#include "spindd/stationary.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "spindd/numerics.hpp"
#include "spindd/transport.hpp"

namespace spindd {

double BoundaryData::phi_left() const { return std::log(n_left) + v_left; }
double BoundaryData::phi_right() const { return std::log(n_right) + v_right; }

namespace {

double rel_change(const std::vector<double>& a, const std::vector<double>& b) {
    double num = 0.0, den = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        num = std::max(num, std::abs(a[i] - b[i]));
        den = std::max(den, std::abs(b[i]));
    }
    return num / (1.0 + den);
}

}  // namespace

SteadyState solve_stationary(const Grid1D& grid, double lambda2, const BoundaryData& bc,
                             const CellField& doping, const StationaryOptions& opts) {
    if (!(bc.n_left > 0.0 && bc.n_right > 0.0))
        throw ValidationError("solve_stationary: boundary densities must be > 0");
    if (doping.size() != grid.n_cells())
        throw ValidationError("solve_stationary: doping/grid size mismatch");

    const int n = grid.n_cells();
    PoissonSolver poisson(grid, lambda2);

    // Initial guess: linear interpolation of the boundary densities.
    std::vector<double> density(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double x = grid.cell_center(i) / grid.length();
        density[static_cast<size_t>(i)] = bc.n_left + (bc.n_right - bc.n_left) * x;
    }
    std::vector<double> rhs(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i)
        rhs[static_cast<size_t>(i)] = density[static_cast<size_t>(i)] - doping[i];
    CellField v = poisson.solve(rhs, bc.v_left, bc.v_right);

    const double u_left = bc.n_left * std::exp(bc.v_left);
    const double u_right = bc.n_right * std::exp(bc.v_right);

    std::vector<double> sub(static_cast<size_t>(n)), diag(static_cast<size_t>(n)),
        sup(static_cast<size_t>(n)), b(static_cast<size_t>(n));
    std::vector<double> density_new(static_cast<size_t>(n));
    std::vector<double> history;

    int it = 0;
    bool converged = false;
    for (it = 1; it <= opts.max_iter; ++it) {
        // Face weights w = B(dV) e^{-V_L} (= B(-dV) e^{-V_R}), scaled by the
        // face distance; boundary faces run against the traces over h/2.
        // Assemble sum_faces w (u_L - u_R) = 0 per cell.
        for (int i = 0; i < n; ++i) {
            const double vl = v.left_of_face(i);
            const double vc = v[i];
            const double wl = bernoulli(vc - vl) * std::exp(-vl) / grid.face_dist(i);
            const double vr = v.right_of_face(i + 1);
            const double wr = bernoulli(vr - vc) * std::exp(-vc) / grid.face_dist(i + 1);

            diag[static_cast<size_t>(i)] = wl + wr;
            sub[static_cast<size_t>(i)] = (i > 0) ? -wl : 0.0;
            sup[static_cast<size_t>(i)] = (i < n - 1) ? -wr : 0.0;
            double rb = 0.0;
            if (i == 0) rb += wl * u_left;
            if (i == n - 1) rb += wr * u_right;
            b[static_cast<size_t>(i)] = rb;
        }
        thomas_solve(sub, diag, sup, b);

        for (int i = 0; i < n; ++i)
            density_new[static_cast<size_t>(i)] = b[static_cast<size_t>(i)] * std::exp(-v[i]);

        for (int i = 0; i < n; ++i)
            rhs[static_cast<size_t>(i)] = density_new[static_cast<size_t>(i)] - doping[i];
        CellField v_new = poisson.solve(rhs, bc.v_left, bc.v_right);

        const double rel =
            std::max(rel_change(density_new, density), rel_change(v_new.values, v.values));
        history.push_back(rel);
        density = density_new;
        v = std::move(v_new);
        if (rel <= opts.tol) {
            converged = true;
            break;
        }
    }
    if (!converged)
        throw SolverError("solve_stationary: Gummel iteration did not converge within " +
                              std::to_string(opts.max_iter) + " iterations (last update " +
                              std::to_string(history.empty() ? 0.0 : history.back()) + ")",
                          history);

    SteadyState s;
    s.n_inf = CellField(n, 0.0, 0.0, 0.0);
    s.n_inf.values = density;
    s.n_inf.bc_left = bc.n_left;
    s.n_inf.bc_right = bc.n_right;
    s.v_inf = v;
    s.phi_inf = CellField(n, 0.0, bc.phi_left(), bc.phi_right());
    for (int i = 0; i < n; ++i) {
        if (!(density[static_cast<size_t>(i)] > 0.0))
            throw SolverError("solve_stationary: nonpositive density in cell " + std::to_string(i));
        s.phi_inf[i] = std::log(density[static_cast<size_t>(i)]) + v[i];
    }
    auto [mn, mx] = std::minmax_element(density.begin(), density.end());
    s.m_inf = *mn;
    s.big_m_inf = *mx;
    s.residual_history = std::move(history);
    s.iterations = it;
    s.grad_phi_inf_max = grad_phi_inf_sup(grid, s);
    return s;
}

double grad_phi_inf_sup(const Grid1D& grid, const SteadyState& state) {
    double sup = 0.0;
    for (int f = 0; f < grid.n_faces(); ++f) {
        const double d = (state.phi_inf.right_of_face(f) - state.phi_inf.left_of_face(f)) /
                         grid.face_dist(f);
        sup = std::max(sup, std::abs(d));
    }
    return sup;
}

double stationary_current_sup(const Grid1D& grid, const SteadyState& state) {
    double sup = 0.0;
    for (int f = 0; f < grid.n_faces(); ++f) {
        const double dv = state.v_inf.right_of_face(f) - state.v_inf.left_of_face(f);
        const double j = sg_flux(state.n_inf.left_of_face(f), state.n_inf.right_of_face(f), dv, 1.0,
                                 grid.face_dist(f));
        sup = std::max(sup, std::abs(j));
    }
    return sup;
}

}  // namespace spindd

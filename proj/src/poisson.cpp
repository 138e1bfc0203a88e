#include "spindd/poisson.hpp"

#include <cmath>
#include <string>

#include "spindd/numerics.hpp"

namespace spindd {

PoissonSolver::PoissonSolver(const Grid1D& grid, double lambda2) : grid_(grid), lambda2_(lambda2) {
    if (!(lambda2 > 0.0)) throw ValidationError("PoissonSolver: lambda2 must be > 0");
    const size_t n = static_cast<size_t>(grid.n_cells());
    sub_.resize(n);
    diag_.resize(n);
    sup_.resize(n);
    work_.resize(n);
}

CellField PoissonSolver::solve(const std::vector<double>& rhs, double v_left, double v_right) {
    const int n = grid_.n_cells();
    if (static_cast<int>(rhs.size()) != n)
        throw ValidationError("PoissonSolver::solve: rhs has " + std::to_string(rhs.size()) +
                              " entries, grid has " + std::to_string(n) + " cells");
    const double h = grid_.h();

    // Flux balance per cell: lambda^2 [(V_i - V_{i-1})/d_l + (V_i - V_{i+1})/d_r] = h rhs_i,
    // traces entering through the half-spaced boundary faces.
    for (int i = 0; i < n; ++i) {
        const double dl = grid_.face_dist(i);
        const double dr = grid_.face_dist(i + 1);
        const double cl = lambda2_ / dl;
        const double cr = lambda2_ / dr;
        diag_[static_cast<size_t>(i)] = cl + cr;
        sub_[static_cast<size_t>(i)] = (i > 0) ? -cl : 0.0;
        sup_[static_cast<size_t>(i)] = (i < n - 1) ? -cr : 0.0;
        double b = h * rhs[static_cast<size_t>(i)];
        if (i == 0) b += cl * v_left;
        if (i == n - 1) b += cr * v_right;
        work_[static_cast<size_t>(i)] = b;
    }
    thomas_solve(sub_, diag_, sup_, work_);

    CellField v(n, 0.0, v_left, v_right);
    v.values = work_;
    return v;
}

CellField solve(const Grid1D& grid, const PoissonProblem& prob) {
    PoissonSolver solver(grid, prob.lambda2);
    return solver.solve(prob.rhs.values, prob.v_left, prob.v_right);
}

std::vector<double> grad_faces(const Grid1D& grid, const CellField& v) {
    if (v.size() != grid.n_cells()) throw ValidationError("grad_faces: field/grid size mismatch");
    std::vector<double> g(static_cast<size_t>(grid.n_faces()));
    for (int f = 0; f < grid.n_faces(); ++f)
        g[static_cast<size_t>(f)] = (v.right_of_face(f) - v.left_of_face(f)) / grid.face_dist(f);
    return g;
}

double poisson_residual(const Grid1D& grid, double lambda2, const CellField& v,
                        const std::vector<double>& rhs) {
    const int n = grid.n_cells();
    const double h = grid.h();
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        const double flux_l = (v[i] - v.left_of_face(i)) / grid.face_dist(i);
        const double flux_r = (v.right_of_face(i + 1) - v[i]) / grid.face_dist(i + 1);
        const double r = lambda2 * (flux_l - flux_r) / h - rhs[static_cast<size_t>(i)];
        worst = std::max(worst, std::abs(r));
    }
    return worst;
}

}  // namespace spindd

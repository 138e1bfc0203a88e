#pragma once

#include <vector>

#include "spindd/grid.hpp"

namespace spindd {

/// -lambda^2 V'' = rhs with Dirichlet traces in rhs-field units.
struct PoissonProblem {
    double lambda2 = 1.0;
    CellField rhs;  // n0 - g; bc traces of rhs are ignored
    double v_left = 0.0;
    double v_right = 0.0;
};

/// Direct tridiagonal solver for the scaled Poisson equation on a 1D
/// cell-centered grid. Owns its band workspace; one instance per thread.
class PoissonSolver {
public:
    PoissonSolver(const Grid1D& grid, double lambda2);

    /// Second-order 3-point discretization (half-cell spacing against the
    /// boundary traces), solved by the Thomas algorithm. The returned
    /// field carries the traces.
    CellField solve(const std::vector<double>& rhs, double v_left, double v_right);

    double lambda2() const { return lambda2_; }

private:
    const Grid1D grid_;
    double lambda2_;
    std::vector<double> sub_, diag_, sup_, work_;
};

CellField solve(const Grid1D& grid, const PoissonProblem& prob);

/// Per-face difference quotients (V_R - V_L)/d including the boundary
/// faces against the traces. Size n_faces.
std::vector<double> grad_faces(const Grid1D& grid, const CellField& v);

/// Max-norm residual of the discrete equation, in rhs units.
double poisson_residual(const Grid1D& grid, double lambda2, const CellField& v,
                        const std::vector<double>& rhs);

}  // namespace spindd

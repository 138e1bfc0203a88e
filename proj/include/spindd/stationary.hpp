#pragma once

#include <vector>

#include "spindd/grid.hpp"
#include "spindd/poisson.hpp"

namespace spindd {

/// Dirichlet data for the coupled system: charge-density and potential
/// traces. phi = log n_D + V_D is the electrochemical potential trace;
/// phi = 0 on both sides characterizes thermal equilibrium.
struct BoundaryData {
    double n_left = 1.0;
    double n_right = 1.0;
    double v_left = 0.0;
    double v_right = 0.0;

    double phi_left() const;
    double phi_right() const;
};

/// Solution of the stationary spinless drift-diffusion-Poisson system.
struct SteadyState {
    CellField n_inf;
    CellField v_inf;
    CellField phi_inf;  // log n_inf + V_inf, traces phi_D
    double grad_phi_inf_max = 0.0;
    double m_inf = 0.0;  // min n_inf
    double big_m_inf = 0.0;  // max n_inf
    std::vector<double> residual_history;
    int iterations = 0;
};

struct StationaryOptions {
    double tol = 1e-12;  // relative update stopping criterion
    int max_iter = 500;
};

/// Gummel iteration in the Slotboom variable u = n e^V: given V, solve
/// div(w(V) grad u) = 0 with the SG-consistent face weights
/// w = B(V_R - V_L) e^{-V_L}, set n = u e^{-V}, re-solve Poisson, repeat.
/// Throws SolverError (with the residual history) on non-convergence.
SteadyState solve_stationary(const Grid1D& grid, double lambda2, const BoundaryData& bc,
                             const CellField& doping, const StationaryOptions& opts = {});

/// Max over faces of |phi_inf difference| / face distance.
double grad_phi_inf_sup(const Grid1D& grid, const SteadyState& state);

/// Max-norm of the SG current of (n_inf, V_inf) over all faces; a
/// converged steady state has vanishing discrete current.
double stationary_current_sup(const Grid1D& grid, const SteadyState& state);

}  // namespace spindd

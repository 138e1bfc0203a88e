#pragma once

#include "spindd/model.hpp"

namespace spindd {

/// Physical device constants (CGS-flavored units as listed).
struct PhysicalParams {
    double q;       // elementary charge [As]
    double eps_s;   // permittivity [As/(V cm)]
    double mu0;     // low-field mobility [cm^2/(V s)]
    double u_t;     // thermal voltage [V]
    double g_star;  // maximal doping concentration [1/cm^3]
    double tau0;    // spin-flip relaxation time [s]
    double length;  // device length [cm]
};

struct ScalingResult {
    ScaledParams params;
    double t_star;   // typical time L^2/(mu0 U_T) [s]
    double lambda2;  // eps_s U_T / (q L^2 g*)
    double tau;      // tau0 / t_star
};

/// Dimensionless constants from physical ones:
/// lambda^2 = eps_s U_T / (q L^2 g*), t* = L^2 / (mu0 U_T), tau = tau0/t*.
/// gamma, p, D and the doping profile are taken as already scaled.
ScalingResult scale(const PhysicalParams& phys, double p, double gamma, double diff,
                    CellField doping, const Vec3& mu = {0.0, 0.0, 1.0});

struct TauCondition {
    bool satisfied = false;
    double threshold = 0.0;  // 2 eta lambda^2 / (D g_sup)
};

/// Smallness condition on the relaxation time that the perpendicular
/// spin decay estimate needs: tau <= 2 eta lambda^2 / (D ||g||_inf).
TauCondition check_tau_condition(const ScaledParams& sp, double g_sup);

}  // namespace spindd

#include "spindd/params.hpp"

#include "spindd/errors.hpp"

namespace spindd {

ScalingResult scale(const PhysicalParams& phys, double p, double gamma, double diff,
                    CellField doping, const Vec3& mu) {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0)) throw ValidationError(std::string("scale: ") + name + " must be > 0");
    };
    positive(phys.q, "q");
    positive(phys.eps_s, "eps_s");
    positive(phys.mu0, "mu0");
    positive(phys.u_t, "U_T");
    positive(phys.g_star, "g_star");
    positive(phys.tau0, "tau0");
    positive(phys.length, "L");

    ScalingResult r;
    r.lambda2 = phys.eps_s * phys.u_t / (phys.q * phys.length * phys.length * phys.g_star);
    r.t_star = phys.length * phys.length / (phys.mu0 * phys.u_t);
    r.tau = phys.tau0 / r.t_star;
    r.params = ScaledParams::create(gamma, r.tau, diff, r.lambda2, p, mu, std::move(doping));
    return r;
}

TauCondition check_tau_condition(const ScaledParams& sp, double g_sup) {
    if (!(g_sup > 0.0)) throw ValidationError("check_tau_condition: g_sup must be > 0");
    TauCondition c;
    c.threshold = 2.0 * sp.eta * sp.lambda2 / (sp.diff * g_sup);
    c.satisfied = sp.tau <= c.threshold;
    return c;
}

}  // namespace spindd

#include "spindd/model.hpp"

#include <cmath>
#include <string>

#include "spindd/errors.hpp"

namespace spindd {

double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

ScaledParams ScaledParams::create(double gamma, double tau, double diff, double lambda2, double p,
                                  const Vec3& mu, CellField doping) {
    if (!(gamma > 0.0)) throw ValidationError("ScaledParams: gamma must be > 0");
    if (!(tau > 0.0)) throw ValidationError("ScaledParams: tau must be > 0");
    if (!(diff > 0.0)) throw ValidationError("ScaledParams: diff must be > 0");
    if (!(lambda2 > 0.0)) throw ValidationError("ScaledParams: lambda2 must be > 0");
    if (!(p >= 0.0 && p < 1.0))
        throw ValidationError("ScaledParams: p must lie in [0, 1), got " + std::to_string(p));

    const double len = norm(mu);
    if (!(len > 1e-8)) throw ValidationError("ScaledParams: mu must be a nonzero vector");

    ScaledParams sp;
    sp.gamma = gamma;
    sp.tau = tau;
    sp.diff = diff;
    sp.lambda2 = lambda2;
    sp.p = p;
    sp.eta = std::sqrt(1.0 - p * p);
    sp.d_plus = diff / (1.0 + p);
    sp.d_minus = diff / (1.0 - p);
    sp.mu = {mu[0] / len, mu[1] / len, mu[2] / len};
    sp.doping = std::move(doping);
    return sp;
}

double ScaledParams::doping_sup() const {
    double s = 0.0;
    for (double v : doping.values) s = std::max(s, v);
    return s;
}

void decompose(const DensityMatrixField& N, std::vector<double>& n0, std::vector<Vec3>& nvec) {
    const int n = N.size();
    n0.assign(static_cast<size_t>(n), 0.0);
    nvec.assign(static_cast<size_t>(n), Vec3{0.0, 0.0, 0.0});

    // Hermiticity check first, reporting the worst offender.
    double worst = 0.0;
    int worst_cell = -1;
    for (int i = 0; i < n; ++i) {
        const auto& c = N.cells[static_cast<size_t>(i)];
        double dev = std::abs(std::imag(c[0])) + std::abs(std::imag(c[3]));
        dev = std::max(dev, std::abs(c[1] - std::conj(c[2])));
        if (dev > worst) {
            worst = dev;
            worst_cell = i;
        }
    }
    if (worst > 1e-12)
        throw ValidationError("decompose: non-Hermitian input, worst cell " +
                              std::to_string(worst_cell) + " deviates by " + std::to_string(worst));

    for (int i = 0; i < n; ++i) {
        const auto& c = N.cells[static_cast<size_t>(i)];
        n0[static_cast<size_t>(i)] = std::real(c[0]) + std::real(c[3]);
        // n_k = (1/2) tr(sigma_k N)
        nvec[static_cast<size_t>(i)] = {std::real(c[1]), -std::imag(c[1]),
                                        0.5 * (std::real(c[0]) - std::real(c[3]))};
    }
}

DensityMatrixField reconstruct(const std::vector<double>& n0, const std::vector<Vec3>& nvec) {
    if (n0.size() != nvec.size()) throw ValidationError("reconstruct: n0/nvec size mismatch");
    DensityMatrixField N;
    N.cells.resize(n0.size());
    for (size_t i = 0; i < n0.size(); ++i) {
        const double half = 0.5 * n0[i];
        const Vec3& v = nvec[i];
        N.cells[i] = {std::complex<double>(half + v[2], 0.0), std::complex<double>(v[0], -v[1]),
                      std::complex<double>(v[0], v[1]), std::complex<double>(half - v[2], 0.0)};
    }
    return N;
}

SpinState to_spin_state(const std::vector<double>& n0, const std::vector<Vec3>& nvec,
                        const Vec3& mu) {
    if (n0.size() != nvec.size()) throw ValidationError("to_spin_state: n0/nvec size mismatch");
    if (std::abs(norm(mu) - 1.0) > 1e-12)
        throw ValidationError("to_spin_state: mu must be a unit vector");

    SpinState s;
    const int n = static_cast<int>(n0.size());
    s.n_plus = CellField(n);
    s.n_minus = CellField(n);
    s.n_perp.assign(static_cast<size_t>(n), Vec3{0.0, 0.0, 0.0});
    for (int i = 0; i < n; ++i) {
        const double along = dot(nvec[static_cast<size_t>(i)], mu);
        s.n_plus[i] = 0.5 * n0[static_cast<size_t>(i)] + along;
        s.n_minus[i] = 0.5 * n0[static_cast<size_t>(i)] - along;
        for (int k = 0; k < 3; ++k)
            s.n_perp[static_cast<size_t>(i)][static_cast<size_t>(k)] =
                nvec[static_cast<size_t>(i)][static_cast<size_t>(k)] - along * mu[static_cast<size_t>(k)];
    }
    return s;
}

void from_spin_state(const SpinState& s, const Vec3& mu, std::vector<double>& n0,
                     std::vector<Vec3>& nvec) {
    const int n = s.size();
    n0.assign(static_cast<size_t>(n), 0.0);
    nvec.assign(static_cast<size_t>(n), Vec3{0.0, 0.0, 0.0});
    for (int i = 0; i < n; ++i) {
        n0[static_cast<size_t>(i)] = s.n_plus[i] + s.n_minus[i];
        const double along = 0.5 * (s.n_plus[i] - s.n_minus[i]);
        for (int k = 0; k < 3; ++k)
            nvec[static_cast<size_t>(i)][static_cast<size_t>(k)] =
                s.n_perp[static_cast<size_t>(i)][static_cast<size_t>(k)] + along * mu[static_cast<size_t>(k)];
    }
}

Mat4 cross_diffusion_matrix(double diff, double p, const Vec3& mu) {
    if (!(p >= 0.0 && p < 1.0))
        throw ValidationError("cross_diffusion_matrix: p must lie in [0, 1)");
    const double eta = std::sqrt(1.0 - p * p);
    const double scale = diff / (1.0 - p * p);

    Mat4 a{};
    a[0][0] = scale;
    for (int k = 0; k < 3; ++k) {
        a[0][static_cast<size_t>(k + 1)] = -scale * p * mu[static_cast<size_t>(k)];
        a[static_cast<size_t>(k + 1)][0] = -scale * p * mu[static_cast<size_t>(k)];
    }
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) {
            const double id = (r == c) ? 1.0 : 0.0;
            a[static_cast<size_t>(r + 1)][static_cast<size_t>(c + 1)] =
                scale * (eta * id + (1.0 - eta) * mu[static_cast<size_t>(r)] * mu[static_cast<size_t>(c)]);
        }
    return a;
}

Mat4 cross_diffusion_matrix(const ScaledParams& params) {
    return cross_diffusion_matrix(params.diff, params.p, params.mu);
}

std::pair<Vec3, Vec3> perp_basis(const Vec3& mu) {
    // Start from the coordinate axis least aligned with mu.
    int least = 0;
    for (int k = 1; k < 3; ++k)
        if (std::abs(mu[static_cast<size_t>(k)]) < std::abs(mu[static_cast<size_t>(least)])) least = k;
    Vec3 e{0.0, 0.0, 0.0};
    e[static_cast<size_t>(least)] = 1.0;

    Vec3 a{};
    const double proj = dot(e, mu);
    for (int k = 0; k < 3; ++k)
        a[static_cast<size_t>(k)] = e[static_cast<size_t>(k)] - proj * mu[static_cast<size_t>(k)];
    const double la = norm(a);
    for (auto& v : a) v /= la;
    const Vec3 b = cross(mu, a);
    return {a, b};
}

SpinEigenbasis spin_eigenbasis(double diff, double p, const Vec3& mu) {
    SpinEigenbasis basis;
    const double eta = std::sqrt(1.0 - p * p);
    const auto [a, b] = perp_basis(mu);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);

    // Columns: (1, mu)/sqrt2, (1, -mu)/sqrt2, (0, a), (0, b).
    basis.q[0] = {inv_sqrt2, inv_sqrt2, 0.0, 0.0};
    for (int k = 0; k < 3; ++k) {
        basis.q[static_cast<size_t>(k + 1)] = {inv_sqrt2 * mu[static_cast<size_t>(k)],
                                               -inv_sqrt2 * mu[static_cast<size_t>(k)],
                                               a[static_cast<size_t>(k)], b[static_cast<size_t>(k)]};
    }
    basis.eigenvalues = {diff / (1.0 + p), diff / (1.0 - p), diff / eta, diff / eta};
    return basis;
}

}  // namespace spindd

#pragma once

#include <array>
#include <complex>
#include <vector>

#include "spindd/grid.hpp"

namespace spindd {

using Vec3 = std::array<double, 3>;
using Vec4 = std::array<double, 4>;
using Mat4 = std::array<std::array<double, 4>, 4>;

inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
double norm(const Vec3& a);

/// Dimensionless model constants. eta, d_plus, d_minus are derived from
/// p and diff on construction; mu is normalized (rejected if far from
/// unit length or zero). doping is g(x) sampled on the run's grid.
struct ScaledParams {
    double gamma = 1.0;    // pseudo-exchange strength, > 0
    double tau = 1.0;      // spin-flip relaxation time, > 0
    double diff = 1.0;     // diffusion constant D, > 0
    double lambda2 = 1.0;  // squared scaled Debye length, > 0
    double p = 0.0;        // spin polarization in [0, 1)
    double eta = 1.0;      // sqrt(1 - p^2)
    double d_plus = 1.0;   // D / (1 + p)
    double d_minus = 1.0;  // D / (1 - p)
    Vec3 mu{0.0, 0.0, 1.0};
    CellField doping;

    static ScaledParams create(double gamma, double tau, double diff, double lambda2, double p,
                               const Vec3& mu, CellField doping);

    double doping_sup() const;
};

/// Cell fields of the decomposed state: spin-up/down densities and the
/// spin-vector component perpendicular to mu (zero Dirichlet traces).
struct SpinState {
    CellField n_plus;
    CellField n_minus;
    std::vector<Vec3> n_perp;

    int size() const { return n_plus.size(); }
};

/// Hermitian 2x2 complex matrix per cell, stored as (a00, a01, a10, a11).
struct DensityMatrixField {
    std::vector<std::array<std::complex<double>, 4>> cells;

    int size() const { return static_cast<int>(cells.size()); }
};

/// Pauli decomposition N = (1/2) n0 sigma_0 + nvec . sigma in the
/// standard basis. Throws ValidationError (naming the worst cell) if any
/// cell deviates from Hermitian symmetry by more than 1e-12.
void decompose(const DensityMatrixField& N, std::vector<double>& n0, std::vector<Vec3>& nvec);

/// Inverse of decompose.
DensityMatrixField reconstruct(const std::vector<double>& n0, const std::vector<Vec3>& nvec);

/// n_pm = n0/2 +- nvec.mu, n_perp = nvec - (nvec.mu) mu. Requires |mu| = 1.
SpinState to_spin_state(const std::vector<double>& n0, const std::vector<Vec3>& nvec,
                        const Vec3& mu);

/// n0 = n_plus + n_minus, nvec = n_perp + (n_plus - n_minus)/2 mu.
void from_spin_state(const SpinState& s, const Vec3& mu, std::vector<double>& n0,
                     std::vector<Vec3>& nvec);

/// The constant 4x4 diffusion matrix of the four-component form,
/// D/(1-p^2) [[1, -p mu^T], [-p mu, eta I + (1-eta) mu x mu]].
/// Symmetric positive definite for p in [0, 1).
Mat4 cross_diffusion_matrix(const ScaledParams& params);
Mat4 cross_diffusion_matrix(double diff, double p, const Vec3& mu);

/// Orthonormal eigenbasis of the cross-diffusion matrix, as columns of Q:
/// (1, mu)/sqrt(2) with eigenvalue D/(1+p), (1, -mu)/sqrt(2) with
/// D/(1-p), and two unit vectors perpendicular to mu with D/eta each.
struct SpinEigenbasis {
    Mat4 q;          // columns are eigenvectors
    Vec4 eigenvalues;
};
SpinEigenbasis spin_eigenbasis(double diff, double p, const Vec3& mu);

/// Deterministic orthonormal pair completing mu to a basis of R^3.
std::pair<Vec3, Vec3> perp_basis(const Vec3& mu);

}  // namespace spindd

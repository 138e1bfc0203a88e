#include "spindd/numerics.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

namespace spindd {

void thomas_solve(std::span<const double> sub, std::span<const double> diag,
                  std::span<const double> sup, std::span<double> rhs) {
    const size_t n = diag.size();
    if (n == 0) return;
    if (sub.size() != n || sup.size() != n || rhs.size() != n)
        throw ValidationError("thomas_solve: band/rhs size mismatch");

    static thread_local std::vector<double> c_star, d_star;
    c_star.assign(n, 0.0);
    d_star.assign(n, 0.0);

    c_star[0] = sup[0] / diag[0];
    d_star[0] = rhs[0] / diag[0];
    for (size_t i = 1; i < n; ++i) {
        const double m = diag[i] - sub[i] * c_star[i - 1];
        c_star[i] = sup[i] / m;
        d_star[i] = (rhs[i] - sub[i] * d_star[i - 1]) / m;
    }
    rhs[n - 1] = d_star[n - 1];
    for (size_t i = n - 1; i-- > 0;) rhs[i] = d_star[i] - c_star[i] * rhs[i + 1];
}

template <int K>
void solve_small(std::array<double, K * K>& a, std::array<double, K>& b) {
    int piv[K];
    for (int i = 0; i < K; ++i) piv[i] = i;

    for (int col = 0; col < K; ++col) {
        int best = col;
        double mag = std::abs(a[static_cast<size_t>(piv[col] * K + col)]);
        for (int r = col + 1; r < K; ++r) {
            const double m = std::abs(a[static_cast<size_t>(piv[r] * K + col)]);
            if (m > mag) {
                mag = m;
                best = r;
            }
        }
        if (mag == 0.0) throw SolverError("solve_small: singular block");
        std::swap(piv[col], piv[best]);

        const double inv = 1.0 / a[static_cast<size_t>(piv[col] * K + col)];
        for (int r = col + 1; r < K; ++r) {
            const double f = a[static_cast<size_t>(piv[r] * K + col)] * inv;
            a[static_cast<size_t>(piv[r] * K + col)] = f;
            for (int c = col + 1; c < K; ++c)
                a[static_cast<size_t>(piv[r] * K + c)] -= f * a[static_cast<size_t>(piv[col] * K + c)];
        }
    }

    std::array<double, K> y{};
    for (int r = 0; r < K; ++r) {
        double s = b[static_cast<size_t>(piv[r])];
        for (int c = 0; c < r; ++c) s -= a[static_cast<size_t>(piv[r] * K + c)] * y[static_cast<size_t>(c)];
        y[static_cast<size_t>(r)] = s;
    }
    for (int r = K - 1; r >= 0; --r) {
        double s = y[static_cast<size_t>(r)];
        for (int c = r + 1; c < K; ++c) s -= a[static_cast<size_t>(piv[r] * K + c)] * b[static_cast<size_t>(c)];
        b[static_cast<size_t>(r)] = s / a[static_cast<size_t>(piv[r] * K + r)];
    }
}

template void solve_small<2>(std::array<double, 4>&, std::array<double, 2>&);
template void solve_small<3>(std::array<double, 9>&, std::array<double, 3>&);
template void solve_small<4>(std::array<double, 16>&, std::array<double, 4>&);

namespace {

template <int K>
using Blk = std::array<double, K * K>;

template <int K>
void mat_mul(const Blk<K>& a, const Blk<K>& b, Blk<K>& out) {
    for (int r = 0; r < K; ++r)
        for (int c = 0; c < K; ++c) {
            double s = 0.0;
            for (int k = 0; k < K; ++k)
                s += a[static_cast<size_t>(r * K + k)] * b[static_cast<size_t>(k * K + c)];
            out[static_cast<size_t>(r * K + c)] = s;
        }
}

template <int K>
void mat_vec(const Blk<K>& a, const std::array<double, K>& x, std::array<double, K>& out) {
    for (int r = 0; r < K; ++r) {
        double s = 0.0;
        for (int c = 0; c < K; ++c) s += a[static_cast<size_t>(r * K + c)] * x[static_cast<size_t>(c)];
        out[static_cast<size_t>(r)] = s;
    }
}

/// Invert a K x K block via LU with partial pivoting.
template <int K>
Blk<K> invert(Blk<K> a) {
    Blk<K> inv{};
    for (int col = 0; col < K; ++col) {
        std::array<double, K> e{};
        e[static_cast<size_t>(col)] = 1.0;
        Blk<K> work = a;
        solve_small<K>(work, e);
        for (int r = 0; r < K; ++r) inv[static_cast<size_t>(r * K + col)] = e[static_cast<size_t>(r)];
    }
    return inv;
}

}  // namespace

template <int K>
BlockTridiag<K>::BlockTridiag(int n) : n_(n) {
    if (n < 1) throw ValidationError("BlockTridiag: n must be >= 1");
    diag_.resize(static_cast<size_t>(n));
    lower_.resize(static_cast<size_t>(n));
    upper_.resize(static_cast<size_t>(n));
    rhs_.resize(static_cast<size_t>(n));
    clear();
}

template <int K>
void BlockTridiag<K>::clear() {
    for (auto& b : diag_) b.fill(0.0);
    for (auto& b : lower_) b.fill(0.0);
    for (auto& b : upper_) b.fill(0.0);
    for (auto& b : rhs_) b.fill(0.0);
}

template <int K>
void BlockTridiag<K>::solve() {
    // Forward elimination: D_i' = D_i - L_i D_{i-1}'^{-1} U_{i-1},
    // carried out with explicit inverses of the (well-conditioned) blocks.
    std::vector<Blk<K>> dinv(static_cast<size_t>(n_));
    dinv[0] = invert<K>(diag_[0]);
    for (int i = 1; i < n_; ++i) {
        Blk<K> tmp{}, corr{};
        mat_mul<K>(lower_[static_cast<size_t>(i)], dinv[static_cast<size_t>(i - 1)], tmp);
        mat_mul<K>(tmp, upper_[static_cast<size_t>(i - 1)], corr);
        for (int e = 0; e < K * K; ++e) diag_[static_cast<size_t>(i)][static_cast<size_t>(e)] -= corr[static_cast<size_t>(e)];

        std::array<double, K> lv{};
        mat_vec<K>(dinv[static_cast<size_t>(i - 1)], rhs_[static_cast<size_t>(i - 1)], lv);
        std::array<double, K> lr{};
        mat_vec<K>(lower_[static_cast<size_t>(i)], lv, lr);
        for (int e = 0; e < K; ++e) rhs_[static_cast<size_t>(i)][static_cast<size_t>(e)] -= lr[static_cast<size_t>(e)];

        dinv[static_cast<size_t>(i)] = invert<K>(diag_[static_cast<size_t>(i)]);
    }

    // Back substitution.
    std::array<double, K> x{};
    mat_vec<K>(dinv[static_cast<size_t>(n_ - 1)], rhs_[static_cast<size_t>(n_ - 1)], x);
    rhs_[static_cast<size_t>(n_ - 1)] = x;
    for (int i = n_ - 2; i >= 0; --i) {
        std::array<double, K> uv{};
        mat_vec<K>(upper_[static_cast<size_t>(i)], rhs_[static_cast<size_t>(i + 1)], uv);
        std::array<double, K> r = rhs_[static_cast<size_t>(i)];
        for (int e = 0; e < K; ++e) r[static_cast<size_t>(e)] -= uv[static_cast<size_t>(e)];
        mat_vec<K>(dinv[static_cast<size_t>(i)], r, x);
        rhs_[static_cast<size_t>(i)] = x;
    }
}

template class BlockTridiag<2>;
template class BlockTridiag<3>;
template class BlockTridiag<4>;

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
    const size_t n = x.size();
    if (n != y.size() || n < 2) throw ValidationError("fit_line: need >= 2 points of equal length");

    double mx = 0.0, my = 0.0;
    for (size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);

    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx == 0.0) throw ValidationError("fit_line: degenerate abscissa");

    LineFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    if (syy == 0.0) {
        fit.r_squared = 1.0;
    } else {
        double ss_res = 0.0;
        for (size_t i = 0; i < n; ++i) {
            const double e = y[i] - (fit.intercept + fit.slope * x[i]);
            ss_res += e * e;
        }
        fit.r_squared = 1.0 - ss_res / syy;
        if (fit.r_squared < 0.0) fit.r_squared = 0.0;
        if (fit.r_squared > 1.0) fit.r_squared = 1.0;
    }
    return fit;
}

}  // namespace spindd

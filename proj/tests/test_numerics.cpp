#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "spindd/numerics.hpp"

using namespace spindd;

TEST_CASE("thomas solver against dense elimination") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> dist(0.1, 1.0);
    const int n = 40;
    std::vector<double> sub(n), diag(n), sup(n), rhs(n);
    for (int i = 0; i < n; ++i) {
        sub[i] = (i > 0) ? -dist(rng) : 0.0;
        sup[i] = (i < n - 1) ? -dist(rng) : 0.0;
        diag[i] = std::abs(sub[i]) + std::abs(sup[i]) + dist(rng) + 0.5;
        rhs[i] = dist(rng) - 0.5;
    }

    std::vector<double> dense(n * n, 0.0);
    for (int i = 0; i < n; ++i) {
        dense[i * n + i] = diag[i];
        if (i > 0) dense[i * n + i - 1] = sub[i];
        if (i < n - 1) dense[i * n + i + 1] = sup[i];
    }
    const auto ref = oracle::dense_solve(dense, rhs, n);

    std::vector<double> x = rhs;
    thomas_solve(sub, diag, sup, x);
    for (int i = 0; i < n; ++i) CHECK(x[i] == doctest::Approx(ref[i]).epsilon(1e-12));
}

namespace {

template <int K>
void block_tridiag_vs_dense(unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-0.4, 0.4);
    const int n = 12;
    BlockTridiag<K> sys(n);
    std::vector<double> dense(n * K * n * K, 0.0);
    std::vector<double> rhs(n * K);

    auto put = [&](int bi, int bj, int r, int c, double v) {
        dense[(bi * K + r) * n * K + (bj * K + c)] = v;
    };
    for (int i = 0; i < n; ++i) {
        for (int r = 0; r < K; ++r) {
            for (int c = 0; c < K; ++c) {
                const double off1 = dist(rng), off2 = dist(rng), d = dist(rng);
                if (i > 0) {
                    sys.lower(i)[r * K + c] = off1;
                    put(i, i - 1, r, c, off1);
                }
                if (i < n - 1) {
                    sys.upper(i)[r * K + c] = off2;
                    put(i, i + 1, r, c, off2);
                }
                const double val = d + (r == c ? 4.0 : 0.0);  // diagonally dominant
                sys.diag(i)[r * K + c] = val;
                put(i, i, r, c, val);
            }
            const double b = dist(rng);
            sys.rhs(i)[r] = b;
            rhs[i * K + r] = b;
        }
    }
    const auto ref = oracle::dense_solve(dense, rhs, n * K);
    sys.solve();
    for (int i = 0; i < n; ++i)
        for (int r = 0; r < K; ++r)
            CHECK(sys.rhs(i)[r] == doctest::Approx(ref[i * K + r]).epsilon(1e-11));
}

}  // namespace

TEST_CASE("block tridiagonal solver, K = 2, 3, 4") {
    block_tridiag_vs_dense<2>(21);
    block_tridiag_vs_dense<3>(22);
    block_tridiag_vs_dense<4>(23);
}

TEST_CASE("small dense solve with pivoting") {
    // requires a row swap: zero leading pivot
    std::array<double, 9> a = {0.0, 2.0, 1.0, 1.0, 0.0, 0.0, 3.0, 1.0, 2.0};
    std::array<double, 3> b = {5.0, 1.0, 7.0};
    solve_small<3>(a, b);
    // solution of the system: x = (1, 2, 1)
    CHECK(b[0] == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(b[1] == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(b[2] == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("line fit: exact line and r^2") {
    std::vector<double> x, y;
    for (int i = 0; i < 20; ++i) {
        x.push_back(0.1 * i);
        y.push_back(3.0 - 0.7 * 0.1 * i);
    }
    const LineFit f = fit_line(x, y);
    CHECK(f.slope == doctest::Approx(-0.7).epsilon(1e-12));
    CHECK(f.intercept == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(f.r_squared == doctest::Approx(1.0).epsilon(1e-12));

    // constant series: slope 0, r^2 reported as 1 (exact fit)
    std::vector<double> yc(20, 2.0);
    const LineFit fc = fit_line(x, yc);
    CHECK(fc.slope == doctest::Approx(0.0));
    CHECK(fc.r_squared == doctest::Approx(1.0));

    CHECK_THROWS_AS(fit_line(std::vector<double>{1.0}, std::vector<double>{1.0}),
                    ValidationError);
}

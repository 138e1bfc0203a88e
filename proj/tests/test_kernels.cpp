#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "spindd/kernels.hpp"
#include "spindd/transport.hpp"

using namespace spindd;

namespace {

std::vector<double> random_vec(int n, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-3.0, 3.0);
    std::vector<double> v(static_cast<size_t>(n));
    for (auto& x : v) x = dist(rng);
    return v;
}

}  // namespace

TEST_CASE("omp kernels match the serial reference") {
    const auto a = random_vec(10007, 3);
    const auto b = random_vec(10007, 4);

    for (int threads : {2, 4}) {
        CHECK(kernels::sum_omp(a, threads) ==
              doctest::Approx(kernels::sum_serial(a)).epsilon(1e-12));
        CHECK(kernels::dot_omp(a, b, threads) ==
              doctest::Approx(kernels::dot_serial(a, b)).epsilon(1e-12));
        CHECK(kernels::sum_sq_omp(a, threads) ==
              doctest::Approx(kernels::sum_sq_serial(a)).epsilon(1e-12));

        const auto [lo_s, hi_s] = kernels::minmax_serial(a);
        const auto [lo_p, hi_p] = kernels::minmax_omp(a, threads);
        CHECK(lo_p == lo_s);  // exact: no arithmetic involved
        CHECK(hi_p == hi_s);

        std::vector<double> out_s(a.size()), out_p(a.size());
        kernels::bernoulli_eval_serial(a, out_s);
        kernels::bernoulli_eval_omp(a, out_p, threads);
        for (size_t i = 0; i < a.size(); ++i) CHECK(out_p[i] == out_s[i]);  // pure map
    }
}

TEST_CASE("omp reductions are reproducible for a fixed thread count") {
    const auto a = random_vec(50001, 9);
    const double r1 = kernels::sum_omp(a, 4);
    const double r2 = kernels::sum_omp(a, 4);
    const double r3 = kernels::sum_omp(a, 4);
    CHECK(r1 == r2);
    CHECK(r2 == r3);

    const double d1 = kernels::dot_omp(a, a, 3);
    const double d2 = kernels::dot_omp(a, a, 3);
    CHECK(d1 == d2);
}

TEST_CASE("policy dispatch selects the requested path") {
    const auto a = random_vec(1024, 17);
    CHECK(kernels::sum(a, {1}) == kernels::sum_serial(a));
    CHECK(kernels::sum(a, {2}) == kernels::sum_omp(a, 2));
}

TEST_CASE("partition covers the range exactly") {
    for (int n : {0, 1, 7, 100, 10001}) {
        for (int T : {1, 2, 3, 8}) {
            int covered = 0;
            int prev_hi = 0;
            for (int t = 0; t < T; ++t) {
                const auto [lo, hi] = kernels::partition(n, t, T);
                CHECK(lo == prev_hi);
                covered += hi - lo;
                prev_hi = hi;
            }
            CHECK(covered == n);
            CHECK(prev_hi == n);
        }
    }
}

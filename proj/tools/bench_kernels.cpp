// Timing comparison of the serial reference kernels against the OpenMP
// paths, over the array sizes the solver actually touches (faces of fine
// grids) up to sweep-scale workloads.

#include <chrono>
#include <cstdio>
#include <random>
#include <vector>

#include "spindd/kernels.hpp"
#include "spindd/transport.hpp"

namespace {

using clock_type = std::chrono::steady_clock;

double time_ms(int reps, auto&& fn) {
    fn();  // warm-up
    const auto t0 = clock_type::now();
    for (int r = 0; r < reps; ++r) fn();
    const auto t1 = clock_type::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

}  // namespace

int main() {
    const int threads = spindd::kernels::max_threads();
    std::printf("kernel benchmark: serial reference vs OpenMP (%d threads)\n\n", threads);
    std::printf("%-16s %12s %14s %14s %10s\n", "kernel", "n", "serial [ms]", "omp [ms]", "speedup");

    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> dist(0.1, 2.0);

    volatile double sink = 0.0;
    for (const int n : {100'000, 1'000'000, 10'000'000}) {
        std::vector<double> a(static_cast<size_t>(n)), b(static_cast<size_t>(n)),
            out(static_cast<size_t>(n));
        for (auto& v : a) v = dist(rng);
        for (auto& v : b) v = dist(rng);
        const int reps = n > 1'000'000 ? 3 : 20;

        const double t_sum_s = time_ms(reps, [&] { sink = spindd::kernels::sum_serial(a); });
        const double t_sum_p = time_ms(reps, [&] { sink = spindd::kernels::sum_omp(a, threads); });
        std::printf("%-16s %12d %14.3f %14.3f %9.2fx\n", "sum", n, t_sum_s, t_sum_p,
                    t_sum_s / t_sum_p);

        const double t_dot_s = time_ms(reps, [&] { sink = spindd::kernels::dot_serial(a, b); });
        const double t_dot_p = time_ms(reps, [&] { sink = spindd::kernels::dot_omp(a, b, threads); });
        std::printf("%-16s %12d %14.3f %14.3f %9.2fx\n", "dot", n, t_dot_s, t_dot_p,
                    t_dot_s / t_dot_p);

        const double t_mm_s = time_ms(reps, [&] {
            auto mm = spindd::kernels::minmax_serial(a);
            sink = mm.first + mm.second;
        });
        const double t_mm_p = time_ms(reps, [&] {
            auto mm = spindd::kernels::minmax_omp(a, threads);
            sink = mm.first + mm.second;
        });
        std::printf("%-16s %12d %14.3f %14.3f %9.2fx\n", "minmax", n, t_mm_s, t_mm_p,
                    t_mm_s / t_mm_p);

        const double t_be_s =
            time_ms(reps, [&] { spindd::kernels::bernoulli_eval_serial(a, out); });
        const double t_be_p =
            time_ms(reps, [&] { spindd::kernels::bernoulli_eval_omp(a, out, threads); });
        std::printf("%-16s %12d %14.3f %14.3f %9.2fx\n", "bernoulli_eval", n, t_be_s, t_be_p,
                    t_be_s / t_be_p);
        std::printf("\n");
    }

    // The tridiagonal and block-tridiagonal recurrences stay serial; the
    // fan-out parallelism lives at the sweep level instead.
    std::printf("(sink %.3g)\n", static_cast<double>(sink));
    return 0;
}

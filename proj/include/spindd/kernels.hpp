#pragma once

#include <span>
#include <utility>

namespace spindd::kernels {

/// Thread budget for the data-parallel kernels. threads <= 1 selects the
/// serial reference path. OpenMP reductions accumulate into fixed
/// per-thread slots over a static contiguous partition and combine them
/// in thread order, so results are reproducible for a fixed thread count.
struct ExecPolicy {
    int threads = 1;
};

// Serial reference implementations (kept for testing and benchmarking).
double sum_serial(std::span<const double> a);
double dot_serial(std::span<const double> a, std::span<const double> b);
double sum_sq_serial(std::span<const double> a);
std::pair<double, double> minmax_serial(std::span<const double> a);
void bernoulli_eval_serial(std::span<const double> x, std::span<double> out);

// OpenMP implementations; fall back to serial when built without OpenMP.
double sum_omp(std::span<const double> a, int threads);
double dot_omp(std::span<const double> a, std::span<const double> b, int threads);
double sum_sq_omp(std::span<const double> a, int threads);
std::pair<double, double> minmax_omp(std::span<const double> a, int threads);
void bernoulli_eval_omp(std::span<const double> x, std::span<double> out, int threads);

// Dispatch on the policy.
double sum(std::span<const double> a, const ExecPolicy& exec = {});
double dot(std::span<const double> a, std::span<const double> b, const ExecPolicy& exec = {});
double sum_sq(std::span<const double> a, const ExecPolicy& exec = {});
std::pair<double, double> minmax(std::span<const double> a, const ExecPolicy& exec = {});
void bernoulli_eval(std::span<const double> x, std::span<double> out, const ExecPolicy& exec = {});

/// Static contiguous partition [begin, end) of n items for slot t of T.
inline std::pair<int, int> partition(int n, int t, int T) {
    const long long lo = static_cast<long long>(n) * t / T;
    const long long hi = static_cast<long long>(n) * (t + 1) / T;
    return {static_cast<int>(lo), static_cast<int>(hi)};
}

int max_threads();

}  // namespace spindd::kernels

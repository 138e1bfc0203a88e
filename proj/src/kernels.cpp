#include "spindd/kernels.hpp"

#include <algorithm>
#include <limits>
#include <vector>

#include "spindd/transport.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace spindd::kernels {

int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

double sum_serial(std::span<const double> a) {
    double s = 0.0;
    for (double v : a) s += v;
    return s;
}

double dot_serial(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double sum_sq_serial(std::span<const double> a) { return dot_serial(a, a); }

std::pair<double, double> minmax_serial(std::span<const double> a) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (double v : a) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return {lo, hi};
}

void bernoulli_eval_serial(std::span<const double> x, std::span<double> out) {
    for (size_t i = 0; i < x.size(); ++i) out[i] = bernoulli(x[i]);
}

#ifdef _OPENMP

namespace {

template <class PerSlot>
void run_slots(int n, int threads, std::vector<double>& slot_out, PerSlot body) {
    slot_out.assign(static_cast<size_t>(threads), 0.0);
#pragma omp parallel num_threads(threads)
    {
        const int t = omp_get_thread_num();
        const int T = omp_get_num_threads();
        auto [lo, hi] = partition(n, t, T);
        slot_out[static_cast<size_t>(t)] = body(lo, hi);
    }
}

}  // namespace

double sum_omp(std::span<const double> a, int threads) {
    if (threads <= 1) return sum_serial(a);
    std::vector<double> part;
    run_slots(static_cast<int>(a.size()), threads, part, [&](int lo, int hi) {
        double s = 0.0;
        for (int i = lo; i < hi; ++i) s += a[static_cast<size_t>(i)];
        return s;
    });
    double s = 0.0;
    for (double v : part) s += v;
    return s;
}

double dot_omp(std::span<const double> a, std::span<const double> b, int threads) {
    if (threads <= 1) return dot_serial(a, b);
    std::vector<double> part;
    run_slots(static_cast<int>(a.size()), threads, part, [&](int lo, int hi) {
        double s = 0.0;
        for (int i = lo; i < hi; ++i) s += a[static_cast<size_t>(i)] * b[static_cast<size_t>(i)];
        return s;
    });
    double s = 0.0;
    for (double v : part) s += v;
    return s;
}

double sum_sq_omp(std::span<const double> a, int threads) { return dot_omp(a, a, threads); }

std::pair<double, double> minmax_omp(std::span<const double> a, int threads) {
    if (threads <= 1) return minmax_serial(a);
    const int n = static_cast<int>(a.size());
    std::vector<double> lo_part(static_cast<size_t>(threads), std::numeric_limits<double>::infinity());
    std::vector<double> hi_part(static_cast<size_t>(threads), -std::numeric_limits<double>::infinity());
#pragma omp parallel num_threads(threads)
    {
        const int t = omp_get_thread_num();
        const int T = omp_get_num_threads();
        auto [lo, hi] = partition(n, t, T);
        double vlo = std::numeric_limits<double>::infinity();
        double vhi = -vlo;
        for (int i = lo; i < hi; ++i) {
            vlo = std::min(vlo, a[static_cast<size_t>(i)]);
            vhi = std::max(vhi, a[static_cast<size_t>(i)]);
        }
        lo_part[static_cast<size_t>(t)] = vlo;
        hi_part[static_cast<size_t>(t)] = vhi;
    }
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (size_t t = 0; t < lo_part.size(); ++t) {
        lo = std::min(lo, lo_part[t]);
        hi = std::max(hi, hi_part[t]);
    }
    return {lo, hi};
}

void bernoulli_eval_omp(std::span<const double> x, std::span<double> out, int threads) {
    if (threads <= 1) {
        bernoulli_eval_serial(x, out);
        return;
    }
    const int n = static_cast<int>(x.size());
#pragma omp parallel for num_threads(threads) schedule(static)
    for (int i = 0; i < n; ++i) out[static_cast<size_t>(i)] = bernoulli(x[static_cast<size_t>(i)]);
}

#else

double sum_omp(std::span<const double> a, int) { return sum_serial(a); }
double dot_omp(std::span<const double> a, std::span<const double> b, int) { return dot_serial(a, b); }
double sum_sq_omp(std::span<const double> a, int) { return sum_sq_serial(a); }
std::pair<double, double> minmax_omp(std::span<const double> a, int) { return minmax_serial(a); }
void bernoulli_eval_omp(std::span<const double> x, std::span<double> out, int) {
    bernoulli_eval_serial(x, out);
}

#endif  // _OPENMP

double sum(std::span<const double> a, const ExecPolicy& exec) {
    return exec.threads > 1 ? sum_omp(a, exec.threads) : sum_serial(a);
}

double dot(std::span<const double> a, std::span<const double> b, const ExecPolicy& exec) {
    return exec.threads > 1 ? dot_omp(a, b, exec.threads) : dot_serial(a, b);
}

double sum_sq(std::span<const double> a, const ExecPolicy& exec) {
    return exec.threads > 1 ? sum_sq_omp(a, exec.threads) : sum_sq_serial(a);
}

std::pair<double, double> minmax(std::span<const double> a, const ExecPolicy& exec) {
    return exec.threads > 1 ? minmax_omp(a, exec.threads) : minmax_serial(a);
}

void bernoulli_eval(std::span<const double> x, std::span<double> out, const ExecPolicy& exec) {
    if (exec.threads > 1)
        bernoulli_eval_omp(x, out, exec.threads);
    else
        bernoulli_eval_serial(x, out);
}

}  // namespace spindd::kernels

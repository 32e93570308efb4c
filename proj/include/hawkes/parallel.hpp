#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace hawkes {

// Every data-parallel kernel takes an ExecPolicy.  Serial is the reference
// implementation; Parallel must produce bit-identical results (independent
// work items written to preallocated slots, reduced in fixed order).
enum class ExecPolicy { Serial, Parallel };

// Apply fn(i) for i in [0, n).  Work items must be independent.
template <typename Fn>
void parallel_for(std::size_t n, ExecPolicy policy, Fn&& fn) {
    if (policy == ExecPolicy::Parallel) {
#pragma omp parallel for schedule(dynamic, 16)
        for (long long i = 0; i < static_cast<long long>(n); ++i)
            fn(static_cast<std::size_t>(i));
    } else {
        for (std::size_t i = 0; i < n; ++i) fn(i);
    }
}

// Pairwise (tree-order) summation: deterministic for a given length and more
// accurate than naive left-to-right.  Used for all Monte Carlo reductions.
inline double pairwise_sum(std::span<const double> x) {
    const std::size_t n = x.size();
    if (n == 0) return 0.0;
    if (n <= 8) {
        double s = 0.0;
        for (double v : x) s += v;
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(x.first(half)) + pairwise_sum(x.subspan(half));
}

inline double pairwise_mean(std::span<const double> x) {
    return x.empty() ? 0.0 : pairwise_sum(x) / static_cast<double>(x.size());
}

// Mean and standard error of the mean, reduced in deterministic order.
struct MeanSE {
    double mean = 0.0;
    double se = 0.0;
};

inline MeanSE mean_and_se(std::span<const double> x) {
    MeanSE out;
    const std::size_t n = x.size();
    if (n == 0) return out;
    out.mean = pairwise_mean(x);
    if (n < 2) return out;
    std::vector<double> sq(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double d = x[i] - out.mean;
        sq[i] = d * d;
    }
    const double var = pairwise_sum(sq) / static_cast<double>(n - 1);
    out.se = std::sqrt(var / static_cast<double>(n));
    return out;
}

}  // namespace hawkes

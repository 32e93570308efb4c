#pragma once

#include <functional>
#include <span>

namespace hawkes {

// One-sample Kolmogorov-Smirnov distance against a continuous CDF.
// The sample must be sorted ascending.
double ks_statistic(std::span<const double> sorted_sample,
                    const std::function<double(double)>& cdf);

// Two-sample KS distance; both samples sorted ascending.
double ks_two_sample_statistic(std::span<const double> a,
                               std::span<const double> b);

// Complement of the Kolmogorov distribution: Q(x) = 2 Σ_{k>=1} (-1)^{k-1} e^{-2k²x²}.
double kolmogorov_q(double x);

// Asymptotic p-values.
double ks_p_value(double d, std::size_t n);
double ks_two_sample_p_value(double d, std::size_t n, std::size_t m);

}  // namespace hawkes

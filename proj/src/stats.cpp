#include "hawkes/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hawkes {

double ks_statistic(std::span<const double> sorted_sample,
                    const std::function<double(double)>& cdf) {
    const std::size_t n = sorted_sample.size();
    if (n == 0) throw std::invalid_argument("ks_statistic: empty sample");
    double d = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double F = cdf(sorted_sample[i]);
        const double lo = static_cast<double>(i) / n;
        const double hi = static_cast<double>(i + 1) / n;
        d = std::max({d, std::abs(F - lo), std::abs(hi - F)});
    }
    return d;
}

double ks_two_sample_statistic(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty())
        throw std::invalid_argument("ks_two_sample_statistic: empty sample");
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        if (a[i] <= b[j])
            ++i;
        else
            ++j;
        const double fa = static_cast<double>(i) / a.size();
        const double fb = static_cast<double>(j) / b.size();
        d = std::max(d, std::abs(fa - fb));
    }
    return d;
}

double kolmogorov_q(double x) {
    if (x <= 0.0) return 1.0;
    double sum = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * x * x);
        sum += (k % 2 == 1) ? term : -term;
        if (term < 1e-16) break;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

double ks_p_value(double d, std::size_t n) {
    const double rn = std::sqrt(static_cast<double>(n));
    // Stephens' small-sample refinement of the asymptotic distribution.
    return kolmogorov_q((rn + 0.12 + 0.11 / rn) * d);
}

double ks_two_sample_p_value(double d, std::size_t n, std::size_t m) {
    const double ne = static_cast<double>(n) * m / static_cast<double>(n + m);
    const double rn = std::sqrt(ne);
    return kolmogorov_q((rn + 0.12 + 0.11 / rn) * d);
}

}  // namespace hawkes

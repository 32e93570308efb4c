#pragma once

#include <span>
#include <vector>

namespace hawkes {

// Trapezoid-rule causal convolution of two sampled functions on the same
// uniform grid: out[i] ~ ∫_0^{i·step} f(i·step - s) g(s) ds.  FFT-backed,
// O(n log n); out has the size of the inputs (the tail beyond the grid is
// dropped, which is exact for causal use).
std::vector<double> convolve_trapezoid(std::span<const double> f,
                                       std::span<const double> g, double step);

}  // namespace hawkes

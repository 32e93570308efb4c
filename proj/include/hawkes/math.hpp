#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <span>
#include <vector>

namespace hawkes {

inline constexpr double pi = 3.14159265358979323846;

namespace detail {
// 15-point Gauss-Legendre nodes/weights on [-1,1] (positive half; mirror).
inline constexpr std::array<double, 8> gl15_x = {
    0.0,
    0.2011940939974345,
    0.3941513470775634,
    0.5709721726085388,
    0.7244177313601701,
    0.8482065834104272,
    0.9372733924007060,
    0.9879925180204854,
};
inline constexpr std::array<double, 8> gl15_w = {
    0.2025782419255613,
    0.1984314853271116,
    0.1861610000155622,
    0.1662692058169939,
    0.1395706779261543,
    0.1071592204671719,
    0.0703660474881081,
    0.0307532419961173,
};
}  // namespace detail

template <typename F>
auto integrate_gl15(F&& f, double a, double b) -> decltype(f(a)) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    auto acc = detail::gl15_w[0] * f(mid);
    for (int i = 1; i < 8; ++i) {
        const double dx = half * detail::gl15_x[i];
        acc += detail::gl15_w[i] * (f(mid + dx) + f(mid - dx));
    }
    return half * acc;
}

template <typename F>
auto integrate_gl15_panels(F&& f, double a, double b, int panels) -> decltype(f(a)) {
    const double w = (b - a) / panels;
    auto acc = integrate_gl15(f, a, a + w);
    for (int k = 1; k < panels; ++k)
        acc += integrate_gl15(f, a + k * w, a + (k + 1) * w);
    return acc;
}

// Geometrically graded GL15 panels between a > 0 and b; resolves integrands
// whose natural scale is logarithmic (power-law factors, sharp low-z peaks).
template <typename F>
auto integrate_log_panels(F&& f, double a, double b, int panels_per_decade = 4)
    -> decltype(f(a)) {
    const double decades = std::log10(b / a);
    const int n = std::max(1, static_cast<int>(std::ceil(decades * panels_per_decade)));
    const double ratio = std::pow(b / a, 1.0 / n);
    double lo = a;
    auto acc = decltype(f(a)){};
    for (int k = 0; k < n; ++k) {
        const double hi = (k + 1 == n) ? b : lo * ratio;
        acc += integrate_gl15(f, lo, hi);
        lo = hi;
    }
    return acc;
}

namespace detail {
template <typename F, typename T>
T adaptive_simpson_step(F& f, double a, double b, T fa, T fm, T fb, T whole,
                        double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const T flm = f(lm), frm = f(rm);
    const T left = (b - a) / 12.0 * (fa + 4.0 * flm + fm);
    const T right = (b - a) / 12.0 * (fm + 4.0 * frm + fb);
    const T delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adaptive_simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}
}  // namespace detail

template <typename F>
auto integrate_adaptive(F&& f, double a, double b, double tol, int max_depth = 40)
    -> decltype(f(a)) {
    using T = decltype(f(a));
    if (a == b) return T{};
    const T fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const T whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::adaptive_simpson_step(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

// ∫_0^∞ e^{-rate·w} (offset + i·w)^{-s} dw,  s > 1, offset > 0, rate >= 0.
// This is the generic damped tail integral obtained by rotating an oscillatory
// ∫_offset^∞ t^{-s} e^{i·rate·t} dt onto the upper imaginary axis; the rotated
// integrand decays monotonically, so graded panels nail it.
std::complex<double> damped_power_integral(double s, double rate, double offset,
                                           double tol = 1e-13);

// ∫_Z^∞ z^{-s} cos(beta·z) dz for s > 1, Z > 0 (beta = 0 allowed).
double tail_cos_integral(double s, double beta, double Z);

// Linear interpolation on a uniform grid v[i] = value at i*step, clamped at the
// right edge (caller checks horizons).
double lerp_uniform(std::span<const double> v, double step, double x);

std::vector<double> linspace(double a, double b, int n);
std::vector<double> log_spaced(double a, double b, int n);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};
LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

// Piecewise-linear Filon rule: ∫ f(z) cos(z·tau) dz over [z.front(), z.back()],
// with f linear between nodes.  The cosine factor is integrated exactly, so
// accuracy depends only on how well the nodes resolve f, not on tau.
double filon_cos(std::span<const double> z, std::span<const double> f, double tau);

}  // namespace hawkes

#include "hawkes/math.hpp"

#include <algorithm>
#include <stdexcept>

namespace hawkes {

std::complex<double> damped_power_integral(double s, double rate, double offset,
                                           double tol) {
    // undamped integrands need the algebraic factor for convergence
    if (rate <= 0.0 && s <= 1.0)
        throw std::invalid_argument("damped_power_integral: need s > 1 when rate == 0");
    if (offset <= 0.0) throw std::invalid_argument("damped_power_integral: need offset > 0");
    if (rate < 0.0) throw std::invalid_argument("damped_power_integral: need rate >= 0");

    const auto f = [&](double w) {
        return std::exp(-rate * w) * std::pow(std::complex<double>(offset, w), -s);
    };

    // Truncate where either the exponential or the algebraic factor kills the
    // tail: |tail| <= min(e^{-rate W}/(rate ...), W^{1-s}/(s-1)).
    const double scale = std::pow(offset, -s);  // integrand magnitude at w=0
    double w_alg = s > 1.0 ? std::pow(tol * scale * (s - 1.0), 1.0 / (1.0 - s))
                           : std::numeric_limits<double>::infinity();
    double w_exp = rate > 0.0 ? 50.0 / rate : std::numeric_limits<double>::infinity();
    double W = std::min(w_alg, w_exp);
    W = std::max(W, 4.0 * offset);  // always cover the corner region

    // Graded panels: linear resolution near 0 up to ~offset, log panels beyond.
    const double knee = offset;
    std::complex<double> acc = integrate_gl15_panels(f, 0.0, knee, 4);
    acc += integrate_log_panels(f, knee, W, 6);
    return acc;
}

double tail_cos_integral(double s, double beta, double Z) {
    if (s <= 1.0 || Z <= 0.0)
        throw std::invalid_argument("tail_cos_integral: need s > 1, Z > 0");
    if (beta == 0.0) return std::pow(Z, 1.0 - s) / (s - 1.0);
    // ∫_Z^∞ z^{-s} e^{iβz} dz  =  i e^{iβZ} ∫_0^∞ e^{-βw} (Z+iw)^{-s} dw
    const std::complex<double> rot =
        std::complex<double>(0.0, 1.0) *
        std::exp(std::complex<double>(0.0, beta * Z)) *
        damped_power_integral(s, beta, Z);
    return rot.real();
}

double lerp_uniform(std::span<const double> v, double step, double x) {
    if (v.empty()) throw std::invalid_argument("lerp_uniform: empty grid");
    if (x <= 0.0) return v.front();
    const double pos = x / step;
    const auto i = static_cast<std::size_t>(pos);
    if (i + 1 >= v.size()) return v.back();
    const double frac = pos - static_cast<double>(i);
    return v[i] + frac * (v[i + 1] - v[i]);
}

std::vector<double> linspace(double a, double b, int n) {
    if (n < 2) return {a};
    std::vector<double> out(n);
    const double d = (b - a) / (n - 1);
    for (int i = 0; i < n; ++i) out[i] = a + i * d;
    out.back() = b;
    return out;
}

std::vector<double> log_spaced(double a, double b, int n) {
    if (a <= 0.0 || b <= a) throw std::invalid_argument("log_spaced: need 0 < a < b");
    if (n < 2) return {a};
    std::vector<double> out(n);
    const double r = std::pow(b / a, 1.0 / (n - 1));
    double v = a;
    for (int i = 0; i < n; ++i, v *= r) out[i] = v;
    out.back() = b;
    return out;
}

LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("linear_fit: need >= 2 matching points");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx, dy = y[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx == 0.0) throw std::invalid_argument("linear_fit: degenerate abscissae");
    LinearFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    return fit;
}

double filon_cos(std::span<const double> z, std::span<const double> f, double tau) {
    if (z.size() != f.size() || z.size() < 2)
        throw std::invalid_argument("filon_cos: need >= 2 matching nodes");
    double acc = 0.0;
    for (std::size_t k = 0; k + 1 < z.size(); ++k) {
        const double z0 = z[k], z1 = z[k + 1], dz = z1 - z0;
        if (dz <= 0.0) throw std::invalid_argument("filon_cos: nodes must increase");
        const double f0 = f[k], f1 = f[k + 1];
        const double theta = std::abs(tau) * dz;
        if (theta < 1e-2) {
            // Oscillation unresolved within the panel; Simpson on f·cos is
            // exact enough (error O(theta^4) relative).
            const double zm = 0.5 * (z0 + z1);
            acc += dz / 6.0 *
                   (f0 * std::cos(tau * z0) + 4.0 * 0.5 * (f0 + f1) * std::cos(tau * zm) +
                    f1 * std::cos(tau * z1));
        } else {
            // Exact integral of (f0 + m(z-z0)) cos(tau z).
            const double m = (f1 - f0) / dz;
            const double s0 = std::sin(tau * z0), s1 = std::sin(tau * z1);
            const double c0 = std::cos(tau * z0), c1 = std::cos(tau * z1);
            acc += f0 * (s1 - s0) / tau +
                   m * (dz * s1 / tau + (c1 - c0) / (tau * tau));
        }
    }
    return acc;
}

}  // namespace hawkes

#include "hawkes/resolvent.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hawkes/errors.hpp"
#include "hawkes/fft.hpp"
#include "hawkes/math.hpp"

namespace hawkes {

namespace {

std::vector<double> sample_kernel(const KernelSpec& spec, double step, std::size_t n) {
    std::vector<double> phi(n);
    for (std::size_t i = 0; i < n; ++i) phi[i] = spec(static_cast<double>(i) * step);
    return phi;
}

void fit_resolvent_tail(ResolventGrid& g) {
    const std::size_t n = g.values.size();
    const double t_end = g.horizon;
    std::size_t lo = 0;
    while (lo < n && static_cast<double>(lo) * g.step < 0.1 * t_end) ++lo;
    g.tail_amplitude = 0.0;
    g.tail_rate_or_exponent = 0.0;
    if (g.source.family() == KernelFamily::Exponential) {
        // log-linear fit: ψ ~ amp e^{-rate t}
        std::vector<double> xs, ys;
        for (std::size_t i = lo; i < n; ++i)
            if (g.values[i] > 0.0) {
                xs.push_back(static_cast<double>(i) * g.step);
                ys.push_back(std::log(g.values[i]));
            }
        if (xs.size() >= 5) {
            const LinearFit f = linear_fit(xs, ys);
            if (f.slope < 0.0) {
                g.tail_rate_or_exponent = -f.slope;
                g.tail_amplitude = std::exp(f.intercept);
            }
        }
    } else {
        // power-law tail with the kernel's own exponent; amplitude anchored at
        // the grid edge
        const double alpha = g.source.tail_exponent();
        if (alpha > 0.0 && g.values.back() > 0.0) {
            g.tail_rate_or_exponent = alpha;
            g.tail_amplitude = g.values.back() * std::pow(t_end, 1.0 + alpha);
        }
    }
}

}  // namespace

double ResolventGrid::operator()(double t) const {
    if (t < 0.0) throw std::domain_error("resolvent: negative time");
    if (t <= horizon) return lerp_uniform(values, step, t);
    if (tail_amplitude <= 0.0) return 0.0;
    if (source.family() == KernelFamily::Exponential)
        return tail_amplitude * std::exp(-tail_rate_or_exponent * t);
    return tail_amplitude * std::pow(t, -1.0 - tail_rate_or_exponent);
}

double ResolventGrid::total_mass() const {
    const double a = source.norm();
    return a / (1.0 - a);
}

double ResolventGrid::cumulative_to(double x) const {
    if (x < 0.0) throw std::domain_error("resolvent: negative time");
    if (x >= horizon) return cumulative.back();
    return lerp_uniform(cumulative, step, x);
}

double ResolventGrid::tail_integral(double x) const {
    if (x < 0.0) throw std::domain_error("resolvent: negative time");
    if (x <= horizon) {
        // exact total mass minus the gridded head; no tail model involved
        return total_mass() - cumulative_to(x);
    }
    if (tail_amplitude <= 0.0) return 0.0;
    if (source.family() == KernelFamily::Exponential)
        return tail_amplitude * std::exp(-tail_rate_or_exponent * x) / tail_rate_or_exponent;
    const double alpha = tail_rate_or_exponent;
    return tail_amplitude * std::pow(x, -alpha) / alpha;
}

ResolventGrid compute_resolvent(const KernelSpec& spec, double step, double horizon) {
    if (!(step > 0.0) || !(horizon > step))
        throw config_error("resolvent: need 0 < step < horizon");
    const double a = spec.norm();
    if (a >= 1.0)
        throw criticality_error("resolvent: branching ratio >= 1, Neumann series diverges");

    const auto n = static_cast<std::size_t>(std::floor(horizon / step)) + 1;
    ResolventGrid g;
    g.step = step;
    g.horizon = static_cast<double>(n - 1) * step;
    g.source = spec;

    const std::vector<double> phi = sample_kernel(spec, step, n);
    if (a == 0.0) {
        g.values.assign(n, 0.0);
        g.cumulative.assign(n, 0.0);
        return g;
    }

    // Fixed-point iteration ψ <- φ + φ∗ψ.  Monotone increasing from ψ=φ;
    // stop when the sup-norm update drops below tol.  The update after k
    // steps is φ^{*(k+2)}, so the iteration count scales like log(tol)/log(a).
    const double tol = 1e-10;
    const int max_iter =
        200 + static_cast<int>(std::ceil(std::log(tol) / std::log(std::max(a, 0.1))));
    std::vector<double> psi = phi;
    double delta = 0.0;
    bool converged = false;
    for (int it = 0; it < max_iter; ++it) {
        std::vector<double> conv = convolve_trapezoid(phi, psi, step);
        delta = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double next = phi[i] + conv[i];
            delta = std::max(delta, std::abs(next - psi[i]));
            psi[i] = next;
        }
        if (delta < tol) {
            converged = true;
            break;
        }
    }
    if (!converged)
        throw numerical_error("resolvent: fixed point not converged, last update " +
                              std::to_string(delta));

    g.values = std::move(psi);
    g.cumulative.resize(n);
    g.cumulative[0] = 0.0;
    for (std::size_t i = 1; i < n; ++i)
        g.cumulative[i] =
            g.cumulative[i - 1] + 0.5 * (g.values[i] + g.values[i - 1]) * step;

    g.horizon_warning = (g.total_mass() - g.cumulative.back()) > 0.01 * g.total_mass();
    fit_resolvent_tail(g);
    return g;
}

double PropagatorKernel::operator()(double x) const {
    if (x < 0.0) throw std::domain_error("propagator: negative age");
    if (source) return zeta0 * (1.0 - source->integral_to(x));
    if (x > horizon)
        throw horizon_error("propagator: age " + std::to_string(x) +
                            " beyond grid horizon " + std::to_string(horizon));
    return lerp_uniform(values, step, x);
}

double PropagatorKernel::integral_to(double x) const {
    if (x < 0.0) throw std::domain_error("propagator: negative age");
    if (source) {
        // ζ(0)·(x - ∫_0^x ∫_0^u φ) with the inner integral in closed form
        const KernelSpec& k = *source;
        const double a = k.norm();
        double iint = 0.0;  // ∫_0^x ∫_0^u φ(s) ds du
        switch (k.family()) {
            case KernelFamily::Exponential:
                iint = a * (x - (1.0 - std::exp(-k.rate() * x)) / k.rate());
                break;
            case KernelFamily::ShiftedPowerLaw: {
                const double c = k.scale(), al = k.tail_exponent();
                iint = a * (x - c * (std::pow(1.0 + x / c, 1.0 - al) - 1.0) / (1.0 - al));
                break;
            }
            case KernelFamily::Tabulated: {
                // numeric fallback: the tabulated family has no closed form
                const auto f = [&](double u) { return k.integral_to(u); };
                iint = integrate_adaptive(f, 0.0, x, 1e-12 * std::max(x, 1.0));
                break;
            }
        }
        return zeta0 * (x - iint);
    }
    // grid route: trapezoid within the grid, flat ζ_∞ extension beyond
    const double xg = std::min(x, horizon);
    const auto i = static_cast<std::size_t>(xg / step);
    double acc = 0.0;
    for (std::size_t k = 1; k <= i && k < values.size(); ++k)
        acc += 0.5 * (values[k] + values[k - 1]) * step;
    const double t_i = static_cast<double>(std::min(i, values.size() - 1)) * step;
    if (xg > t_i && i + 1 < values.size()) {
        const double za = lerp_uniform(values, step, t_i);
        const double zb = lerp_uniform(values, step, xg);
        acc += 0.5 * (za + zb) * (xg - t_i);
    }
    if (x > horizon) acc += zeta_inf * (x - horizon);
    return acc;
}

PropagatorKernel propagator_from_resolvent(const ResolventGrid& psi, double kappa,
                                           double order_volume) {
    if (!(kappa > 0.0) || !(order_volume > 0.0))
        throw config_error("propagator: kappa and order volume must be > 0");
    const std::size_t n = psi.values.size();
    const double kv = kappa * order_volume;

    // Ψ̄ on the grid via the exact-mass identity, then one convolution.
    std::vector<double> psibar(n);
    const double total = psi.total_mass();
    for (std::size_t i = 0; i < n; ++i) psibar[i] = total - psi.cumulative[i];
    const std::vector<double> phi = [&] {
        std::vector<double> v(n);
        for (std::size_t i = 0; i < n; ++i)
            v[i] = psi.source(static_cast<double>(i) * psi.step);
        return v;
    }();
    const std::vector<double> conv = convolve_trapezoid(phi, psibar, psi.step);

    PropagatorKernel z;
    z.step = psi.step;
    z.horizon = psi.horizon;
    z.kappa = kappa;
    z.order_volume = order_volume;
    z.values.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        z.values[i] = kv * (1.0 + psibar[i] - conv[i]);
    z.zeta0 = kv * (1.0 + total);  // = κv/(1-a)
    z.zeta_inf = kv;
    z.accuracy_warning = psi.horizon_warning;
    return z;
}

PropagatorKernel propagator_closed_form(const KernelSpec& spec, double kappa,
                                        double order_volume, double step, double horizon,
                                        std::optional<double> zeta0_at_criticality) {
    if (!(kappa > 0.0) || !(order_volume > 0.0))
        throw config_error("propagator: kappa and order volume must be > 0");
    if (!(step > 0.0) || !(horizon > step))
        throw config_error("propagator: need 0 < step < horizon");
    const double a = spec.norm();
    if (a > 1.0)
        throw criticality_error("propagator: branching ratio > 1 has no propagator form");

    PropagatorKernel z;
    z.step = step;
    z.kappa = kappa;
    z.order_volume = order_volume;
    if (a < 1.0) {
        z.zeta0 = kappa * order_volume / (1.0 - a);
    } else {
        if (!zeta0_at_criticality)
            throw config_error(
                "propagator: critical kernel needs an explicit zeta(0) prefactor");
        z.zeta0 = *zeta0_at_criticality;
    }
    z.source = spec;
    z.zeta_inf = z.zeta0 * (1.0 - a);

    const auto n = static_cast<std::size_t>(std::floor(horizon / step)) + 1;
    z.horizon = static_cast<double>(n - 1) * step;
    z.values.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        z.values[i] = z.zeta0 * (1.0 - spec.integral_to(static_cast<double>(i) * step));
    return z;
}

IdentityResidual check_martingale_identity(const PropagatorKernel& zeta,
                                           const KernelSpec& spec) {
    const std::size_t n = zeta.values.size();
    if (n < 2) throw config_error("identity check: degenerate grid");
    IdentityResidual r;
    r.scale = zeta.zeta0;
    double sumsq = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double mid = (static_cast<double>(i) + 0.5) * zeta.step;
        const double deriv = (zeta.values[i + 1] - zeta.values[i]) / zeta.step;
        const double res = deriv + zeta.zeta0 * spec(mid);
        r.max_abs = std::max(r.max_abs, std::abs(res));
        sumsq += res * res;
    }
    r.rms = std::sqrt(sumsq / static_cast<double>(n - 1));
    return r;
}

}  // namespace hawkes

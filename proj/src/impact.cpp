#include "hawkes/impact.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "hawkes/errors.hpp"
#include "hawkes/math.hpp"
#include "hawkes/price.hpp"

namespace hawkes {

namespace {

// ∫_{x1}^{x2} (∫_s^∞ φ) ds in cancellation-free form.  MI at large t is a
// difference of two huge cumulative integrals of ζ; routing it through this
// window integral keeps full relative precision out to t ~ 10^15.
// ∫_{x1}^{x1+len} (tail mass of φ beyond s) ds.  The window length is passed
// separately because at huge x1 the difference (x1+len) - x1 rounds to zero
// while the integral itself does not.
double kernel_tail_window(const KernelSpec& spec, double x1, double len) {
    const double a = spec.norm();
    switch (spec.family()) {
        case KernelFamily::Exponential: {
            const double b = spec.rate();
            return a / b * std::exp(-b * x1) * (-std::expm1(-b * len));
        }
        case KernelFamily::ShiftedPowerLaw: {
            const double al = spec.tail_exponent(), c = spec.scale();
            const double base = std::pow(x1 + c, 1.0 - al);
            return a * std::pow(c, al) * base *
                   std::expm1((1.0 - al) * std::log1p(len / (x1 + c))) / (1.0 - al);
        }
        case KernelFamily::Tabulated:
            if (x1 + len == x1)  // window too narrow to resolve in the abscissa
                return len * spec.tail_integral(x1);
            return integrate_adaptive([&](double s) { return spec.tail_integral(s); },
                                      x1, x1 + len, 1e-12 * (1.0 + a * len));
    }
    return 0.0;
}

}  // namespace

double expected_impact(const PropagatorKernel& zeta, double rate, double duration,
                       double t) {
    if (rate < 0.0 || duration < 0.0)
        throw config_error("metaorder rate and duration must be nonnegative");
    if (t <= 0.0 || rate == 0.0 || duration == 0.0) return 0.0;

    const double len = std::min(duration, t);
    const double lo = std::max(0.0, t - duration);
    if (zeta.source) {
        // ζ(x) = ζ_∞ + ζ(0)·∫_x^∞ φ, so the window integral splits into the
        // permanent part and a kernel tail window.
        return rate *
               (zeta.zeta_inf * len + zeta.zeta0 * kernel_tail_window(*zeta.source, lo, len));
    }
    return rate * (zeta.integral_to(t) - zeta.integral_to(lo));
}

ImpactCurve impact_analytic(const PropagatorKernel& zeta, double rate, double duration,
                            std::span<const double> grid) {
    ImpactCurve curve;
    curve.rate = rate;
    curve.duration = duration;
    curve.provenance = "analytic";
    curve.times.assign(grid.begin(), grid.end());
    curve.values.reserve(grid.size());
    for (double t : grid)
        curve.values.push_back(expected_impact(zeta, rate, duration, t));
    return curve;
}

double permanent_impact_limit(const PropagatorKernel& zeta, double rate,
                              double duration) {
    return zeta.kappa * zeta.order_volume * rate * duration;
}

ImpactCurve impact_monte_carlo(const MarketConfig& cfg, const PropagatorKernel& zeta,
                               std::span<const double> grid, std::size_t n_paths,
                               ExecPolicy policy, bool antithetic) {
    const std::size_t g = grid.size();
    std::vector<double> slots(n_paths * g);

    parallel_for(n_paths, policy, [&](std::size_t r) {
        MarketConfig local = cfg;
        local.seed = substream_seed(cfg.seed, 202, r);
        MarketPaths paths = simulate_market(local);

        auto flip = [](EventStream s, Side side) {
            s.side = side;
            return s;
        };
        EventStream buys = total_flow(paths, Side::Buy);
        EventStream sells = total_flow(paths, Side::Sell);

        for (std::size_t k = 0; k < g; ++k) {
            double dp = propagator_price_at(zeta, buys, sells, grid[k]);
            if (antithetic) {
                MarketPaths sw{flip(paths.sell, Side::Buy), flip(paths.buy, Side::Sell),
                               paths.metaorder};
                dp = 0.5 * (dp + propagator_price_at(zeta, total_flow(sw, Side::Buy),
                                                     total_flow(sw, Side::Sell),
                                                     grid[k]));
            }
            slots[r * g + k] = dp;
        }
    });

    ImpactCurve curve;
    curve.rate = cfg.metaorder.rate;
    curve.duration = cfg.metaorder.duration;
    curve.provenance = "monte-carlo";
    curve.times.assign(grid.begin(), grid.end());
    curve.values.resize(g);
    curve.se.resize(g);
    std::vector<double> column(n_paths);
    for (std::size_t k = 0; k < g; ++k) {
        for (std::size_t r = 0; r < n_paths; ++r) column[r] = slots[r * g + k];
        auto [mean, se] = mean_and_se(column);
        curve.values[k] = mean;
        curve.se[k] = se;
    }
    return curve;
}

ImpactCurve renormalize_impact(const ImpactCurve& curve, double a_T, double tau_T,
                               double alpha) {
    if (tau_T <= 0.0) throw config_error("rescaling needs τ^T > 0");
    const double pref = (1.0 - a_T) / std::pow(tau_T, 1.0 - alpha);
    ImpactCurve out = curve;
    out.provenance = "rescaled";
    out.a_T = a_T;
    out.tau_T = tau_T;
    out.alpha = alpha;
    for (auto& t : out.times) t /= tau_T;
    for (auto& v : out.values) v *= pref;
    for (auto& e : out.se) e *= pref;
    return out;
}

double rescaled_impact_limit(double t, double alpha, double scale_c, double kappa,
                             double order_volume, double rate) {
    return std::pow(scale_c, alpha) * kappa * order_volume * rate / (1.0 - alpha) *
           std::pow(t, 1.0 - alpha);
}

PowerLawFit fit_power_law(const ImpactCurve& curve, double t_min, double t_max) {
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < curve.times.size(); ++i) {
        const double t = curve.times[i];
        if (t < t_min || t > t_max) continue;
        if (curve.values[i] <= 0.0)
            throw std::domain_error("power-law fit window contains nonpositive values");
        lx.push_back(std::log(t));
        ly.push_back(std::log(curve.values[i]));
    }
    if (lx.size() < 2)
        throw std::domain_error("power-law fit window holds fewer than two points");
    const LinearFit f = linear_fit(lx, ly);
    return {f.slope, std::exp(f.intercept), f.r_squared, lx.size()};
}

double exponent_link(double gamma) {
    if (gamma <= 0.0 || gamma >= 1.0)
        throw std::domain_error("memory exponent must lie in (0,1)");
    return 0.5 * (1.0 + gamma);
}

double exponent_link_inverse(double nu) {
    if (nu <= 0.5 || nu >= 1.0)
        throw std::domain_error("impact exponent must lie in (1/2,1)");
    return 2.0 * nu - 1.0;
}

RescaledConvergence rescaled_impact_convergence(const KernelSpec& base,
                                                std::span<const double> a_sequence,
                                                double kappa, double order_volume,
                                                double rate,
                                                std::span<const double> unit_grid,
                                                double fit_min, double fit_max) {
    if (base.family() != KernelFamily::ShiftedPowerLaw ||
        std::abs(base.norm() - 1.0) > 1e-9)
        throw config_error(
            "rescaled-impact study needs a unit-mass shifted-power-law base kernel");
    const double alpha = base.tail_exponent();
    const double c = base.scale();
    const double u_max = *std::max_element(unit_grid.begin(), unit_grid.end());

    RescaledConvergence res;
    for (double a_T : a_sequence) {
        if (a_T <= 0.0 || a_T >= 1.0)
            throw config_error("a_T must lie in (0,1) for the rescaled-impact study");
        const double tau_T = std::pow(1.0 - a_T, -1.0 / (2.0 * alpha));
        KernelSpec spec_T = KernelSpec::shifted_power_law(a_T, alpha, c);
        const double horizon = 1.05 * tau_T * std::max(1.0, u_max);
        PropagatorKernel zeta = propagator_closed_form(spec_T, kappa, order_volume,
                                                       horizon / 4096.0, horizon);

        std::vector<double> t_abs(unit_grid.size());
        for (std::size_t i = 0; i < unit_grid.size(); ++i) t_abs[i] = unit_grid[i] * tau_T;
        ImpactCurve mi = impact_analytic(zeta, rate, tau_T, t_abs);
        ImpactCurve rmi = renormalize_impact(mi, a_T, tau_T, alpha);

        double sup = 0.0;
        for (std::size_t i = 0; i < rmi.times.size(); ++i) {
            const double lim = rescaled_impact_limit(rmi.times[i], alpha, c, kappa,
                                                     order_volume, rate);
            sup = std::max(sup, std::abs(rmi.values[i] - lim));
        }

        res.a_sequence.push_back(a_T);
        res.tau_sequence.push_back(tau_T);
        res.sup_distance.push_back(sup);
        res.fits.push_back(fit_power_law(rmi, fit_min, fit_max));
        res.curves.push_back(std::move(rmi));
    }
    return res;
}

double max_convexity_violation(const ImpactCurve& curve) {
    if (curve.times.size() < 3)
        throw std::domain_error("second-difference check needs at least three points");
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i + 1 < curve.times.size(); ++i) {
        const double h1 = curve.times[i] - curve.times[i - 1];
        const double h2 = curve.times[i + 1] - curve.times[i];
        const double d2 = 2.0 *
                          ((curve.values[i + 1] - curve.values[i]) / h2 -
                           (curve.values[i] - curve.values[i - 1]) / h1) /
                          (h1 + h2);
        worst = std::max(worst, d2);
    }
    return worst;
}

}  // namespace hawkes

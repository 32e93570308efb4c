#include "hawkes/price.hpp"

#include <algorithm>
#include <cmath>

#include "hawkes/errors.hpp"
#include "hawkes/math.hpp"

namespace hawkes {

namespace {

double signed_response_sum(const PropagatorKernel& zeta, const EventStream& s,
                           double t) {
    auto end = std::upper_bound(s.times.begin(), s.times.end(), t);
    double acc = 0.0;
    for (auto it = s.times.begin(); it != end; ++it) acc += zeta(t - *it);
    return acc;
}

// Ψ̄(y) = ∫_y^∞ ψ: closed form for exponential kernels, resolvent grid else.
class TailMass {
public:
    TailMass(const KernelSpec& spec, const ResolventGrid* grid) : grid_(grid) {
        if (spec.family() == KernelFamily::Exponential) {
            const double a = spec.branching_ratio();
            coef_ = a / (1.0 - a);
            rate_ = spec.rate() * (1.0 - a);
            closed_ = true;
        } else if (grid == nullptr) {
            throw config_error(
                "anticipation price needs a computed resolvent for "
                "non-exponential kernels");
        }
    }
    double operator()(double y) const {
        return closed_ ? coef_ * std::exp(-rate_ * y) : grid_->tail_integral(y);
    }

private:
    const ResolventGrid* grid_;
    bool closed_ = false;
    double coef_ = 0.0, rate_ = 0.0;
};

}  // namespace

double propagator_price_at(const PropagatorKernel& zeta, const EventStream& buys,
                           const EventStream& sells, double t, double p0) {
    return p0 + signed_response_sum(zeta, buys, t) - signed_response_sum(zeta, sells, t);
}

PricePath propagator_price(const PropagatorKernel& zeta, const EventStream& buys,
                           const EventStream& sells, std::span<const double> grid,
                           double p0) {
    PricePath path;
    path.p0 = p0;
    path.construction = "propagator";
    path.times.assign(grid.begin(), grid.end());
    path.values.reserve(grid.size());
    for (double t : grid)
        path.values.push_back(propagator_price_at(zeta, buys, sells, t, p0));
    return path;
}

double anticipation_price_at(const KernelSpec& spec, const ResolventGrid* psi,
                             double mu, double kappa, double order_volume,
                             const EventStream& buys, const EventStream& sells,
                             double t, double p0) {
    if (spec.norm() >= 1.0)
        throw criticality_error(
            "the anticipated long-run volume diverges for ∫φ ≥ 1; the "
            "martingale price construction needs a subcritical kernel");
    (void)mu;  // the baselines of the two sides cancel in λ^a − λ^b

    const TailMass psi_tail(spec, psi);

    auto count_to = [&](const EventStream& s) {
        return static_cast<double>(
            std::upper_bound(s.times.begin(), s.times.end(), t) - s.times.begin());
    };
    auto tail_sum = [&](const EventStream& s) {
        auto end = std::upper_bound(s.times.begin(), s.times.end(), t);
        double acc = 0.0;
        for (auto it = s.times.begin(); it != end; ++it) acc += psi_tail(t - *it);
        return acc;
    };

    // ∫_0^t Ψ̄(t−x)(λ^a_x − λ^b_x) dx: the excitation difference is smooth
    // between events, so integrate segment by segment between the merged event
    // times (Gauss-Legendre nodes are interior — no kernel evaluation at 0).
    std::vector<double> brk{0.0};
    for (const auto* s : {&buys, &sells}) {
        auto end = std::upper_bound(s->times.begin(), s->times.end(), t);
        brk.insert(brk.end(), s->times.begin(), end);
    }
    brk.push_back(t);
    std::sort(brk.begin(), brk.end());

    auto excitation_gap = [&](double x) {
        double acc = 0.0;
        for (double ti : buys.times) {
            if (ti >= x) break;
            acc += spec(x - ti);
        }
        for (double tj : sells.times) {
            if (tj >= x) break;
            acc -= spec(x - tj);
        }
        return acc;
    };

    double anticipation = 0.0;
    for (std::size_t k = 0; k + 1 < brk.size(); ++k) {
        if (brk[k + 1] - brk[k] <= 0.0) continue;
        anticipation += integrate_gl15(
            [&](double x) { return psi_tail(t - x) * excitation_gap(x); }, brk[k],
            brk[k + 1]);
    }

    const double kv = kappa * order_volume;
    return p0 + kv * (count_to(buys) - count_to(sells) + tail_sum(buys) -
                      tail_sum(sells) - anticipation);
}

PropagatorKernel constant_propagator(double level, double step, double horizon,
                                     double kappa, double order_volume) {
    if (step <= 0.0 || horizon <= 0.0)
        throw config_error("constant propagator needs positive step and horizon");
    PropagatorKernel z;
    z.step = step;
    z.horizon = horizon;
    z.values.assign(static_cast<std::size_t>(std::ceil(horizon / step)) + 1, level);
    z.zeta0 = level;
    z.zeta_inf = level;
    z.kappa = kappa;
    z.order_volume = order_volume;
    return z;
}

DriftStatistics martingale_drift_test(const MarketConfig& cfg,
                                      const PropagatorKernel& zeta, double t0, double h,
                                      std::size_t n_paths, ExecPolicy policy) {
    if (t0 <= 0.0 || h <= 0.0) throw config_error("drift test needs t0, h > 0");
    if (t0 + h > cfg.horizon)
        throw config_error("drift test window exceeds the simulation horizon");

    std::vector<double> raw(n_paths), weighted(n_paths);
    parallel_for(n_paths, policy, [&](std::size_t r) {
        MarketConfig local = cfg;
        local.seed = substream_seed(cfg.seed, 101, r);
        MarketPaths paths = simulate_market(local);
        EventStream buys = total_flow(paths, Side::Buy);
        EventStream sells = total_flow(paths, Side::Sell);

        const double dp = propagator_price_at(zeta, buys, sells, t0 + h) -
                          propagator_price_at(zeta, buys, sells, t0);
        const double imbalance = intensity_at(paths.buy, cfg.kernel, cfg.mu, t0) -
                                 intensity_at(paths.sell, cfg.kernel, cfg.mu, t0);
        raw[r] = dp;
        weighted[r] = imbalance * dp;
    });

    DriftStatistics st;
    st.n_paths = n_paths;
    st.t0 = t0;
    st.h = h;
    auto [m, se] = mean_and_se(raw);
    st.mean = m;
    st.se = se;
    st.studentized = se > 0.0 ? m / se : 0.0;
    auto [wm, wse] = mean_and_se(weighted);
    st.weighted_mean = wm;
    st.weighted_se = wse;
    st.weighted_studentized = wse > 0.0 ? wm / wse : 0.0;
    return st;
}

}  // namespace hawkes

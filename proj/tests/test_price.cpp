#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "hawkes/errors.hpp"
#include "hawkes/parallel.hpp"
#include "hawkes/price.hpp"
#include "hawkes/resolvent.hpp"
#include "hawkes/rng.hpp"
#include "hawkes/simulation.hpp"

using namespace hawkes;

namespace {

EventStream scatter(Rng& rng, double horizon, double mean_count, Side side) {
    EventStream s;
    s.horizon = horizon;
    s.side = side;
    const int n = rng.poisson(mean_count);
    for (int i = 0; i < n; ++i) s.times.push_back(horizon * rng.uniform());
    std::sort(s.times.begin(), s.times.end());
    return s;
}

}  // namespace

TEST_CASE("price with no order flow stays at its starting level") {
    const KernelSpec k = KernelSpec::exponential(0.5, 1.0);
    const PropagatorKernel zeta = propagator_closed_form(k, 1.0, 1.0, 1e-3, 30.0);
    EventStream none;
    none.horizon = 10.0;
    EventStream sells = none;
    sells.side = Side::Sell;
    CHECK(propagator_price_at(zeta, none, sells, 7.0, 41.5) == doctest::Approx(41.5));
    CHECK(anticipation_price_at(k, nullptr, 0.2, 1.0, 1.0, none, sells, 7.0, 41.5) ==
          doctest::Approx(41.5).epsilon(1e-12));
}

TEST_CASE("a single buy moves the price by the response kernel") {
    const KernelSpec k = KernelSpec::exponential(0.5, 1.0);
    const PropagatorKernel zeta = propagator_closed_form(k, 1.0, 1.0, 1e-3, 30.0);
    EventStream buys, sells;
    buys.horizon = sells.horizon = 20.0;
    sells.side = Side::Sell;
    buys.times = {1.0};
    // ζ(t−1) = 1 + e^{−(t−1)} for t ≥ 1
    CHECK(propagator_price_at(zeta, buys, sells, 1.0) == doctest::Approx(2.0));
    CHECK(propagator_price_at(zeta, buys, sells, 1.0 + std::log(2.0)) ==
          doctest::Approx(1.5).epsilon(1e-10));
    CHECK(propagator_price_at(zeta, buys, sells, 0.5) == doctest::Approx(0.0));

    // equal and opposite flow cancels exactly
    EventStream mirror = buys;
    mirror.side = Side::Sell;
    CHECK(propagator_price_at(zeta, buys, mirror, 5.0) == doctest::Approx(0.0));
}

TEST_CASE("grid pricing matches pointwise pricing") {
    const KernelSpec k = KernelSpec::exponential(0.7, 2.0);
    const PropagatorKernel zeta = propagator_closed_form(k, 1.0, 1.0, 1e-3, 30.0);
    Rng rng(3);
    const EventStream buys = scatter(rng, 12.0, 25.0, Side::Buy);
    const EventStream sells = scatter(rng, 12.0, 25.0, Side::Sell);
    const std::vector<double> grid = {0.0, 3.3, 8.1, 12.0};
    const PricePath path = propagator_price(zeta, buys, sells, grid, 10.0);
    REQUIRE(path.times.size() == grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        CHECK(path.values[i] ==
              doctest::Approx(propagator_price_at(zeta, buys, sells, grid[i], 10.0))
                  .epsilon(1e-13));
    }
}

TEST_CASE("propagator price equals anticipated-flow price: exponential") {
    // the two constructions share no code: one folds ζ over signed events, the
    // other nets expected future progeny against realized intensity
    const KernelSpec k = KernelSpec::exponential(0.9, 1.0);
    const PropagatorKernel zeta = propagator_closed_form(k, 1.3, 0.7, 1e-3, 60.0);
    Rng rng(42);
    double worst = 0.0;
    for (int sc = 0; sc < 60; ++sc) {
        const EventStream buys = scatter(rng, 15.0, 30.0, Side::Buy);
        const EventStream sells = scatter(rng, 15.0, 30.0, Side::Sell);
        for (double t : {2.5, 7.9, 15.0}) {
            const double p1 = propagator_price_at(zeta, buys, sells, t);
            const double p2 =
                anticipation_price_at(k, nullptr, 0.2, 1.3, 0.7, buys, sells, t);
            worst = std::max(worst, std::abs(p1 - p2));
        }
    }
    CHECK(worst < 1e-6 * zeta.zeta0);
}

TEST_CASE("propagator price equals anticipated-flow price: power law") {
    const KernelSpec k = KernelSpec::shifted_power_law(0.6, 0.3, 0.5);
    const double step = 2e-3, horizon = 60.0;
    const ResolventGrid psi = compute_resolvent(k, step, horizon);
    const PropagatorKernel zeta = propagator_closed_form(k, 1.0, 1.0, step, horizon);
    Rng rng(43);
    double worst = 0.0;
    for (int sc = 0; sc < 10; ++sc) {
        const EventStream buys = scatter(rng, 15.0, 25.0, Side::Buy);
        const EventStream sells = scatter(rng, 15.0, 25.0, Side::Sell);
        for (double t : {4.0, 11.0}) {
            const double p1 = propagator_price_at(zeta, buys, sells, t);
            const double p2 =
                anticipation_price_at(k, &psi, 0.2, 1.0, 1.0, buys, sells, t);
            worst = std::max(worst, std::abs(p1 - p2));
        }
    }
    CHECK(worst < 5e-4 * zeta.zeta0);
    // the anticipated-flow route needs the resolvent for this family
    EventStream b, s;
    b.horizon = s.horizon = 5.0;
    s.side = Side::Sell;
    CHECK_THROWS_AS(anticipation_price_at(k, nullptr, 0.2, 1.0, 1.0, b, s, 2.0),
                    config_error);
}

TEST_CASE("drift statistic accepts the true response and rejects a flat one") {
    MarketConfig cfg;
    cfg.kernel = KernelSpec::exponential(0.9, 1.0);
    cfg.mu = 0.1;
    cfg.horizon = 25.0;
    cfg.burn_in = 0.0;
    cfg.seed = 11;
    const PropagatorKernel truth =
        propagator_closed_form(cfg.kernel, 1.0, 1.0, 1e-3, 60.0);
    const std::size_t n = 2500;

    const DriftStatistics ok =
        martingale_drift_test(cfg, truth, 20.0, 5.0, n, ExecPolicy::Serial);
    CHECK(ok.n_paths == n);
    CHECK(std::abs(ok.studentized) < 4.0);
    CHECK(std::abs(ok.weighted_studentized) < 4.0);

    // flat response = permanent part only: anticipated mean reversion is not
    // compensated, so increments correlate with the intensity imbalance
    const PropagatorKernel flat = constant_propagator(truth.zeta_inf, 1e-3, 60.0);
    const DriftStatistics bad =
        martingale_drift_test(cfg, flat, 20.0, 5.0, n, ExecPolicy::Serial);
    CHECK(bad.weighted_studentized > 3.0);
    // the raw mean is blind to the substitution (buy/sell symmetry)
    CHECK(std::abs(bad.studentized) < 4.0);
}

TEST_CASE("drift statistic degenerates gracefully for a memoryless flow") {
    MarketConfig cfg;
    cfg.kernel = KernelSpec::zero();
    cfg.mu = 1.0;
    cfg.horizon = 20.0;
    cfg.burn_in = 0.0;
    cfg.seed = 5;
    const PropagatorKernel zeta = constant_propagator(1.0, 1e-3, 40.0);
    const DriftStatistics st =
        martingale_drift_test(cfg, zeta, 10.0, 5.0, 800, ExecPolicy::Serial);
    CHECK(std::abs(st.studentized) < 4.0);
    // both sides share the baseline intensity, so every weight is zero
    CHECK(st.weighted_mean == 0.0);
    CHECK(st.weighted_studentized == 0.0);
}

TEST_CASE("drift test is bitwise identical across execution policies") {
    MarketConfig cfg;
    cfg.kernel = KernelSpec::exponential(0.8, 1.0);
    cfg.mu = 0.2;
    cfg.horizon = 15.0;
    cfg.burn_in = 0.0;
    cfg.seed = 99;
    const PropagatorKernel zeta =
        propagator_closed_form(cfg.kernel, 1.0, 1.0, 1e-3, 40.0);
    const DriftStatistics a =
        martingale_drift_test(cfg, zeta, 10.0, 3.0, 600, ExecPolicy::Serial);
    const DriftStatistics b =
        martingale_drift_test(cfg, zeta, 10.0, 3.0, 600, ExecPolicy::Parallel);
    CHECK(a.mean == b.mean);
    CHECK(a.se == b.se);
    CHECK(a.weighted_mean == b.weighted_mean);
    CHECK(a.weighted_se == b.weighted_se);
}

TEST_CASE("drift test validates its window") {
    MarketConfig cfg;
    cfg.kernel = KernelSpec::exponential(0.5, 1.0);
    cfg.mu = 0.2;
    cfg.horizon = 10.0;
    const PropagatorKernel zeta =
        propagator_closed_form(cfg.kernel, 1.0, 1.0, 1e-3, 20.0);
    CHECK_THROWS_AS(martingale_drift_test(cfg, zeta, 8.0, 5.0, 10), config_error);
    CHECK_THROWS_AS(martingale_drift_test(cfg, zeta, -1.0, 2.0, 10), config_error);
}

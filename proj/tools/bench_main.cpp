// Timing comparison of the OpenMP Monte Carlo drivers against their serial
// reference paths.  Both policies draw identical per-replica substreams and
// reduce with the same pairwise tree, so results must agree bit for bit; the
// benchmark asserts that while it times them.

#include <chrono>
#include <cstdio>
#include <cstdlib>

#include <omp.h>

#include "hawkes/impact.hpp"
#include "hawkes/kernel.hpp"
#include "hawkes/math.hpp"
#include "hawkes/price.hpp"
#include "hawkes/resolvent.hpp"
#include "hawkes/simulation.hpp"

using namespace hawkes;

namespace {

template <typename F>
double timed(F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(t1 - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
    std::size_t n_paths = 2000;
    if (argc > 1) n_paths = static_cast<std::size_t>(std::atoll(argv[1]));

    MarketConfig cfg;
    cfg.kernel = KernelSpec::exponential(0.8, 1.0);
    cfg.mu = 0.2;
    cfg.horizon = 30.0;
    cfg.burn_in = 0.0;
    cfg.seed = 17;

    const PropagatorKernel zeta =
        propagator_closed_form(cfg.kernel, 1.0, 1.0, 1e-3, 60.0);

    std::printf("threads available: %d, replicas: %zu\n", omp_get_max_threads(),
                n_paths);

    // --- martingale drift statistic -------------------------------------
    DriftStatistics serial_d, parallel_d;
    const double td_s = timed([&] {
        serial_d = martingale_drift_test(cfg, zeta, 20.0, 5.0, n_paths,
                                         ExecPolicy::Serial);
    });
    const double td_p = timed([&] {
        parallel_d = martingale_drift_test(cfg, zeta, 20.0, 5.0, n_paths,
                                           ExecPolicy::Parallel);
    });
    const bool drift_same = serial_d.mean == parallel_d.mean &&
                            serial_d.se == parallel_d.se &&
                            serial_d.weighted_mean == parallel_d.weighted_mean;
    std::printf("drift test      serial %7.3fs  parallel %7.3fs  speedup %5.2fx  %s\n",
                td_s, td_p, td_s / td_p, drift_same ? "bitwise-equal" : "MISMATCH");

    // --- metaorder impact Monte Carlo -----------------------------------
    cfg.metaorder = {0.5, 10.0, Side::Buy};
    const std::vector<double> grid = linspace(0.5, 12.0, 24);
    ImpactCurve serial_i, parallel_i;
    const double ti_s = timed([&] {
        serial_i = impact_monte_carlo(cfg, zeta, grid, n_paths, ExecPolicy::Serial);
    });
    const double ti_p = timed([&] {
        parallel_i =
            impact_monte_carlo(cfg, zeta, grid, n_paths, ExecPolicy::Parallel);
    });
    bool impact_same = true;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        impact_same = impact_same && serial_i.values[i] == parallel_i.values[i] &&
                      serial_i.se[i] == parallel_i.se[i];
    }
    std::printf("impact MC       serial %7.3fs  parallel %7.3fs  speedup %5.2fx  %s\n",
                ti_s, ti_p, ti_s / ti_p, impact_same ? "bitwise-equal" : "MISMATCH");

    return (drift_same && impact_same) ? 0 : 1;
}

#pragma once

#include <span>
#include <string>
#include <vector>

#include "hawkes/parallel.hpp"
#include "hawkes/resolvent.hpp"
#include "hawkes/simulation.hpp"

namespace hawkes {

struct PricePath {
    std::vector<double> times;
    std::vector<double> values;
    double p0 = 0.0;
    std::string construction;  // "propagator" | "anticipation"
};

// P_t = P0 + Σ_{buy t_i ≤ t} ζ(t−t_i) − Σ_{sell t_j ≤ t} ζ(t−t_j).
// Event-driven: the sum is recomputed at each query time, never interpolated.
double propagator_price_at(const PropagatorKernel& zeta, const EventStream& buys,
                           const EventStream& sells, double t, double p0 = 0.0);
PricePath propagator_price(const PropagatorKernel& zeta, const EventStream& buys,
                           const EventStream& sells, std::span<const double> grid,
                           double p0 = 0.0);

// The martingale construction: the price as the anticipated long-run signed
// volume,
//   P_t = P0 + κv [ N^a_t − N^b_t + Σ_± Ψ̄(t−t_i) − ∫_0^t Ψ̄(t−x)(λ^a_x − λ^b_x) dx ],
// with Ψ̄(y) = ∫_y^∞ ψ and the realized intensities λ.  Same value as the
// propagator construction — the two are computed by independent code paths so
// tests can compare them.  ψ may be omitted for exponential kernels (closed
// form); other families need a computed resolvent.
double anticipation_price_at(const KernelSpec& spec, const ResolventGrid* psi,
                             double mu, double kappa, double order_volume,
                             const EventStream& buys, const EventStream& sells,
                             double t, double p0 = 0.0);

// Monte Carlo check of the no-drift property of the priced flow.  Each replica
// simulates an independent market, prices it with ζ, and records the increment
// P_{t0+h} − P_{t0}.  The raw mean is zero for *any* ζ by buy/sell symmetry, so
// the discriminating statistic weights each increment by the intensity
// imbalance λ^buy − λ^sell at t0 (an observable at t0): correct ζ keeps the
// weighted mean at zero, a kernel that misprices the flow's autocorrelation
// does not.
struct DriftStatistics {
    std::size_t n_paths = 0;
    double t0 = 0.0, h = 0.0;
    double mean = 0.0, se = 0.0, studentized = 0.0;
    double weighted_mean = 0.0, weighted_se = 0.0, weighted_studentized = 0.0;
};
DriftStatistics martingale_drift_test(const MarketConfig& cfg,
                                      const PropagatorKernel& zeta, double t0, double h,
                                      std::size_t n_paths,
                                      ExecPolicy policy = ExecPolicy::Parallel);

// ζ ≡ level: the "pure permanent impact" pricer used as a negative control.
PropagatorKernel constant_propagator(double level, double step, double horizon,
                                     double kappa = 1.0, double order_volume = 1.0);

}  // namespace hawkes

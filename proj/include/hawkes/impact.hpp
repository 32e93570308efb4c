#pragma once

#include <span>
#include <string>
#include <vector>

#include "hawkes/parallel.hpp"
#include "hawkes/resolvent.hpp"
#include "hawkes/simulation.hpp"

namespace hawkes {

// Expected price displacement caused by a metaorder trading at rate F on
// [0, τ]:  MI(t) = F ∫_0^{t∧τ} ζ(t−s) ds.
struct ImpactCurve {
    std::vector<double> times;
    std::vector<double> values;
    std::vector<double> se;  // empty for analytic curves
    double rate = 0.0;       // F
    double duration = 0.0;   // τ
    std::string provenance;  // "analytic" | "monte-carlo" | "rescaled"
    // populated by renormalize_impact:
    double a_T = 0.0, tau_T = 0.0, alpha = 0.0;
};

double expected_impact(const PropagatorKernel& zeta, double rate, double duration,
                       double t);
ImpactCurve impact_analytic(const PropagatorKernel& zeta, double rate, double duration,
                            std::span<const double> grid);

// t→∞ limit of MI: κ · v · F · τ (price response per share × executed volume).
double permanent_impact_limit(const PropagatorKernel& zeta, double rate,
                              double duration);

// Mean of propagator_price − P0 over independent simulated markets with the
// metaorder of cfg injected; per-point standard errors.  `antithetic` also
// prices each replica with the anonymous sides swapped and averages the pair
// (the anonymous contribution is odd under the swap).
ImpactCurve impact_monte_carlo(const MarketConfig& cfg, const PropagatorKernel& zeta,
                               std::span<const double> grid, std::size_t n_paths,
                               ExecPolicy policy = ExecPolicy::Parallel,
                               bool antithetic = false);

// RMI^T(t) = (1−a_T)/(τ^T)^{1−α} · MI^T(t·τ^T): input sampled at times t_i·τ^T,
// output on the unit-time grid t_i.
ImpactCurve renormalize_impact(const ImpactCurve& curve, double a_T, double tau_T,
                               double alpha);

// Limit of the rescaled impact in the near-critical regime: K′·t^{1−α} with
// K′ = c^α κ v F / (1−α).
double rescaled_impact_limit(double t, double alpha, double scale_c, double kappa,
                             double order_volume, double rate);

struct PowerLawFit {
    double exponent = 0.0;
    double amplitude = 0.0;  // value at t=1 of the fitted amplitude·t^exponent
    double r_squared = 0.0;
    std::size_t n_points = 0;
};
// Log-log least squares of curve values over times in [t_min, t_max].
PowerLawFit fit_power_law(const ImpactCurve& curve, double t_min, double t_max);

// Exponent chain: order-flow memory exponent γ ∈ (0,1) ↔ impact exponent ν.
double exponent_link(double gamma);           // ν = (1+γ)/2
double exponent_link_inverse(double nu);      // γ = 2ν−1

// One rescaled-impact convergence run: for each a_T, builds the kernel a_T·Φ,
// τ^T = (1−a_T)^{−1/(2α)}, evaluates RMI^T on `unit_grid`, and records the sup
// distance to the K′t^{1−α} limit plus a power-law fit on [fit_min, fit_max].
struct RescaledConvergence {
    std::vector<double> a_sequence;
    std::vector<double> tau_sequence;
    std::vector<double> sup_distance;
    std::vector<PowerLawFit> fits;
    std::vector<ImpactCurve> curves;
};
RescaledConvergence rescaled_impact_convergence(const KernelSpec& base,
                                                std::span<const double> a_sequence,
                                                double kappa, double order_volume,
                                                double rate,
                                                std::span<const double> unit_grid,
                                                double fit_min, double fit_max);

// Largest second derivative estimate over the curve's interior nodes (three
// point, nonuniform); ≤ 0 within tolerance means the curve is concave.
double max_convexity_violation(const ImpactCurve& curve);

}  // namespace hawkes

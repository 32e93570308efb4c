#pragma once

#include <optional>
#include <span>
#include <vector>

#include "hawkes/kernel.hpp"

namespace hawkes {

// ψ = Σ_{k>=1} φ^{*k} sampled on a uniform grid, the solution of the renewal
// equation ψ = φ + φ∗ψ.  Total mass ∫ψ = a/(1-a) is known in closed form
// (geometric series), which is what tail_integral leans on inside the grid.
struct ResolventGrid {
    double step = 0.0;
    double horizon = 0.0;
    std::vector<double> values;      // ψ(i·step)
    std::vector<double> cumulative;  // trapezoid ∫_0^{i·step} ψ
    KernelSpec source = KernelSpec::zero();
    bool horizon_warning = false;    // >1% of the mass sits beyond the grid

    // fitted tail for beyond-horizon queries:
    //   exponential source: ψ ~ amp·e^{-rate·t};  power-law: ψ ~ amp·t^{-1-α}
    double tail_amplitude = 0.0;
    double tail_rate_or_exponent = 0.0;

    double operator()(double t) const;       // interpolated ψ, tail model beyond H
    double mass_on_grid() const { return cumulative.empty() ? 0.0 : cumulative.back(); }
    double total_mass() const;               // a/(1-a), closed form
    double cumulative_to(double x) const;    // ∫_0^x ψ for x <= horizon
    double tail_integral(double x) const;    // ∫_x^∞ ψ
};

ResolventGrid compute_resolvent(const KernelSpec& spec, double step, double horizon);

// Price-response kernel ζ on a uniform grid.  Carries κ and the per-order
// volume v; when `source` is set, evaluation and integration use the closed
// form ζ(x) = ζ(0)·(1 - ∫_0^x φ) instead of interpolation.
struct PropagatorKernel {
    double step = 0.0;
    double horizon = 0.0;
    std::vector<double> values;
    double zeta0 = 0.0;
    double zeta_inf = 0.0;
    double kappa = 1.0;
    double order_volume = 1.0;
    std::optional<KernelSpec> source;
    bool accuracy_warning = false;

    double operator()(double x) const;    // ζ(x); throws horizon_error off-grid
    double integral_to(double x) const;   // ∫_0^x ζ
};

// Path 1: ζ from a computed resolvent via the tail-integral formula
// ζ(x) = κ v (1 + Ψ̄(x) - (φ∗Ψ̄)(x)),  Ψ̄(x) = ∫_x^∞ ψ.
PropagatorKernel propagator_from_resolvent(const ResolventGrid& psi, double kappa,
                                           double order_volume);

// Path 2: ζ(x) = ζ(0)(1 - ∫_0^x φ) with ζ(0) = κv/(1-∫φ); at criticality
// (∫φ = 1) the prefactor must be supplied explicitly.
PropagatorKernel propagator_closed_form(const KernelSpec& spec, double kappa,
                                        double order_volume, double step, double horizon,
                                        std::optional<double> zeta0_at_criticality = {});

// Sup/RMS residual of the martingale identity ζ'(x) = -ζ(0) φ(x), evaluated
// with centred differences of the grid values at panel midpoints.
struct IdentityResidual {
    double max_abs = 0.0;
    double rms = 0.0;
    double scale = 0.0;  // ζ(0), for relative thresholds
};
IdentityResidual check_martingale_identity(const PropagatorKernel& zeta,
                                           const KernelSpec& spec);

}  // namespace hawkes

#pragma once

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "hawkes/rng.hpp"

namespace hawkes {

enum class KernelFamily { Exponential, ShiftedPowerLaw, Tabulated };

// Excitation kernel φ of a self-exciting flow.  Three families:
//   exponential        φ(t) = a·b·e^{-b t}
//   shifted power law  φ(t) = n·α·c^α / (t+c)^{1+α},  α in (0,1/2)
//   tabulated          linear interpolation of (t, φ) samples, fitted
//                      power-law tail beyond the last node
// The branching ratio ∫φ is the L1 norm; subcriticality (∫φ < 1) is required
// by consumers that need it (resolvent, simulation), not at construction, so
// that critical kernels remain representable.
class KernelSpec {
public:
    static KernelSpec exponential(double branching_ratio, double rate);
    static KernelSpec shifted_power_law(double branching_ratio, double tail_exponent,
                                        double scale);
    static KernelSpec tabulated(std::vector<double> t, std::vector<double> phi);
    static KernelSpec zero() { return exponential(0.0, 1.0); }

    KernelFamily family() const { return family_; }
    double branching_ratio() const { return a_; }
    double rate() const { return b_; }            // exponential only
    double tail_exponent() const { return alpha_; }  // power law / fitted tail
    double scale() const { return c_; }           // power law only

    // φ(t); throws std::domain_error for t < 0.
    double operator()(double t) const;

    // ∫_0^∞ φ (the branching ratio; closed form / quadrature for tabulated).
    double norm() const { return a_; }

    // ∫_0^x φ and ∫_x^∞ φ, closed forms where the family has one.
    double integral_to(double x) const;
    double tail_integral(double x) const;

    // φ̂(z) = ∫_0^∞ φ(t) e^{izt} dt.
    std::complex<double> fourier(double z) const;

    // Time for φ to decay by a factor e (burn-in heuristics).
    double characteristic_time() const;

    // Draw an offspring delay with density φ/∫φ (branching representation).
    double sample_offspring_delay(Rng& rng) const;

    nlohmann::json to_json() const;
    static KernelSpec from_json(const nlohmann::json& j);

    const std::vector<double>& table_times() const { return tab_t_; }
    const std::vector<double>& table_values() const { return tab_phi_; }
    double table_tail_amplitude() const { return tail_amp_; }

private:
    KernelSpec() = default;

    KernelFamily family_ = KernelFamily::Exponential;
    double a_ = 0.0;      // branching ratio ∫φ
    double b_ = 1.0;      // exponential rate
    double alpha_ = 0.0;  // power-law tail exponent
    double c_ = 1.0;      // power-law scale

    // tabulated family
    std::vector<double> tab_t_, tab_phi_, tab_cum_;
    double tail_amp_ = 0.0;   // fitted tail K: φ(t) ~ K t^{-1-alpha_} beyond grid
};

// One member of the near-critical family: kernel a_T·Φ (∫Φ = 1), baseline
// intensity μ^T = C_μ·(1-a_T)·T^{2α-1}, covariance normalizer A_T = T^{-2α}.
struct NearCriticalFamily {
    KernelSpec base = KernelSpec::zero();  // Φ, unit mass, power-law tail
    double observation_scale = 0.0;  // T
    double a_T = 0.0;
    double c_mu = 1.0;

    double alpha() const { return base.tail_exponent(); }
    double mu() const;
    double normalizer() const;                 // A_T
    KernelSpec rescaled_kernel() const;        // a_T · Φ
    double assumption5_parameter() const;      // T (1-a_T)^{1/α}
};

NearCriticalFamily make_near_critical(const KernelSpec& base, double observation_scale,
                                      double a_T, double c_mu = 1.0);

}  // namespace hawkes

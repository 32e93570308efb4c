#pragma once

#include <complex>
#include <span>
#include <string>
#include <vector>

#include "hawkes/kernel.hpp"
#include "hawkes/simulation.hpp"

namespace hawkes {

// Covariance of h-increments of a counting process at a grid of lags:
// C(τ,h) = Cov(N_{t+τ+h} − N_{t+τ}, N_{t+h} − N_t).
struct CovarianceCurve {
    double h = 0.0;
    std::vector<double> tau;
    std::vector<double> values;
    std::vector<double> se;  // empirical curves only
    std::string provenance;  // "theoretical-fourier" | "empirical" | "fbm-limit"
};

// θ(x) = ∫_0^∞ e^{iu} u^{−x} du for x ∈ (0,1); for x ∈ (1,2) the integral is
// regularized with (e^{iu} − 1).  Closed form Γ(1−x)·e^{iπ(1−x)/2} on both
// branches.
std::complex<double> theta_constant(double x);
// Independent oracle: direct quadrature of the defining (regularized) integral,
// with the oscillatory tail rotated onto a damped contour.
std::complex<double> theta_constant_quadrature(double x);

// Amplitude of the fractional-Brownian-motion limit curve.
double limit_constant_K(double c_mu, double alpha, double c, double h);

// K·(|τ+h|^{2H} + |τ−h|^{2H} − 2|τ|^{2H}) with H = 1/2 + α.
double fbm_increment_covariance(double K, double alpha, double h, double tau);
CovarianceCurve fbm_limit_covariance(double K, double alpha, double h,
                                     std::span<const double> tau);

// Stationary increment covariance of a (μ, φ) flow by Fourier inversion of
// Ĉ(z,h) = Λ·h²·sinc²(zh/2)/|1−φ̂(z)|², Λ = μ/(1−∫φ).  The φ̂-free part
// inverts to the exact Poisson triangle Λ·h·(1−|τ|/h)⁺; only the excess is
// integrated numerically (exact-cosine Filon on a graded frequency grid).
CovarianceCurve theoretical_covariance(const KernelSpec& spec, double mu, double h,
                                       std::span<const double> tau);

// Forward transform of a sampled covariance curve: 2∫_0^∞ C(τ)cos(zτ)dτ with C
// piecewise-linear.  Used by the inversion self-test.
double covariance_forward_transform(const CovarianceCurve& curve, double z);

// Rescaled near-critical covariance C^{X,T}(τ,h) = A_T²·C^{N,T}(Tτ, Th) of the
// family's flow, same inversion machinery in rescaled frequency.
CovarianceCurve rescaled_covariance(const NearCriticalFamily& fam, double h,
                                    std::span<const double> tau);

// Sample covariance of h-increments from overlapping windows (stride h/4; lags
// snap to the stride grid — the curve reports the snapped lags), standard
// errors from batch means with batch length 50(τ+h).  Requires the stream to
// hold at least 10³ disjoint (τ+h)-windows.
CovarianceCurve empirical_covariance(const EventStream& stream, double h,
                                     std::span<const double> tau);
// Same estimator between two streams (→ 0 for independent flows).
CovarianceCurve empirical_cross_covariance(const EventStream& a, const EventStream& b,
                                           double h, std::span<const double> tau);

// Distance table of rescaled theoretical covariances to the fBm limit along a
// (T, a_T) sequence.  With enforce_scaling the sequence must have decreasing
// T(1−a_T)^{1/α}; pass false to study violating sequences (negative controls).
struct CovarianceConvergence {
    std::vector<double> T;
    std::vector<double> a_T;
    std::vector<double> assumption5;  // T(1−a_T)^{1/α}
    std::vector<double> sup_distance;
    std::vector<CovarianceCurve> curves;
    CovarianceCurve limit;
};
CovarianceConvergence covariance_convergence(const KernelSpec& base, double c_mu,
                                             std::span<const double> T_sequence,
                                             std::span<const double> a_sequence,
                                             double h, std::span<const double> tau,
                                             bool enforce_scaling = true);

// Log-log slope of C over [tau_min, tau_max]: C ~ amp·τ^{−γ}.
struct GammaEstimate {
    double gamma = 0.0;
    double r_squared = 0.0;
    std::size_t n_points = 0;
};
GammaEstimate estimate_gamma(const CovarianceCurve& curve, double tau_min,
                             double tau_max);

}  // namespace hawkes

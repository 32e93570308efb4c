#include "hawkes/longmemory.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "hawkes/errors.hpp"
#include "hawkes/math.hpp"
#include "hawkes/parallel.hpp"

namespace hawkes {

namespace {

using cplx = std::complex<double>;
constexpr cplx I{0.0, 1.0};

double sinc(double x) { return x == 0.0 ? 1.0 : std::sin(x) / x; }

double triangle(double tau, double h) {
    const double t = std::abs(tau);
    return t >= h ? 0.0 : 1.0 - t / h;
}

void check_theta_domain(double x) {
    if (!((x > 0.0 && x < 1.0) || (x > 1.0 && x < 2.0)))
        throw std::domain_error("θ(x) is defined for x in (0,1) ∪ (1,2)");
}

// Shared inversion core.  Ĉ factorizes as scale·h²·sinc²(zh/2)·W(z) with
// W(∞) = 1; the W ≡ 1 part inverts to the exact triangle, the excess
// V(z) = sinc²(zh/2)(W(z)−1) is smooth, nonsingular at 0 and absolutely
// integrable, and is inverted with an exact-cosine Filon rule on a graded grid
// (head panels below z_head, log-spaced Filon nodes above).  Node placement
// depends only on W, so one V tabulation serves every lag.
class IncrementSpectrumInverter {
public:
    IncrementSpectrumInverter(std::function<double(double)> W, double h, double tau_max)
        : h_(h) {
        const double z_head = 0.25 / std::max({tau_max, h, 1.0});
        auto V = [&](double z) { return sinc(z * h / 2.0) * sinc(z * h / 2.0) *
                                        (W(z) - 1.0); };

        // head: graded panels over [~0, z_head]; store abscissae and weights so
        // the τ-dependent cosine can be applied later
        const double z0 = z_head * 1e-10;
        const int per_decade = 8;
        const int n_panels = 10 * per_decade;
        const double ratio = std::pow(z_head / z0, 1.0 / n_panels);
        double lo = z0;
        head_z_.push_back(0.5 * z0);  // [0, z0] rectangle, V ≈ V(0) there
        head_wv_.push_back(V(0.5 * z0) * z0);
        for (int p = 0; p < n_panels; ++p) {
            const double hi = (p + 1 == n_panels) ? z_head : lo * ratio;
            append_gl15(V, lo, hi);
            lo = hi;
        }

        // Filon nodes: log-spaced from z_head until V has decayed away.  The
        // cosine weight is integrated exactly per segment, so the error is the
        // piecewise-linear interpolation of V; 1024 nodes per decade puts that
        // below 1e-6 relative for smooth spectra.
        const int nodes_per_decade = 1024;
        const double r = std::pow(10.0, 1.0 / nodes_per_decade);
        double peak = 0.0;
        int quiet = 0;
        double z = z_head;
        const double z_cap = 1e7 / h;
        while (quiet < 3 * nodes_per_decade) {
            filon_z_.push_back(z);
            const double v = V(z);
            filon_v_.push_back(v);
            peak = std::max(peak, std::abs(v));
            quiet = std::abs(v) <= 1e-10 * peak ? quiet + 1 : 0;
            z *= r;
            if (z > z_cap)
                throw numerical_error(
                    "covariance inversion: spectrum did not decay below the "
                    "frequency cap");
        }
    }

    // ∫_0^∞ cos(zτ)·V(z) dz
    double excess(double tau) const {
        double acc = 0.0;
        for (std::size_t i = 0; i < head_z_.size(); ++i)
            acc += head_wv_[i] * std::cos(head_z_[i] * tau);
        return acc + filon_cos(filon_z_, filon_v_, tau);
    }

    double h_;

private:
    template <typename F>
    void append_gl15(F&& V, double a, double b) {
        const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        head_z_.push_back(mid);
        head_wv_.push_back(half * detail::gl15_w[0] * V(mid));
        for (int i = 1; i < 8; ++i) {
            const double dx = half * detail::gl15_x[i];
            head_z_.push_back(mid + dx);
            head_wv_.push_back(half * detail::gl15_w[i] * V(mid + dx));
            head_z_.push_back(mid - dx);
            head_wv_.push_back(half * detail::gl15_w[i] * V(mid - dx));
        }
    }

    std::vector<double> head_z_, head_wv_;
    std::vector<double> filon_z_, filon_v_;
};

CovarianceCurve invert_spectrum(std::function<double(double)> W, double scale, double h,
                                std::span<const double> tau) {
    double tau_max = 0.0;
    for (double t : tau) tau_max = std::max(tau_max, std::abs(t));
    IncrementSpectrumInverter inv(std::move(W), h, tau_max);

    CovarianceCurve curve;
    curve.h = h;
    curve.provenance = "theoretical-fourier";
    curve.tau.assign(tau.begin(), tau.end());
    curve.values.reserve(tau.size());
    for (double t : tau)
        curve.values.push_back(
            scale * (h * triangle(t, h) + h * h / pi * inv.excess(t)));
    return curve;
}

}  // namespace

std::complex<double> theta_constant(double x) {
    check_theta_domain(x);
    return std::tgamma(1.0 - x) * std::exp(I * (pi * (1.0 - x) / 2.0));
}

std::complex<double> theta_constant_quadrature(double x) {
    check_theta_domain(x);
    const double eps = 0.05, U = 2.0;
    cplx acc{};
    if (x < 1.0) {
        // ∫_0^ε e^{iu}u^{−x}: termwise series of the exponential
        cplx term{1.0, 0.0};  // i^k / k!
        for (int k = 0; k <= 24; ++k) {
            acc += term * std::pow(eps, k + 1.0 - x) / (k + 1.0 - x);
            term *= I / static_cast<double>(k + 1);
        }
        acc += integrate_adaptive(
            [&](double u) { return std::exp(I * u) * std::pow(u, -x); }, eps, U, 1e-13);
        acc += I * std::exp(I * U) * damped_power_integral(x, 1.0, U);
    } else {
        cplx term = I;  // i^k / k!, k from 1
        for (int k = 1; k <= 24; ++k) {
            acc += term * std::pow(eps, k + 1.0 - x) / (k + 1.0 - x);
            term *= I / static_cast<double>(k + 1);
        }
        acc += integrate_adaptive(
            [&](double u) { return (std::exp(I * u) - 1.0) * std::pow(u, -x); }, eps, U,
            1e-13);
        acc += I * std::exp(I * U) * damped_power_integral(x, 1.0, U) -
               std::pow(U, 1.0 - x) / (x - 1.0);
    }
    return acc;
}

double limit_constant_K(double c_mu, double alpha, double c, double h) {
    if (alpha <= 0.0 || alpha >= 0.5)
        throw std::domain_error("K requires a tail exponent in (0, 1/2)");
    if (c_mu <= 0.0 || c <= 0.0 || h <= 0.0)
        throw std::domain_error("K requires positive C_μ, c, h");
    // Convolving the unit triangle of half-width h against |t|^{2α−1} yields
    // the second difference of |t|^{1+2α}/(h·2α(1+2α)); that normalization
    // cancels the h in the spectral amplitude, so K is h-free — which is what
    // self-similarity of the limit demands.  Cross-checked against direct
    // quadrature of the limit spectrum at τ=0.
    const double re = std::real(theta_constant(1.0 - 2.0 * alpha));
    const double mod = std::abs(theta_constant(1.0 + alpha));
    return c_mu / (2.0 * re * mod * mod * std::pow(c, 2.0 * alpha) * alpha * alpha *
                   2.0 * alpha * (1.0 + 2.0 * alpha));
}

double fbm_increment_covariance(double K, double alpha, double h, double tau) {
    const double two_h = 1.0 + 2.0 * alpha;  // 2H
    return K * (std::pow(std::abs(tau + h), two_h) + std::pow(std::abs(tau - h), two_h) -
                2.0 * std::pow(std::abs(tau), two_h));
}

CovarianceCurve fbm_limit_covariance(double K, double alpha, double h,
                                     std::span<const double> tau) {
    CovarianceCurve curve;
    curve.h = h;
    curve.provenance = "fbm-limit";
    curve.tau.assign(tau.begin(), tau.end());
    curve.values.reserve(tau.size());
    for (double t : tau)
        curve.values.push_back(fbm_increment_covariance(K, alpha, h, t));
    return curve;
}

CovarianceCurve theoretical_covariance(const KernelSpec& spec, double mu, double h,
                                       std::span<const double> tau) {
    if (spec.norm() >= 1.0)
        throw criticality_error(
            "the stationary covariance needs a subcritical kernel");
    if (mu <= 0.0 || h <= 0.0)
        throw config_error("covariance needs μ > 0 and h > 0");
    const double rate = mu / (1.0 - spec.norm());
    auto W = [spec](double z) {
        const cplx d = 1.0 - spec.fourier(z);
        return 1.0 / std::norm(d);
    };
    return invert_spectrum(W, rate, h, tau);
}

double covariance_forward_transform(const CovarianceCurve& curve, double z) {
    return 2.0 * filon_cos(curve.tau, curve.values, z);
}

CovarianceCurve rescaled_covariance(const NearCriticalFamily& fam, double h,
                                    std::span<const double> tau) {
    // A_T²·C^{N,T}(Tτ, Th) reduces, after substituting u = zT, to the standard
    // inversion with W(u) = |1−a_T·Φ̂(u/T)|^{-2} and scale C_μ·T^{−2α}
    // (A_T²·Λ^T·T = C_μ·T^{−2α} by the family's definitions).
    const double T = fam.observation_scale;
    const KernelSpec base = fam.base;
    const double a_T = fam.a_T;
    auto W = [base, a_T, T](double u) {
        const cplx d = 1.0 - a_T * base.fourier(u / T);
        return 1.0 / std::norm(d);
    };
    const double scale = fam.c_mu * std::pow(T, -2.0 * fam.alpha());
    return invert_spectrum(W, scale, h, tau);
}

namespace {

CovarianceCurve empirical_core(const EventStream& sx, const EventStream& sy, double h,
                               std::span<const double> tau) {
    if (h <= 0.0) throw config_error("empirical covariance needs h > 0");
    const double span_t = std::min(sx.horizon, sy.horizon);
    const double stride = h / 4.0;
    const std::size_t grid_n = static_cast<std::size_t>(std::floor(span_t / stride)) + 1;

    auto prefix = [&](const EventStream& s) {
        std::vector<double> n(grid_n);
        std::size_t k = 0;
        for (std::size_t j = 0; j < grid_n; ++j) {
            const double t = static_cast<double>(j) * stride;
            while (k < s.times.size() && s.times[k] <= t) ++k;
            n[j] = static_cast<double>(k);
        }
        return n;
    };
    const std::vector<double> nx = prefix(sx);
    const std::vector<double> ny = prefix(sy);

    CovarianceCurve curve;
    curve.h = h;
    curve.provenance = "empirical";
    for (double t : tau) {
        const std::size_t m = static_cast<std::size_t>(std::llround(t / stride));
        const double tau_eff = static_cast<double>(m) * stride;
        if (span_t < 1e3 * (tau_eff + h))
            throw config_error(
                "stream too short: need at least 10³ disjoint (τ+h)-windows");
        if (m + 4 >= grid_n) throw config_error("lag exceeds the stream horizon");

        const std::size_t n_pairs = grid_n - 4 - m;
        const std::size_t batch =
            std::max<std::size_t>(1, static_cast<std::size_t>(
                                         std::ceil(50.0 * (tau_eff + h) / stride)));

        std::vector<double> batch_means;
        double sum_x = 0.0, sum_y = 0.0, sum_xy = 0.0;
        double bacc = 0.0;
        std::size_t bcount = 0;
        for (std::size_t j = 0; j < n_pairs; ++j) {
            const double x = nx[j + 4] - nx[j];
            const double y = ny[j + m + 4] - ny[j + m];
            sum_x += x;
            sum_y += y;
            sum_xy += x * y;
            bacc += x * y;
            if (++bcount == batch) {
                batch_means.push_back(bacc / static_cast<double>(bcount));
                bacc = 0.0;
                bcount = 0;
            }
        }
        if (bcount > 0) batch_means.push_back(bacc / static_cast<double>(bcount));

        const double n = static_cast<double>(n_pairs);
        curve.tau.push_back(tau_eff);
        curve.values.push_back(sum_xy / n - (sum_x / n) * (sum_y / n));
        auto [bm, bse] = mean_and_se(batch_means);
        (void)bm;
        curve.se.push_back(bse);
    }
    return curve;
}

}  // namespace

CovarianceCurve empirical_covariance(const EventStream& stream, double h,
                                     std::span<const double> tau) {
    return empirical_core(stream, stream, h, tau);
}

CovarianceCurve empirical_cross_covariance(const EventStream& a, const EventStream& b,
                                           double h, std::span<const double> tau) {
    return empirical_core(a, b, h, tau);
}

CovarianceConvergence covariance_convergence(const KernelSpec& base, double c_mu,
                                             std::span<const double> T_sequence,
                                             std::span<const double> a_sequence,
                                             double h, std::span<const double> tau,
                                             bool enforce_scaling) {
    if (T_sequence.size() != a_sequence.size())
        throw config_error("T and a_T sequences must have equal length");

    CovarianceConvergence out;
    const double alpha = base.tail_exponent();
    out.limit = fbm_limit_covariance(limit_constant_K(c_mu, alpha, base.scale(), h),
                                     alpha, h, tau);

    double prev_eps = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < T_sequence.size(); ++i) {
        NearCriticalFamily fam =
            make_near_critical(base, T_sequence[i], a_sequence[i], c_mu);
        const double eps = fam.assumption5_parameter();
        if (enforce_scaling && eps >= prev_eps)
            throw config_error(
                "sequence violates the vanishing-scale assumption: "
                "T(1−a_T)^{1/α} must decrease");
        prev_eps = eps;

        CovarianceCurve curve = rescaled_covariance(fam, h, tau);
        double sup = 0.0;
        for (std::size_t k = 0; k < curve.values.size(); ++k)
            sup = std::max(sup, std::abs(curve.values[k] - out.limit.values[k]));

        out.T.push_back(T_sequence[i]);
        out.a_T.push_back(a_sequence[i]);
        out.assumption5.push_back(eps);
        out.sup_distance.push_back(sup);
        out.curves.push_back(std::move(curve));
    }
    return out;
}

GammaEstimate estimate_gamma(const CovarianceCurve& curve, double tau_min,
                             double tau_max) {
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < curve.tau.size(); ++i) {
        const double t = curve.tau[i];
        if (t < tau_min || t > tau_max) continue;
        if (curve.values[i] <= 0.0)
            throw std::domain_error(
                "memory-exponent fit window contains nonpositive covariances");
        lx.push_back(std::log(t));
        ly.push_back(std::log(curve.values[i]));
    }
    if (lx.size() < 2)
        throw std::domain_error("memory-exponent fit window holds fewer than two points");
    const LinearFit f = linear_fit(lx, ly);
    return {-f.slope, f.r_squared, lx.size()};
}

}  // namespace hawkes

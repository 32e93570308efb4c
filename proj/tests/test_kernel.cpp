#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "hawkes/errors.hpp"
#include "hawkes/kernel.hpp"
#include "hawkes/math.hpp"
#include "hawkes/rng.hpp"
#include "hawkes/stats.hpp"

using namespace hawkes;

TEST_CASE("exponential kernel closed forms") {
    const double a = 0.5, b = 2.0;
    const KernelSpec k = KernelSpec::exponential(a, b);
    CHECK(k.norm() == doctest::Approx(a).epsilon(1e-14));
    CHECK(k(0.0) == doctest::Approx(a * b).epsilon(1e-14));
    CHECK(k(1.5) == doctest::Approx(a * b * std::exp(-b * 1.5)).epsilon(1e-14));
    CHECK(k.integral_to(0.7) ==
          doctest::Approx(a * (1.0 - std::exp(-b * 0.7))).epsilon(1e-14));
    CHECK(k.tail_integral(0.7) ==
          doctest::Approx(a * std::exp(-b * 0.7)).epsilon(1e-14));
    // consistency: head + tail = total mass
    CHECK(k.integral_to(3.0) + k.tail_integral(3.0) ==
          doctest::Approx(a).epsilon(1e-14));
    CHECK(k.characteristic_time() == doctest::Approx(1.0 / b));
    CHECK_THROWS_AS(k(-0.1), std::domain_error);
}

TEST_CASE("exponential kernel Fourier transform") {
    // φ̂(z) = ab/(b − iz); at a=0.5, b=2, z=1 this is 1/(2−i) = (2+i)/5
    const KernelSpec k = KernelSpec::exponential(0.5, 2.0);
    const std::complex<double> got = k.fourier(1.0);
    CHECK(got.real() == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(got.imag() == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(k.fourier(0.0).real() == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(k.fourier(0.0).imag() == doctest::Approx(0.0));
    // Hermitian symmetry of the transform of a real kernel
    const std::complex<double> neg = k.fourier(-1.0);
    CHECK(neg.real() == doctest::Approx(got.real()).epsilon(1e-12));
    CHECK(neg.imag() == doctest::Approx(-got.imag()).epsilon(1e-12));
}

TEST_CASE("power-law kernel closed forms") {
    const double a = 0.8, alpha = 0.35, c = 1.5;
    const KernelSpec k = KernelSpec::shifted_power_law(a, alpha, c);
    CHECK(k.norm() == doctest::Approx(a).epsilon(1e-14));
    // φ(t) = a·α·c^α·(t+c)^{−1−α}
    const double t = 2.0;
    CHECK(k(t) == doctest::Approx(a * alpha * std::pow(c, alpha) *
                                  std::pow(t + c, -1.0 - alpha))
                      .epsilon(1e-13));
    CHECK(k.integral_to(t) ==
          doctest::Approx(a * (1.0 - std::pow(c / (t + c), alpha))).epsilon(1e-13));
    CHECK(k.tail_integral(t) ==
          doctest::Approx(a * std::pow(c / (t + c), alpha)).epsilon(1e-13));
    // numeric cross-check of the head integral
    const double quad = integrate_gl15([&](double s) { return k(s); }, 0.0, t);
    CHECK(k.integral_to(t) == doctest::Approx(quad).epsilon(1e-10));
}

TEST_CASE("power-law Fourier transform vs finite-window quadrature") {
    const double a = 0.8, alpha = 0.35, c = 1.0, z = 2.0;
    const KernelSpec k = KernelSpec::shifted_power_law(a, alpha, c);
    // Oracle: oscillatory quadrature on [0, T] plus two integration-by-parts
    // boundary terms for the remainder; residual after that is O(f''(T)/z³).
    const double T = 600.0;
    std::complex<double> head(0.0, 0.0);
    const int panels = 6000;  // ~30 GL panels per oscillation period
    for (int p = 0; p < panels; ++p) {
        const double lo = T * p / panels, hi = T * (p + 1) / panels;
        head += integrate_gl15(
            [&](double t) {
                return std::complex<double>(k(t) * std::cos(z * t),
                                            k(t) * std::sin(z * t));
            },
            lo, hi);
    }
    const auto f = [&](double t) {
        return a * alpha * std::pow(c, alpha) * std::pow(t + c, -1.0 - alpha);
    };
    const auto fp = [&](double t) {
        return -a * alpha * (1.0 + alpha) * std::pow(c, alpha) *
               std::pow(t + c, -2.0 - alpha);
    };
    // ∫_T^∞ f e^{izt} dt = e^{izT}(−f(T)/(iz) + f'(T)/(iz)²) + O(f''(T)/z³)
    const std::complex<double> iz(0.0, z);
    const std::complex<double> eizT = std::exp(iz * T);
    const std::complex<double> tail = eizT * (-f(T) / iz + fp(T) / (iz * iz));
    const std::complex<double> oracle = head + tail;
    const std::complex<double> got = k.fourier(z);
    CHECK(std::abs(got - oracle) < 1e-7);
}

TEST_CASE("tabulated kernel interpolates its source") {
    const KernelSpec src = KernelSpec::exponential(0.6, 1.0);
    std::vector<double> t, phi;
    for (int i = 0; i <= 4000; ++i) {
        t.push_back(i * 0.005);
        phi.push_back(src(t.back()));
    }
    const KernelSpec tab = KernelSpec::tabulated(t, phi);
    CHECK(tab.norm() == doctest::Approx(0.6).epsilon(1e-3));
    for (double x : {0.0123, 1.77, 9.5}) {
        CHECK(tab(x) == doctest::Approx(src(x)).epsilon(1e-4));
    }
    CHECK(tab.integral_to(5.0) == doctest::Approx(src.integral_to(5.0)).epsilon(1e-4));
}

TEST_CASE("kernel parameter validation") {
    CHECK_THROWS_AS(KernelSpec::exponential(-0.1, 1.0), config_error);
    CHECK_THROWS_AS(KernelSpec::exponential(0.5, 0.0), config_error);
    CHECK_THROWS_AS(KernelSpec::shifted_power_law(0.5, 0.0, 1.0), config_error);
    CHECK_THROWS_AS(KernelSpec::shifted_power_law(0.5, 0.6, 1.0), config_error);
    CHECK_THROWS_AS(KernelSpec::shifted_power_law(0.5, 0.4, -1.0), config_error);
    CHECK_THROWS_AS(KernelSpec::tabulated({0.0, 1.0}, {1.0}), config_error);
    CHECK_THROWS_AS(KernelSpec::tabulated({1.0, 0.5}, {1.0, 1.0}), config_error);
    CHECK_THROWS_AS(KernelSpec::tabulated({0.0, 1.0}, {1.0, -0.5}), config_error);
}

TEST_CASE("offspring delay sampler matches the normalized kernel CDF") {
    // for the exponential family delays are Exp(b)
    const KernelSpec k = KernelSpec::exponential(0.5, 2.0);
    Rng rng(12345);
    std::vector<double> sample(20000);
    for (double& x : sample) x = k.sample_offspring_delay(rng);
    std::sort(sample.begin(), sample.end());
    const double d =
        ks_statistic(sample, [](double x) { return -std::expm1(-2.0 * x); });
    CHECK(ks_p_value(d, sample.size()) > 1e-3);

    const KernelSpec p = KernelSpec::shifted_power_law(0.9, 0.4, 1.0);
    std::vector<double> ps(20000);
    for (double& x : ps) x = p.sample_offspring_delay(rng);
    std::sort(ps.begin(), ps.end());
    const double dp = ks_statistic(
        ps, [&](double x) { return p.integral_to(x) / p.norm(); });
    CHECK(ks_p_value(dp, ps.size()) > 1e-3);
}

TEST_CASE("kernel JSON round trip") {
    for (const KernelSpec& k :
         {KernelSpec::exponential(0.37, 1.25),
          KernelSpec::shifted_power_law(0.91, 0.45, 2.0),
          KernelSpec::tabulated({0.0, 1.0, 2.0}, {0.3, 0.1, 0.0})}) {
        const KernelSpec back = KernelSpec::from_json(k.to_json());
        CHECK(back.norm() == doctest::Approx(k.norm()).epsilon(1e-14));
        CHECK(back(0.5) == doctest::Approx(k(0.5)).epsilon(1e-14));
    }
    CHECK_THROWS_AS(KernelSpec::from_json({{"family", "nope"}}), config_error);
}

TEST_CASE("near-critical family bookkeeping") {
    const KernelSpec base = KernelSpec::shifted_power_law(1.0, 0.4, 1.0);
    const NearCriticalFamily fam = make_near_critical(base, 100.0, 0.98, 2.0);
    CHECK(fam.alpha() == doctest::Approx(0.4));
    CHECK(fam.rescaled_kernel().norm() == doctest::Approx(0.98).epsilon(1e-13));
    CHECK(fam.assumption5_parameter() ==
          doctest::Approx(100.0 * std::pow(0.02, 1.0 / 0.4)).epsilon(1e-12));
    CHECK(fam.mu() > 0.0);
    CHECK(fam.normalizer() > 0.0);
    // base must carry unit mass
    CHECK_THROWS_AS(
        make_near_critical(KernelSpec::shifted_power_law(0.5, 0.4, 1.0), 100.0,
                           0.98, 2.0),
        config_error);
}

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "hawkes/errors.hpp"
#include "hawkes/kernel.hpp"
#include "hawkes/resolvent.hpp"

using namespace hawkes;

namespace {

// Independent oracle for ψ: truncated Neumann sum Σ_k φ^{*k} with each
// convolution power built by direct trapezoid convolution on the grid.
// O(K·n²), so keep the grids modest.
std::vector<double> neumann_resolvent(const KernelSpec& spec, double step,
                                      std::size_t n, int max_terms) {
    std::vector<double> phi(n), term(n), psi(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) phi[i] = spec(i * step);
    term = phi;
    for (int k = 0; k < max_terms; ++k) {
        double peak = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            psi[i] += term[i];
            peak = std::max(peak, std::abs(term[i]));
        }
        if (peak < 1e-12) break;
        std::vector<double> next(n, 0.0);
        for (std::size_t i = 1; i < n; ++i) {
            double acc = 0.5 * (phi[0] * term[i] + phi[i] * term[0]);
            for (std::size_t j = 1; j < i; ++j) acc += phi[i - j] * term[j];
            next[i] = acc * step;
        }
        term.swap(next);
    }
    return psi;
}

}  // namespace

TEST_CASE("exponential resolvent matches the closed form") {
    // ψ(t) = a·b·e^{−b(1−a)t}
    const double a = 0.5, b = 1.0;
    const KernelSpec k = KernelSpec::exponential(a, b);
    const ResolventGrid psi = compute_resolvent(k, 1e-3, 30.0);
    double worst = 0.0;
    for (std::size_t i = 0; i < psi.values.size(); ++i) {
        const double t = i * psi.step;
        worst = std::max(worst,
                         std::abs(psi.values[i] - a * b * std::exp(-b * (1 - a) * t)));
    }
    CHECK(worst / (a * b) < 1e-6);
    CHECK(psi(2.0) == doctest::Approx(0.5 * std::exp(-1.0)).epsilon(1e-6));
    CHECK(psi.total_mass() == doctest::Approx(a / (1 - a)).epsilon(1e-14));
    // on-grid mass plus the fitted tail accounts for everything
    CHECK(psi.mass_on_grid() + psi.tail_integral(psi.horizon) ==
          doctest::Approx(psi.total_mass()).epsilon(1e-5));
}

TEST_CASE("power-law resolvent matches the Neumann-sum oracle") {
    const KernelSpec k = KernelSpec::shifted_power_law(0.7, 0.35, 1.0);
    const double step = 5e-3, horizon = 10.0;
    const ResolventGrid psi = compute_resolvent(k, step, horizon);
    const std::size_t n = psi.values.size();
    const std::vector<double> oracle = neumann_resolvent(k, step, n, 60);
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        worst = std::max(worst, std::abs(psi.values[i] - oracle[i]));
    }
    CHECK(worst / psi.values.front() < 2e-3);
    // ψ dominates φ (first Neumann term) everywhere
    for (std::size_t i = 0; i < n; i += 50) {
        CHECK(psi.values[i] >= k(i * step) * (1.0 - 1e-9));
    }
}

TEST_CASE("resolvent input validation and warnings") {
    CHECK_THROWS_AS(compute_resolvent(KernelSpec::exponential(1.0, 1.0), 1e-2, 10.0),
                    criticality_error);
    CHECK_THROWS_AS(compute_resolvent(KernelSpec::exponential(0.5, 1.0), 0.0, 10.0),
                    config_error);
    // a=0.9 exponential on a very short grid leaves >1% of the mass outside
    const ResolventGrid shortg =
        compute_resolvent(KernelSpec::exponential(0.9, 1.0), 1e-2, 2.0);
    CHECK(shortg.horizon_warning);
    const ResolventGrid longg =
        compute_resolvent(KernelSpec::exponential(0.5, 1.0), 1e-2, 40.0);
    CHECK_FALSE(longg.horizon_warning);
}

TEST_CASE("propagator closed form: exponential reference values") {
    // a=1/2, b=1, κ=v=1: ζ(t) = 1 + e^{−t}; ζ(ln 2) = 3/2
    const KernelSpec k = KernelSpec::exponential(0.5, 1.0);
    const PropagatorKernel zeta = propagator_closed_form(k, 1.0, 1.0, 1e-3, 40.0);
    CHECK(zeta.zeta0 == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(zeta.zeta_inf == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(zeta(std::log(2.0)) == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(zeta(3.0) == doctest::Approx(1.0 + std::exp(-3.0)).epsilon(1e-12));
    // ∫_0^x ζ = x + 1 − e^{−x}
    CHECK(zeta.integral_to(2.0) ==
          doctest::Approx(2.0 + 1.0 - std::exp(-2.0)).epsilon(1e-10));
}

TEST_CASE("two independent propagator routes agree") {
    for (const KernelSpec& k : {KernelSpec::exponential(0.9, 1.0),
                                KernelSpec::shifted_power_law(0.6, 0.3, 0.5)}) {
        const double step = 2e-3, horizon = 60.0;
        const ResolventGrid psi = compute_resolvent(k, step, horizon);
        const PropagatorKernel via_psi = propagator_from_resolvent(psi, 2.0, 1.5);
        const PropagatorKernel closed = propagator_closed_form(k, 2.0, 1.5, step, horizon);
        REQUIRE(via_psi.values.size() == closed.values.size());
        double sup = 0.0;
        for (std::size_t i = 0; i < closed.values.size(); ++i) {
            sup = std::max(sup, std::abs(via_psi.values[i] - closed.values[i]));
        }
        CHECK(sup / closed.zeta0 < 1e-4);
        CHECK(via_psi.zeta0 == doctest::Approx(closed.zeta0).epsilon(1e-6));
        CHECK(closed.zeta_inf == doctest::Approx(2.0 * 1.5).epsilon(1e-12));
    }
}

TEST_CASE("martingale identity residual separates true and perturbed kernels") {
    const KernelSpec k = KernelSpec::shifted_power_law(0.8, 0.45, 1.0);
    const PropagatorKernel zeta = propagator_closed_form(k, 1.0, 1.0, 1e-3, 30.0);
    const IdentityResidual ok = check_martingale_identity(zeta, k);
    CHECK(ok.scale == doctest::Approx(zeta.zeta0));
    CHECK(ok.max_abs < 1e-6 * ok.scale);

    // negative control: inflate the transient part by 5%
    PropagatorKernel bad = zeta;
    bad.source.reset();  // force grid evaluation of the tampered values
    for (std::size_t i = 0; i < bad.values.size(); ++i) {
        bad.values[i] = bad.zeta_inf + 1.05 * (bad.values[i] - bad.zeta_inf);
    }
    const IdentityResidual res = check_martingale_identity(bad, k);
    CHECK(res.max_abs > 1e-3 * res.scale);
}

TEST_CASE("critical kernel needs an explicit response scale") {
    const KernelSpec crit = KernelSpec::exponential(1.0, 1.0);
    CHECK_THROWS_AS(propagator_closed_form(crit, 1.0, 1.0, 1e-3, 20.0),
                    config_error);
    const PropagatorKernel zeta =
        propagator_closed_form(crit, 1.0, 1.0, 1e-3, 20.0, 3.0);
    CHECK(zeta.zeta0 == doctest::Approx(3.0));
    CHECK(zeta.zeta_inf == doctest::Approx(0.0));
    // transient only: ζ(x) = ζ(0)·tail mass of φ
    CHECK(zeta(1.0) == doctest::Approx(3.0 * std::exp(-1.0)).epsilon(1e-10));
}

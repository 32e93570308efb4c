#include "hawkes/manipulation.hpp"

#include <cmath>
#include <stdexcept>

#include "hawkes/errors.hpp"

namespace hawkes {

double ImpactModelSpec::f(double v) const {
    if (custom_f) return custom_f(v);
    return impact_scale * std::pow(v, impact_power);
}

double ImpactModelSpec::g(double t) const {
    return g_inf + (1.0 - g_inf) * std::exp(-t / transient_time);
}

double ImpactModelSpec::g1(double x) const {
    return g_inf * x + (1.0 - g_inf) * transient_time * (-std::expm1(-x / transient_time));
}

double ImpactModelSpec::g2(double x) const {
    return 0.5 * g_inf * x * x +
           (1.0 - g_inf) * transient_time *
               (x - transient_time * (-std::expm1(-x / transient_time)));
}

double round_trip_cost(const ImpactModelSpec& model, double v1, double v2, double T) {
    if (v1 <= 0.0 || v2 <= 0.0 || T <= 0.0)
        throw config_error("round trip needs v1, v2, T > 0");
    const double theta = v2 / (v1 + v2);
    // Cost = ∫ buy-rate·(P−P0) − ∫ sell-rate·(P−P0); with the price response
    // f(u)·G this collapses to three double integrals of G, i.e. G2 values:
    //   E = v1 f(v1) G2(θT) + v2 f(v2) G2((1−θ)T)
    //       − v2 f(v1) [G2(T) − G2(θT) − G2((1−θ)T)]
    const double g2a = model.g2(theta * T);
    const double g2b = model.g2((1.0 - theta) * T);
    return v1 * model.f(v1) * g2a + v2 * model.f(v2) * g2b -
           v2 * model.f(v1) * (model.g2(T) - g2a - g2b);
}

double normalized_round_trip_cost(const ImpactModelSpec& model, double v1, double v2,
                                  double T) {
    const double s = v1 + v2;
    return round_trip_cost(model, v1, v2, T) * s * s / (T * T * v1 * v2);
}

double round_trip_leading_term(const ImpactModelSpec& model, double v1, double v2) {
    return 0.5 * model.g_inf * (v1 * model.f(v2) - v2 * model.f(v1));
}

RoundTripExtrapolation round_trip_extrapolate(const ImpactModelSpec& model, double v1,
                                              double v2,
                                              std::span<const double> T_sequence) {
    if (T_sequence.empty())
        throw config_error("round-trip extrapolation needs at least one horizon");

    RoundTripExtrapolation out;
    for (double T : T_sequence) {
        out.T.push_back(T);
        out.normalized.push_back(normalized_round_trip_cost(model, v1, v2, T));
        out.rate_constant =
            std::max(out.rate_constant, std::abs(out.normalized.back()) * T);
    }

    const std::size_t n = out.T.size();
    if (n >= 3) {
        // quadratic in x = 1/T through the last three points, read off x = 0
        const double x0 = 1.0 / out.T[n - 3], x1 = 1.0 / out.T[n - 2],
                     x2 = 1.0 / out.T[n - 1];
        const double y0 = out.normalized[n - 3], y1 = out.normalized[n - 2],
                     y2 = out.normalized[n - 1];
        out.extrapolated = y0 * x1 * x2 / ((x0 - x1) * (x0 - x2)) +
                           y1 * x0 * x2 / ((x1 - x0) * (x1 - x2)) +
                           y2 * x0 * x1 / ((x2 - x0) * (x2 - x1));
    } else if (n == 2) {
        const double x0 = 1.0 / out.T[0], x1 = 1.0 / out.T[1];
        out.extrapolated =
            (out.normalized[1] * x0 - out.normalized[0] * x1) / (x0 - x1);
    } else {
        out.extrapolated = out.normalized.back();
    }
    return out;
}

ManipulationVerdict manipulation_scan(const ImpactModelSpec& model,
                                      std::span<const double> v1s,
                                      std::span<const double> v2s,
                                      std::span<const double> T_sequence) {
    ManipulationVerdict verdict;
    for (double v1 : v1s) {
        for (double v2 : v2s) {
            auto ext = round_trip_extrapolate(model, v1, v2, T_sequence);
            // flag only decisively negative limits; roundoff and the vanishing
            // linear-f case sit within the guard
            const double guard =
                1e-9 * (1.0 + std::abs(v1 * model.f(v2)) + std::abs(v2 * model.f(v1)));
            ManipulationVerdict::Point p{v1, v2, ext.extrapolated,
                                         ext.extrapolated < -guard};
            verdict.manipulable = verdict.manipulable || p.flagged;
            verdict.points.push_back(p);
        }
    }
    return verdict;
}

namespace {

double inverse_stiffness(const InvestorPopulation& pop) {
    if (pop.investors.empty())
        throw std::domain_error("indifference price of an empty population");
    double s = 0.0;
    for (const auto& inv : pop.investors) {
        if (inv.risk_aversion <= 0.0 || inv.variance <= 0.0)
            throw std::domain_error("investors need positive risk aversion and variance");
        s += 1.0 / (2.0 * inv.risk_aversion * inv.variance);
    }
    return s;
}

}  // namespace

double indifference_price(const InvestorPopulation& pop) {
    const double denom = inverse_stiffness(pop);
    double num = 0.0;
    for (const auto& inv : pop.investors)
        num += inv.yield / (2.0 * inv.risk_aversion * inv.variance);
    return (num - pop.shares) / denom;
}

SupplyShift price_after_supply_shift(const InvestorPopulation& pop, double n0) {
    const double k = 1.0 / inverse_stiffness(pop);
    return {indifference_price(pop) + k * n0, k};
}

}  // namespace hawkes

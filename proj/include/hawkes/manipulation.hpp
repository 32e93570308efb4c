#pragma once

#include <functional>
#include <span>
#include <vector>

namespace hawkes {

// Expected-cost model for continuous round-trip trading: trading at rate u
// moves the price by f(u)·G(age) per unit time, with f(v) = scale·v^power (a
// custom f may be supplied for scans) and decay kernel
// G(t) = G_∞ + (1−G_∞)·e^{−t/transient_time}, G nonincreasing to G_∞ ≥ 0.
struct ImpactModelSpec {
    double impact_scale = 1.0;
    double impact_power = 1.0;
    double g_inf = 1.0;
    double transient_time = 1.0;
    std::function<double(double)> custom_f;  // overrides the power family if set

    double f(double v) const;
    double g(double t) const;
    double g1(double x) const;  // ∫_0^x G
    double g2(double x) const;  // ∫_0^x G1
};

// Expected cost of the round trip that buys at rate v1 on [0, θT] and sells at
// rate v2 on [θT, T], θ = v2/(v1+v2) (zero net inventory).  Negative cost is a
// price manipulation.
double round_trip_cost(const ImpactModelSpec& model, double v1, double v2, double T);

// E·(v1+v2)²/(T²·v1·v2): finite T→∞ limit ½·G_∞·(v1·f(v2) − v2·f(v1)).
double normalized_round_trip_cost(const ImpactModelSpec& model, double v1, double v2,
                                  double T);
double round_trip_leading_term(const ImpactModelSpec& model, double v1, double v2);

// Normalized cost along a T sequence plus its T→∞ value by polynomial-in-1/T
// extrapolation through the last three points (the transient correction decays
// like 1/T for this G family).
struct RoundTripExtrapolation {
    std::vector<double> T;
    std::vector<double> normalized;
    double extrapolated = 0.0;
    double rate_constant = 0.0;  // max |normalized|·T, for O(1/T) decay checks
};
RoundTripExtrapolation round_trip_extrapolate(const ImpactModelSpec& model, double v1,
                                              double v2,
                                              std::span<const double> T_sequence);

// Grid scan: a model is manipulable if any (v1, v2) pair has a negative
// extrapolated normalized cost.  Linear f scans clean; strictly concave or
// convex f with G_∞ > 0 gets flagged (in opposite (v1,v2) orderings).
struct ManipulationVerdict {
    struct Point {
        double v1 = 0.0, v2 = 0.0;
        double extrapolated = 0.0;
        bool flagged = false;
    };
    bool manipulable = false;
    std::vector<Point> points;
};
ManipulationVerdict manipulation_scan(const ImpactModelSpec& model,
                                      std::span<const double> v1s,
                                      std::span<const double> v2s,
                                      std::span<const double> T_sequence);

// Mean-variance investors: investor i holds N_i = (E_i − P)/(2λ_i Σ_i) shares;
// the indifference price clears the fixed supply.
struct Investor {
    double yield = 0.0;          // E_i
    double risk_aversion = 0.0;  // λ_i
    double variance = 0.0;       // Σ_i
};
struct InvestorPopulation {
    std::vector<Investor> investors;
    double shares = 0.0;  // N
};
double indifference_price(const InvestorPopulation& pop);

// Price after a buyer absorbs n0 shares of the supply: P⁺ = P + k·n0 with
// k = 1/Σ 1/(2λ_iΣ_i) — impact exactly linear in n0.
struct SupplyShift {
    double price = 0.0;
    double impact_coefficient = 0.0;  // k
};
SupplyShift price_after_supply_shift(const InvestorPopulation& pop, double n0);

}  // namespace hawkes

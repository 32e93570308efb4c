#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hawkes/kernel.hpp"

namespace hawkes {

enum class Side { Buy, Sell };
enum class EventLabel : int { Anonymous = 0, Metaorder = 1 };

// One realized point-process path on [0, horizon].  cluster_ids / labels are
// either empty or parallel to times.
struct EventStream {
    double horizon = 0.0;
    Side side = Side::Buy;
    std::vector<double> times;
    std::vector<std::int64_t> cluster_ids;
    std::vector<EventLabel> labels;
    std::uint64_t seed = 0;

    std::size_t size() const { return times.size(); }
    // events in (from, to]
    std::size_t count_in(double from, double to) const;
};

struct MetaorderSpec {
    double rate = 0.0;      // F
    double duration = 0.0;  // τ
    Side side = Side::Buy;
};

struct MarketConfig {
    KernelSpec kernel = KernelSpec::zero();
    double mu = 0.0;  // baseline intensity per side
    double horizon = 0.0;
    double burn_in = -1.0;  // < 0: default 50 kernel e-folding times
    MetaorderSpec metaorder;
    bool metaorder_feedback = false;  // reserved; rejected if set
    std::uint64_t seed = 0;
    double history_cutoff = 1e-12;  // drop per-event intensity terms below this
};

double effective_burn_in(const MarketConfig& cfg);

// Ogata thinning.  `stream` selects the RNG substream (buy/sell/...).
EventStream simulate_thinning(const MarketConfig& cfg, Side side = Side::Buy,
                              std::uint64_t stream = 0);

// Poisson-cluster (branching) representation: migrants at rate μ, each event
// spawns Poisson(∫φ) children at φ/∫φ delays.  Clusters are generated to
// completion (sizes are horizon-free); the emitted stream is truncated to the
// horizon.
struct ClusterRecord {
    double migrant_time = 0.0;
    std::uint64_t size = 0;    // migrant + all progeny
    double duration = 0.0;     // last event minus migrant time
};
struct BranchingResult {
    EventStream stream;
    std::vector<ClusterRecord> clusters;
};
BranchingResult simulate_branching(const MarketConfig& cfg, Side side = Side::Buy,
                                   std::uint64_t stream = 0);

// Two independent Hawkes flows plus the labeled metaorder overlay (a Poisson
// stream on [0, τ] that does not excite the anonymous flows).
struct MarketPaths {
    EventStream buy, sell, metaorder;
};
MarketPaths simulate_market(const MarketConfig& cfg);

// Merge two sorted streams of the same side (e.g. anonymous flow + overlay).
EventStream merge_streams(const EventStream& a, const EventStream& b);

// Anonymous flow of one side plus the metaorder overlay when it trades that side.
EventStream total_flow(const MarketPaths& paths, Side side);

struct ClusterStats {
    std::size_t n_clusters = 0;
    double mean_size = 0.0;
    double se_size = 0.0;
    double mean_duration = 0.0;
};
ClusterStats cluster_statistics(std::span<const ClusterRecord> clusters);
// Truncated view from a stream's cluster ids (sizes count in-horizon events only).
ClusterStats cluster_statistics(const EventStream& stream);

// Time-rescaling: compensator increments between consecutive events.  For a
// path started empty at 0 these are iid Exp(1) iff the law is (μ, φ)-Hawkes.
std::vector<double> compensator_gaps(const EventStream& stream, const KernelSpec& spec,
                                     double mu);

// λ(t+) = μ + Σ_{t_i <= t} φ(t - t_i)
double intensity_at(const EventStream& stream, const KernelSpec& spec, double mu,
                    double t);

inline double stationary_rate(const KernelSpec& spec, double mu) {
    return mu / (1.0 - spec.norm());
}

}  // namespace hawkes

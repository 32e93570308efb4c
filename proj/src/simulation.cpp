#include "hawkes/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "hawkes/errors.hpp"
#include "hawkes/parallel.hpp"

namespace hawkes {

namespace {

// Nonincreasing upper bound for φ, needed by the thinning sampler: once the
// intensity bound is anchored at time t0, event ages only grow, so a
// nonincreasing majorant guarantees λ(t) ≤ λ̄ for all t > t0.  Exponential and
// shifted-power-law kernels are already monotone; tabulated samples may wiggle,
// so we take the running suffix maximum of the node values.
class DecreasingMajorant {
public:
    explicit DecreasingMajorant(const KernelSpec& spec) : spec_(&spec) {
        if (spec.family() != KernelFamily::Tabulated) return;
        const auto& phi = spec.table_values();
        env_.assign(phi.begin(), phi.end());
        for (std::size_t i = env_.size() - 1; i-- > 0;)
            env_[i] = std::max(env_[i], env_[i + 1]);
    }

    double operator()(double age) const {
        if (env_.empty()) return (*spec_)(age);
        const auto& t = spec_->table_times();
        if (age >= t.back()) return (*spec_)(age);  // fitted tail is monotone
        auto it = std::upper_bound(t.begin(), t.end(), age);
        std::size_t i = static_cast<std::size_t>(it - t.begin()) - 1;
        double w = (age - t[i]) / (t[i + 1] - t[i]);
        return env_[i] + w * (env_[i + 1] - env_[i]);
    }

private:
    const KernelSpec* spec_;
    std::vector<double> env_;
};

constexpr std::uint64_t kClusterEventCap = 20'000'000;

}  // namespace

std::size_t EventStream::count_in(double from, double to) const {
    auto lo = std::upper_bound(times.begin(), times.end(), from);
    auto hi = std::upper_bound(times.begin(), times.end(), to);
    return static_cast<std::size_t>(hi - lo);
}

double effective_burn_in(const MarketConfig& cfg) {
    if (cfg.burn_in >= 0.0) return cfg.burn_in;
    if (cfg.kernel.norm() <= 0.0) return 0.0;
    return 50.0 * cfg.kernel.characteristic_time();
}

EventStream simulate_thinning(const MarketConfig& cfg, Side side, std::uint64_t stream) {
    if (cfg.mu < 0.0) throw config_error("baseline intensity must be nonnegative");
    if (cfg.horizon <= 0.0) throw config_error("horizon must be positive");
    if (cfg.kernel.norm() >= 1.0)
        throw criticality_error("thinning sampler requires a subcritical kernel "
                                "(∫φ < 1); the flow is unstable at ∫φ = " +
                                std::to_string(cfg.kernel.norm()));

    const KernelSpec& phi = cfg.kernel;
    const double burn = effective_burn_in(cfg);
    const double span = burn + cfg.horizon;
    const bool expo = phi.family() == KernelFamily::Exponential;
    const DecreasingMajorant bound(phi);

    EventStream out;
    out.horizon = cfg.horizon;
    out.side = side;
    out.seed = substream_seed(cfg.seed, stream, 0);
    Rng rng(out.seed);

    std::vector<double> hist;          // accepted event times (internal clock)
    std::size_t live = 0;              // first history index still above cutoff
    double t = 0.0;
    double state = 0.0;  // exponential only: Σ a·b·e^{-b(t - t_i)}, exact

    auto excitation_bound = [&](double now) {
        if (expo) return state;
        double s = 0.0;
        while (live < hist.size() && bound(now - hist[live]) < cfg.history_cutoff)
            ++live;
        for (std::size_t i = live; i < hist.size(); ++i) s += bound(now - hist[i]);
        return s;
    };
    auto excitation_exact = [&](double now) {
        if (expo) return state;
        double s = 0.0;
        for (std::size_t i = live; i < hist.size(); ++i) s += phi(now - hist[i]);
        return s;
    };

    while (true) {
        double lambda_bar = cfg.mu + excitation_bound(t);
        if (lambda_bar <= 0.0) break;  // nothing can ever fire again
        double w = rng.exponential(lambda_bar);
        t += w;
        if (t > span) break;
        if (expo) state *= std::exp(-phi.rate() * w);
        double lambda = cfg.mu + excitation_exact(t);
        if (rng.uniform() * lambda_bar <= lambda) {
            hist.push_back(t);
            if (expo) state += phi.branching_ratio() * phi.rate();
        }
        // on reject the loop re-anchors the bound at the new t (it only tightens)
    }

    out.times.reserve(hist.size());
    for (double s : hist)
        if (s >= burn) out.times.push_back(s - burn);
    return out;
}

BranchingResult simulate_branching(const MarketConfig& cfg, Side side,
                                   std::uint64_t stream) {
    if (cfg.mu < 0.0) throw config_error("baseline intensity must be nonnegative");
    if (cfg.horizon <= 0.0) throw config_error("horizon must be positive");
    const double a = cfg.kernel.norm();
    if (a >= 1.0)
        throw criticality_error(
            "branching sampler needs ∫φ < 1 (cluster sizes are infinite in mean "
            "at criticality); got " +
            std::to_string(a));

    const double burn = effective_burn_in(cfg);
    const double span = burn + cfg.horizon;

    BranchingResult res;
    res.stream.horizon = cfg.horizon;
    res.stream.side = side;
    res.stream.seed = substream_seed(cfg.seed, stream, 0);
    Rng rng(res.stream.seed);

    std::vector<std::pair<double, std::int64_t>> emitted;
    std::vector<double> cluster;  // scratch: one genealogy at a time
    std::int64_t id = 0;
    double tm = 0.0;
    while (cfg.mu > 0.0) {
        tm += rng.exponential(cfg.mu);
        if (tm > span) break;

        // grow the whole genealogy; children are appended and later processed
        cluster.assign(1, tm);
        for (std::size_t k = 0; k < cluster.size(); ++k) {
            std::uint64_t n = rng.poisson(a);
            for (std::uint64_t j = 0; j < n; ++j)
                cluster.push_back(cluster[k] + cfg.kernel.sample_offspring_delay(rng));
            if (cluster.size() > kClusterEventCap)
                throw numerical_error("cluster growth runaway (branching ratio too "
                                      "close to 1 for this sampler)");
        }

        double last = *std::max_element(cluster.begin(), cluster.end());
        res.clusters.push_back({tm - burn, cluster.size(), last - tm});
        for (double s : cluster)
            if (s >= burn && s <= span) emitted.emplace_back(s - burn, id);
        ++id;
    }

    std::sort(emitted.begin(), emitted.end());
    res.stream.times.reserve(emitted.size());
    res.stream.cluster_ids.reserve(emitted.size());
    for (auto& [s, cid] : emitted) {
        res.stream.times.push_back(s);
        res.stream.cluster_ids.push_back(cid);
    }
    return res;
}

MarketPaths simulate_market(const MarketConfig& cfg) {
    if (cfg.metaorder_feedback)
        throw config_error(
            "metaorder_feedback is reserved: the executed flow is modeled as a "
            "non-exciting overlay");

    MarketPaths paths;
    paths.buy = simulate_thinning(cfg, Side::Buy, 0);
    paths.sell = simulate_thinning(cfg, Side::Sell, 1);

    const MetaorderSpec& mo = cfg.metaorder;
    paths.metaorder.horizon = cfg.horizon;
    paths.metaorder.side = mo.side;
    paths.metaorder.seed = substream_seed(cfg.seed, 2, 0);
    if (mo.rate > 0.0 && mo.duration > 0.0) {
        if (mo.rate < 0.0 || mo.duration < 0.0)
            throw config_error("metaorder rate and duration must be nonnegative");
        Rng rng(paths.metaorder.seed);
        double end = std::min(mo.duration, cfg.horizon);
        double t = 0.0;
        while ((t += rng.exponential(mo.rate)) <= end) {
            paths.metaorder.times.push_back(t);
            paths.metaorder.labels.push_back(EventLabel::Metaorder);
        }
    }
    return paths;
}

EventStream merge_streams(const EventStream& a, const EventStream& b) {
    if (a.side != b.side)
        throw config_error("cannot merge event streams of opposite sides");

    EventStream out;
    out.horizon = std::max(a.horizon, b.horizon);
    out.side = a.side;
    out.seed = a.seed;

    const bool labels = !a.labels.empty() || !b.labels.empty();
    const bool ids = !a.cluster_ids.empty() || !b.cluster_ids.empty();
    std::size_t i = 0, j = 0;
    auto take = [&](const EventStream& s, std::size_t k) {
        out.times.push_back(s.times[k]);
        if (labels)
            out.labels.push_back(s.labels.empty() ? EventLabel::Anonymous : s.labels[k]);
        if (ids)
            out.cluster_ids.push_back(s.cluster_ids.empty() ? -1 : s.cluster_ids[k]);
    };
    while (i < a.times.size() || j < b.times.size()) {
        bool from_a = j >= b.times.size() ||
                      (i < a.times.size() && a.times[i] <= b.times[j]);
        if (from_a)
            take(a, i++);
        else
            take(b, j++);
    }
    return out;
}

EventStream total_flow(const MarketPaths& paths, Side side) {
    const EventStream& base = side == Side::Buy ? paths.buy : paths.sell;
    if (paths.metaorder.side == side && !paths.metaorder.times.empty())
        return merge_streams(base, paths.metaorder);
    return base;
}

ClusterStats cluster_statistics(std::span<const ClusterRecord> clusters) {
    ClusterStats st;
    st.n_clusters = clusters.size();
    if (clusters.empty()) return st;
    std::vector<double> sizes(clusters.size());
    double dur = 0.0;
    for (std::size_t i = 0; i < clusters.size(); ++i) {
        sizes[i] = static_cast<double>(clusters[i].size);
        dur += clusters[i].duration;
    }
    auto [mean, se] = mean_and_se(sizes);
    st.mean_size = mean;
    st.se_size = se;
    st.mean_duration = dur / static_cast<double>(clusters.size());
    return st;
}

ClusterStats cluster_statistics(const EventStream& stream) {
    if (stream.cluster_ids.size() != stream.times.size())
        throw config_error("stream has no cluster labels");
    std::map<std::int64_t, std::pair<double, double>> range;  // id -> (first, last)
    std::map<std::int64_t, std::uint64_t> count;
    for (std::size_t i = 0; i < stream.times.size(); ++i) {
        auto id = stream.cluster_ids[i];
        auto [it, fresh] = range.try_emplace(id, stream.times[i], stream.times[i]);
        if (!fresh) it->second.second = stream.times[i];
        ++count[id];
    }
    std::vector<ClusterRecord> recs;
    recs.reserve(count.size());
    for (auto& [id, n] : count)
        recs.push_back({range[id].first, n, range[id].second - range[id].first});
    return cluster_statistics(recs);
}

std::vector<double> compensator_gaps(const EventStream& stream, const KernelSpec& spec,
                                     double mu) {
    const auto& t = stream.times;
    std::vector<double> gaps;
    gaps.reserve(t.size());

    if (spec.family() == KernelFamily::Exponential) {
        const double a = spec.branching_ratio(), b = spec.rate();
        double prev = 0.0, decayed = 0.0;  // Σ_{t_i ≤ prev} e^{-b(prev - t_i)}
        for (double tk : t) {
            double d = tk - prev;
            double shrink = std::exp(-b * d);
            gaps.push_back(mu * d + a * (1.0 - shrink) * decayed);
            decayed = decayed * shrink + 1.0;
            prev = tk;
        }
        return gaps;
    }

    double prev = 0.0;
    for (std::size_t k = 0; k < t.size(); ++k) {
        double g = mu * (t[k] - prev);
        for (std::size_t i = 0; i < k; ++i)
            g += spec.integral_to(t[k] - t[i]) - spec.integral_to(prev - t[i]);
        gaps.push_back(g);
        prev = t[k];
    }
    return gaps;
}

double intensity_at(const EventStream& stream, const KernelSpec& spec, double mu,
                    double t) {
    auto end = std::upper_bound(stream.times.begin(), stream.times.end(), t);
    double s = mu;
    for (auto it = stream.times.begin(); it != end; ++it) s += spec(t - *it);
    return s;
}

}  // namespace hawkes

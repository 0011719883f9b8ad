#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <stdexcept>
#include <thread>
#include <utility>
#include <vector>

#include "laes/env.hpp"
#include "laes/learning.hpp"
#include "laes/network.hpp"
#include "laes/policy.hpp"
#include "laes/rng.hpp"

namespace laes {

/// Per-link success metric written to result tables: packets delivered per
/// slot (the default) or the fraction of slots the link was scheduled.
enum class DeliveryRatioKind { DeliveredPerSlot, ScheduledPerSlot };

struct EngineOptions {
    std::int64_t horizon = 30000;
    std::int64_t stride = 0; // 0 = auto: every slot up to 1e5, else every 100th
    RewardLaw reward_law = RewardLaw::Bernoulli;
    TieBreak tie_break = TieBreak::LowestIndex;
    DeliveryRatioKind ratio_kind = DeliveryRatioKind::DeliveredPerSlot;

    std::int64_t effective_stride() const {
        if (stride > 0) return stride;
        return horizon <= 100000 ? 1 : 100;
    }
};

/// Everything that happened in one slot; handed to an optional observer.
struct SlotRecord {
    std::int64_t t = 0;
    ChannelState channels;
    Schedule chosen;
    Schedule genie;
    double regret_increment = 0.0; // true-mean gap between genie and chosen
    std::int64_t total_age = 0;    // sum of ages at the start of the slot
    std::vector<int> delivered;    // links with S_n * C_n = 1
};

using SlotObserver = std::function<void(const SlotRecord&)>;

/// Time series of one replication, recorded every `stride` slots (plus the
/// final slot). Row i describes the prefix of `slots[i]` completed slots.
struct ReplicationSeries {
    std::uint64_t seed = 0;
    std::int64_t n_links = 0;
    std::vector<std::int64_t> slots;
    std::vector<double> cum_regret;      // nondecreasing
    std::vector<double> avg_total_age;   // (1/t) sum_{tau<t} V(tau), includes V(0)=0
    std::vector<std::int64_t> total_age; // V(t): instantaneous total age
    std::vector<double> delivery_ratio;  // row-major rows x N
    std::vector<std::int64_t> final_deliveries;
    std::vector<std::int64_t> final_scheduled;
    // slots where the running average total age exceeded (eta+1)N^2/p_min;
    // checked every slot for Laes/AgeBased, stays 0 if the guarantee holds
    std::int64_t age_bound_violations = 0;

    double ratio_at(std::size_t row, int link) const {
        return delivery_ratio[row * static_cast<std::size_t>(n_links) +
                              static_cast<std::size_t>(link)];
    }
};

/// True-mean regret of `chosen` against `genie` for one slot:
/// sum_n mu_n C_n (S*_n - S_n). Uses means, not realized rewards.
inline double per_slot_regret(const NetworkConfig& config, const ChannelState& channels,
                              const Schedule& genie, const Schedule& chosen) {
    std::vector<double> mu = config.mean_rewards();
    return schedule_value(mu, channels.on, genie) - schedule_value(mu, channels.on, chosen);
}

/// Run one replication of `policy` for options.horizon slots.
///
/// Slot order: sample channels, policy decision from the current state,
/// genie decision on the same channels, realize rewards for delivered
/// links, then advance ages and counts. The exact age identity
/// V(t+1) = V(t) - sum_n Z_n(t) C_n(t) S_n(t) + N is verified every slot.
inline ReplicationSeries run_replication(const NetworkConfig& config, const PolicySpec& policy,
                                         const EngineOptions& options, std::uint64_t seed,
                                         const SlotObserver* observer = nullptr) {
    config.validate();
    if (options.horizon < 1) throw std::invalid_argument("run_replication: horizon must be >= 1");
    if (policy.kind == PolicyKind::Laes && !(policy.eta >= 0.0))
        throw std::invalid_argument("run_replication: laes eta must be >= 0");

    const int n_links = config.size();
    const std::int64_t horizon = options.horizon;
    const std::int64_t stride = options.effective_stride();
    const RewardModel reward_model = RewardModel::make(options.reward_law, config);
    const std::vector<double> mu = config.mean_rewards();

    // freshness guarantee, applicable to the age-aware policies
    const bool check_age_bound =
        policy.kind == PolicyKind::Laes || policy.kind == PolicyKind::AgeBased;
    const double eta = policy.kind == PolicyKind::Laes ? policy.eta : 0.0;
    const double age_bound_value =
        (eta + 1.0) * static_cast<double>(n_links) * static_cast<double>(n_links) /
        config.p_min();

    RngStream rng(seed);
    LearningState state(n_links);

    ReplicationSeries series;
    series.seed = seed;
    series.n_links = n_links;
    const std::size_t rows =
        static_cast<std::size_t>((horizon + stride - 1) / stride);
    series.slots.reserve(rows);
    series.cum_regret.reserve(rows);
    series.avg_total_age.reserve(rows);
    series.total_age.reserve(rows);
    series.delivery_ratio.reserve(rows * static_cast<std::size_t>(n_links));

    double cum_regret = 0.0;
    double age_sum = 0.0; // sum over slots of V(t); V fits integers but the mean is real
    std::int64_t delivered_link_slots = 0;
    std::vector<std::pair<int, double>> rewards;

    for (std::int64_t t = 0; t < horizon; ++t) {
        const ChannelState channels = sample_channels(config, rng);
        const Schedule chosen = decide(policy, config, state, channels, options.tie_break, &rng);
        // genie_decide with the hoisted mean vector; ties resolved deterministically
        const Schedule genie = max_weight_schedule(config, mu, channels.on);

        const std::int64_t total_age_before = state.total_age();
        double delta = schedule_value(mu, channels.on, genie) -
                       schedule_value(mu, channels.on, chosen);
        if (delta < 0.0) delta = 0.0; // argmax float ties can round a hair below zero

        rewards.clear();
        std::int64_t served_age = 0;
        for (int n : chosen.active)
            if (channels.on[n]) {
                rewards.emplace_back(n, sample_reward(reward_model, n, rng));
                served_age += state.links[n].age;
                ++delivered_link_slots;
            }

        if (observer) {
            SlotRecord rec;
            rec.t = t;
            rec.channels = channels;
            rec.chosen = chosen;
            rec.genie = genie;
            rec.regret_increment = delta;
            rec.total_age = total_age_before;
            for (const auto& [n, x] : rewards) rec.delivered.push_back(n);
            (*observer)(rec);
        }

        update_after_slot(state, chosen, channels.on, rewards);

        if (state.total_age() != total_age_before - served_age + n_links)
            throw std::logic_error("run_replication: age identity violated");

        cum_regret += delta;
        age_sum += static_cast<double>(total_age_before);
        const std::int64_t prefix = t + 1;
        const double avg_age = age_sum / static_cast<double>(prefix);
        if (check_age_bound && avg_age > age_bound_value) ++series.age_bound_violations;

        if (prefix % stride == 0 || prefix == horizon) {
            series.slots.push_back(prefix);
            series.cum_regret.push_back(cum_regret);
            series.avg_total_age.push_back(avg_age);
            series.total_age.push_back(state.total_age());
            for (int n = 0; n < n_links; ++n) {
                const std::int64_t count = options.ratio_kind == DeliveryRatioKind::DeliveredPerSlot
                                               ? state.links[n].deliveries
                                               : state.links[n].scheduled;
                series.delivery_ratio.push_back(static_cast<double>(count) /
                                                static_cast<double>(prefix));
            }
        }
    }

    std::int64_t total_deliveries = 0;
    for (int n = 0; n < n_links; ++n) {
        series.final_deliveries.push_back(state.links[n].deliveries);
        series.final_scheduled.push_back(state.links[n].scheduled);
        total_deliveries += state.links[n].deliveries;
    }
    if (total_deliveries != delivered_link_slots)
        throw std::logic_error("run_replication: delivery count identity violated");
    return series;
}

/// Replication-averaged series: means and standard errors across
/// replications, row for row.
struct ExperimentResult {
    PolicySpec policy;
    int n_links = 0;
    std::int64_t horizon = 0;
    std::int64_t stride = 1;
    int replications = 0;
    std::uint64_t master_seed = 0;

    std::vector<std::int64_t> slots;
    std::vector<double> regret_mean, regret_stderr;
    std::vector<double> avg_age_mean, avg_age_stderr;
    std::vector<double> total_age_mean;
    std::vector<double> ratio_mean, ratio_stderr; // row-major rows x N

    std::vector<ReplicationSeries> reps; // per-replication series, index order

    double ratio_mean_at(std::size_t row, int link) const {
        return ratio_mean[row * static_cast<std::size_t>(n_links) +
                          static_cast<std::size_t>(link)];
    }
    double ratio_stderr_at(std::size_t row, int link) const {
        return ratio_stderr[row * static_cast<std::size_t>(n_links) +
                            static_cast<std::size_t>(link)];
    }
};

namespace detail {

inline void mean_stderr(const std::vector<ReplicationSeries>& reps, std::size_t row,
                        const std::vector<double> ReplicationSeries::* field, double& mean_out,
                        double& stderr_out) {
    const std::size_t r_count = reps.size();
    double sum = 0.0;
    for (const auto& r : reps) sum += (r.*field)[row];
    const double mean = sum / static_cast<double>(r_count);
    double sq = 0.0;
    for (const auto& r : reps) {
        const double d = (r.*field)[row] - mean;
        sq += d * d;
    }
    mean_out = mean;
    stderr_out = r_count > 1
                     ? std::sqrt(sq / static_cast<double>(r_count - 1) /
                                 static_cast<double>(r_count))
                     : 0.0;
}

} // namespace detail

/// Run `replications` independent replications (seed substreams derived
/// from master_seed and the replication index) and aggregate them.
///
/// The result is bit-identical for a fixed (master_seed, replications,
/// horizon) regardless of `workers`: replications are dispatched to a pool
/// but stored and reduced in index order.
inline ExperimentResult run_experiment(const NetworkConfig& config, const PolicySpec& policy,
                                       const EngineOptions& options, int replications,
                                       std::uint64_t master_seed, int workers = 1) {
    if (replications < 1)
        throw std::invalid_argument("run_experiment: replications must be >= 1");

    std::vector<ReplicationSeries> reps(replications);
    const int n_workers = std::max(1, std::min(workers, replications));
    if (n_workers == 1) {
        for (int r = 0; r < replications; ++r)
            reps[r] = run_replication(config, policy, options,
                                      RngStream::substream(master_seed, r).next_u64());
    } else {
        std::atomic<int> next{0};
        std::exception_ptr failure;
        std::atomic<bool> failed{false};
        auto work = [&] {
            for (;;) {
                const int r = next.fetch_add(1);
                if (r >= replications || failed.load()) return;
                try {
                    reps[r] = run_replication(config, policy, options,
                                              RngStream::substream(master_seed, r).next_u64());
                } catch (...) {
                    if (!failed.exchange(true)) failure = std::current_exception();
                    return;
                }
            }
        };
        std::vector<std::thread> pool;
        pool.reserve(n_workers);
        for (int i = 0; i < n_workers; ++i) pool.emplace_back(work);
        for (auto& th : pool) th.join();
        if (failed.load()) std::rethrow_exception(failure);
    }

    ExperimentResult result;
    result.policy = policy;
    result.n_links = config.size();
    result.horizon = options.horizon;
    result.stride = options.effective_stride();
    result.replications = replications;
    result.master_seed = master_seed;
    result.slots = reps.front().slots;

    const std::size_t rows = result.slots.size();
    result.regret_mean.resize(rows);
    result.regret_stderr.resize(rows);
    result.avg_age_mean.resize(rows);
    result.avg_age_stderr.resize(rows);
    result.total_age_mean.resize(rows);
    result.ratio_mean.resize(rows * static_cast<std::size_t>(result.n_links));
    result.ratio_stderr.resize(rows * static_cast<std::size_t>(result.n_links));
    for (std::size_t i = 0; i < rows; ++i) {
        detail::mean_stderr(reps, i, &ReplicationSeries::cum_regret, result.regret_mean[i],
                            result.regret_stderr[i]);
        detail::mean_stderr(reps, i, &ReplicationSeries::avg_total_age, result.avg_age_mean[i],
                            result.avg_age_stderr[i]);
        double sum = 0.0;
        for (const auto& r : reps) sum += static_cast<double>(r.total_age[i]);
        result.total_age_mean[i] = sum / static_cast<double>(replications);
        for (int n = 0; n < result.n_links; ++n) {
            double rs = 0.0;
            for (const auto& r : reps) rs += r.ratio_at(i, n);
            const double mean = rs / static_cast<double>(replications);
            double sq = 0.0;
            for (const auto& r : reps) {
                const double d = r.ratio_at(i, n) - mean;
                sq += d * d;
            }
            const std::size_t cell = i * static_cast<std::size_t>(result.n_links) +
                                     static_cast<std::size_t>(n);
            result.ratio_mean[cell] = mean;
            result.ratio_stderr[cell] =
                replications > 1 ? std::sqrt(sq / static_cast<double>(replications - 1) /
                                             static_cast<double>(replications))
                                 : 0.0;
        }
    }
    result.reps = std::move(reps);
    return result;
}

} // namespace laes

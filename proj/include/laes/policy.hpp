#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

#include "laes/env.hpp"
#include "laes/learning.hpp"
#include "laes/network.hpp"

namespace laes {

enum class PolicyKind { Laes, UcbOnly, AgeBased, Genie, RoundRobin };

/// Which scheduler to run. `eta` is only meaningful for Laes and trades
/// learning (UCB weight) against freshness (age weight).
struct PolicySpec {
    PolicyKind kind = PolicyKind::Laes;
    double eta = 0.0;

    static PolicySpec laes(double eta) { return {PolicyKind::Laes, eta}; }
    static PolicySpec ucb_only() { return {PolicyKind::UcbOnly, 0.0}; }
    static PolicySpec age_based() { return {PolicyKind::AgeBased, 0.0}; }
    static PolicySpec genie() { return {PolicyKind::Genie, 0.0}; }
    static PolicySpec round_robin() { return {PolicyKind::RoundRobin, 0.0}; }

    /// Short identifier used in file names and table metadata,
    /// e.g. "laes_eta200" or "ucb".
    std::string name() const {
        switch (kind) {
            case PolicyKind::Laes: {
                char buf[48];
                std::snprintf(buf, sizeof(buf), "laes_eta%g", eta);
                return buf;
            }
            case PolicyKind::UcbOnly: return "ucb";
            case PolicyKind::AgeBased: return "age_based";
            case PolicyKind::Genie: return "genie";
            case PolicyKind::RoundRobin: return "round_robin";
        }
        return "?";
    }
};

/// Max-weight schedule with weights Z_n(t) + eta * w_n(t): ages keep every
/// link fresh while the UCB estimates steer exploration toward valuable
/// links.
inline Schedule laes_decide(const NetworkConfig& config, const LearningState& state,
                            const ChannelState& channels, double eta,
                            TieBreak tie = TieBreak::LowestIndex, RngStream* rng = nullptr) {
    if (!(eta >= 0.0)) throw std::invalid_argument("laes_decide: eta must be >= 0");
    std::vector<double> weights(state.links.size());
    for (std::size_t n = 0; n < state.links.size(); ++n)
        weights[n] = static_cast<double>(state.links[n].age) +
                     eta * ucb_estimate(state.links[n], state.slot);
    return max_weight_schedule(config, weights, channels.on, tie, rng);
}

/// Pure learning baseline: weights are the UCB estimates alone.
inline Schedule ucb_only_decide(const NetworkConfig& config, const LearningState& state,
                                const ChannelState& channels,
                                TieBreak tie = TieBreak::LowestIndex, RngStream* rng = nullptr) {
    std::vector<double> weights(state.links.size());
    for (std::size_t n = 0; n < state.links.size(); ++n)
        weights[n] = ucb_estimate(state.links[n], state.slot);
    return max_weight_schedule(config, weights, channels.on, tie, rng);
}

/// Pure freshness baseline: weights are the ages alone (Laes with eta=0).
inline Schedule age_based_decide(const NetworkConfig& config, const LearningState& state,
                                 const ChannelState& channels,
                                 TieBreak tie = TieBreak::LowestIndex, RngStream* rng = nullptr) {
    std::vector<double> weights(state.links.size());
    for (std::size_t n = 0; n < state.links.size(); ++n)
        weights[n] = static_cast<double>(state.links[n].age);
    return max_weight_schedule(config, weights, channels.on, tie, rng);
}

/// Clairvoyant baseline: max-weight under the true mean rewards, given the
/// same realized channels the learner sees.
inline Schedule genie_decide(const NetworkConfig& config, const ChannelState& channels,
                             TieBreak tie = TieBreak::LowestIndex, RngStream* rng = nullptr) {
    std::vector<double> mu = config.mean_rewards();
    return max_weight_schedule(config, mu, channels.on, tie, rng);
}

/// Serve link (t mod N)+1; if its channel is OFF, advance cyclically to
/// the next ON link. Only defined for at-most-one-link schedules.
inline Schedule round_robin_decide(const NetworkConfig& config, std::int64_t t,
                                   const ChannelState& channels) {
    if (config.feasible.kind() != FeasibleSet::Kind::AtMostK || config.feasible.k() != 1)
        throw std::invalid_argument("round_robin_decide: requires an at_most_k(1) network");
    const int n_links = config.size();
    const int head = static_cast<int>(t % n_links);
    for (int i = 0; i < n_links; ++i) {
        int n = (head + i) % n_links;
        if (channels.on[n]) return Schedule{{n}};
    }
    return Schedule{}; // every channel OFF
}

/// Uniform decision entry point used by the simulation engine.
inline Schedule decide(const PolicySpec& policy, const NetworkConfig& config,
                       const LearningState& state, const ChannelState& channels,
                       TieBreak tie = TieBreak::LowestIndex, RngStream* rng = nullptr) {
    switch (policy.kind) {
        case PolicyKind::Laes: return laes_decide(config, state, channels, policy.eta, tie, rng);
        case PolicyKind::UcbOnly: return ucb_only_decide(config, state, channels, tie, rng);
        case PolicyKind::AgeBased: return age_based_decide(config, state, channels, tie, rng);
        case PolicyKind::Genie: return genie_decide(config, channels, tie, rng);
        case PolicyKind::RoundRobin: return round_robin_decide(config, state.slot, channels);
    }
    throw std::logic_error("decide: unknown policy kind");
}

} // namespace laes

#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "laes/network.hpp"

namespace laes {

/// Per-link learning statistics and age, updated once per slot.
struct LinkStats {
    std::int64_t deliveries = 0; // successful receptions so far
    double reward_sum = 0.0;     // sum of delivered packet values
    std::int64_t age = 0;        // slots since last delivery; 0 only before slot 0
    std::int64_t scheduled = 0;  // slots this link was in the chosen schedule
};

struct LearningState {
    std::vector<LinkStats> links;
    std::int64_t slot = 0;

    explicit LearningState(int n_links = 0) : links(n_links) {}

    std::int64_t total_age() const {
        std::int64_t v = 0;
        for (const auto& l : links) v += l.age;
        return v;
    }
};

/// Sample mean of delivered rewards; an unexplored link counts as 1 so it
/// keeps the highest scheduling priority.
inline double sample_mean(const LinkStats& stats) {
    if (stats.deliveries == 0) return 1.0;
    return stats.reward_sum / static_cast<double>(stats.deliveries);
}

/// Truncated optimistic reward estimate
///   min{ sample_mean + sqrt(3 ln t / (2 deliveries)), 1 }.
/// Unexplored links evaluate to 1. The exploration term is 0 for t <= 1
/// (ln 1 = 0, and deliveries cannot be positive at t = 0).
inline double ucb_estimate(const LinkStats& stats, std::int64_t t) {
    if (stats.deliveries == 0) return 1.0;
    const double mean = sample_mean(stats);
    if (t <= 1) return std::min(mean, 1.0);
    const double radius =
        std::sqrt(3.0 * std::log(static_cast<double>(t)) /
                  (2.0 * static_cast<double>(stats.deliveries)));
    return std::min(mean + radius, 1.0);
}

/// Advance the state by one completed slot: links delivered under
/// `schedule` (scheduled and ON) reset their age to 1 and absorb their
/// realized reward; all other ages grow by 1.
///
/// `rewards` must hold exactly one (link, value) entry per delivered link.
inline void update_after_slot(LearningState& state, const Schedule& schedule,
                              std::span<const std::uint8_t> channels,
                              const std::vector<std::pair<int, double>>& rewards) {
    const int n_links = static_cast<int>(state.links.size());
    if (static_cast<int>(channels.size()) != n_links)
        throw std::invalid_argument("update_after_slot: channels length != N");

    std::vector<std::uint8_t> delivered(n_links, 0);
    for (std::size_t i = 0; i < schedule.active.size(); ++i) {
        const int n = schedule.active[i];
        if (n < 0 || n >= n_links)
            throw std::invalid_argument("update_after_slot: schedule link out of range");
        if (i > 0 && n <= schedule.active[i - 1])
            throw std::invalid_argument("update_after_slot: schedule must be sorted and unique");
        if (channels[n]) delivered[n] = 1;
    }

    std::vector<std::uint8_t> seen(n_links, 0);
    for (const auto& [link, value] : rewards) {
        if (link < 0 || link >= n_links || !delivered[link])
            throw std::logic_error("update_after_slot: reward supplied for undelivered link");
        if (seen[link])
            throw std::logic_error("update_after_slot: duplicate reward for one link");
        seen[link] = 1;
    }
    for (int n = 0; n < n_links; ++n)
        if (delivered[n] && !seen[n])
            throw std::logic_error("update_after_slot: missing reward for delivered link");

    for (const auto& [link, value] : rewards) {
        auto& l = state.links[link];
        l.deliveries += 1;
        l.reward_sum += value;
    }
    for (int n = 0; n < n_links; ++n)
        state.links[n].age = delivered[n] ? 1 : state.links[n].age + 1;
    for (int n : schedule.active) state.links[n].scheduled += 1;
    state.slot += 1;
}

} // namespace laes

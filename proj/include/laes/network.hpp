#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "laes/rng.hpp"

namespace laes {

/// Per-link parameters: mean packet reward and channel ON-probability.
struct LinkParams {
    double mean_reward = 0.0;     // in [0, 1]
    double channel_on_prob = 1.0; // in (0, 1]
};

/// Interference constraint: which sets of links may transmit together.
/// The empty schedule is always feasible in addition to what is listed.
class FeasibleSet {
public:
    enum class Kind { AtMostK, ExplicitList };

    static FeasibleSet at_most_k(int k) {
        FeasibleSet f;
        f.kind_ = Kind::AtMostK;
        f.k_ = k;
        return f;
    }

    static FeasibleSet explicit_list(std::vector<std::vector<int>> schedules) {
        FeasibleSet f;
        f.kind_ = Kind::ExplicitList;
        for (auto& s : schedules) {
            std::sort(s.begin(), s.end());
            s.erase(std::unique(s.begin(), s.end()), s.end());
        }
        f.schedules_ = std::move(schedules);
        return f;
    }

    Kind kind() const { return kind_; }
    int k() const { return k_; }
    const std::vector<std::vector<int>>& schedules() const { return schedules_; }

private:
    Kind kind_ = Kind::AtMostK;
    int k_ = 1;
    std::vector<std::vector<int>> schedules_;
};

/// One feasible activation set for a slot. `active` is sorted ascending.
struct Schedule {
    std::vector<int> active;

    bool contains(int link) const {
        return std::binary_search(active.begin(), active.end(), link);
    }
    bool operator==(const Schedule&) const = default;
};

/// Documented tie order among equal-weight schedules: the empty schedule
/// ranks last (so something is served whenever serving is free), all other
/// schedules compare lexicographically by their sorted link indices.
inline bool schedule_tie_precedes(const Schedule& a, const Schedule& b) {
    if (a.active.empty() != b.active.empty()) return b.active.empty();
    return a.active < b.active;
}

/// Static description of the network: link parameters plus the
/// interference constraint.
struct NetworkConfig {
    std::vector<LinkParams> links;
    FeasibleSet feasible = FeasibleSet::at_most_k(1);

    int size() const { return static_cast<int>(links.size()); }

    double p_min() const {
        double p = 1.0;
        for (const auto& l : links) p = std::min(p, l.channel_on_prob);
        return p;
    }

    std::vector<double> mean_rewards() const {
        std::vector<double> mu(links.size());
        for (std::size_t n = 0; n < links.size(); ++n) mu[n] = links[n].mean_reward;
        return mu;
    }

    /// |S|_max: the largest number of links any feasible schedule activates.
    int max_schedule_size() const {
        if (feasible.kind() == FeasibleSet::Kind::AtMostK)
            return std::min(feasible.k(), size());
        std::size_t m = 0;
        for (const auto& s : feasible.schedules()) m = std::max(m, s.size());
        return static_cast<int>(m);
    }

    bool is_feasible(const Schedule& s) const {
        for (std::size_t i = 0; i < s.active.size(); ++i) {
            if (s.active[i] < 0 || s.active[i] >= size()) return false;
            if (i > 0 && s.active[i] <= s.active[i - 1]) return false;
        }
        if (feasible.kind() == FeasibleSet::Kind::AtMostK)
            return static_cast<int>(s.active.size()) <= feasible.k();
        if (s.active.empty()) return true;
        const auto& list = feasible.schedules();
        return std::find(list.begin(), list.end(), s.active) != list.end();
    }

    void validate() const {
        if (links.empty()) throw std::invalid_argument("network: needs at least one link");
        for (std::size_t n = 0; n < links.size(); ++n) {
            const auto& l = links[n];
            if (!(l.mean_reward >= 0.0 && l.mean_reward <= 1.0))
                throw std::invalid_argument("network: link " + std::to_string(n + 1) +
                                            ": mean_reward must be in [0,1]");
            if (!(l.channel_on_prob > 0.0 && l.channel_on_prob <= 1.0))
                throw std::invalid_argument("network: link " + std::to_string(n + 1) +
                                            ": channel_on_prob must be in (0,1]");
        }
        if (feasible.kind() == FeasibleSet::Kind::AtMostK) {
            if (feasible.k() < 1 || feasible.k() > size())
                throw std::invalid_argument("network: at_most_k requires 1 <= k <= N");
        } else {
            if (feasible.schedules().empty())
                throw std::invalid_argument("network: explicit feasible list must be nonempty");
            for (const auto& s : feasible.schedules())
                for (int link : s)
                    if (link < 0 || link >= size())
                        throw std::invalid_argument(
                            "network: explicit schedule references link outside 1.." +
                            std::to_string(size()));
        }
    }
};

enum class TieBreak { LowestIndex, Random };

/// Objective of a schedule: sum of weight*channel over its active links,
/// accumulated in ascending link order. The solver, the oracle and the
/// regret accounting all evaluate schedules through this one function.
inline double schedule_value(std::span<const double> weights,
                             std::span<const std::uint8_t> channels,
                             const Schedule& s) {
    double v = 0.0;
    for (int n : s.active) v += weights[n] * (channels[n] ? 1.0 : 0.0);
    return v;
}

namespace detail {

// Best schedule among explicitly listed candidates plus the empty one.
// Ties resolve per schedule_tie_precedes, or uniformly at random when
// requested.
inline Schedule pick_from_list(const std::vector<std::vector<int>>& list,
                               std::span<const double> weights,
                               std::span<const std::uint8_t> channels,
                               TieBreak tie, RngStream* rng) {
    Schedule best; // empty schedule, value 0
    double best_value = 0.0;
    std::vector<const std::vector<int>*> tied; // random mode only
    for (const auto& cand : list) {
        Schedule s{cand};
        double v = schedule_value(weights, channels, s);
        if (v > best_value) {
            best = std::move(s);
            best_value = v;
            tied.clear();
        } else if (v == best_value) {
            if (tie == TieBreak::LowestIndex) {
                if (schedule_tie_precedes(s, best)) best = std::move(s);
            } else {
                tied.push_back(&cand);
            }
        }
    }
    if (tie == TieBreak::Random && !tied.empty()) {
        // best plus |tied| equally good candidates; pick one uniformly
        std::size_t pick = static_cast<std::size_t>(rng->next_double() * (tied.size() + 1));
        if (pick > 0) best = Schedule{*tied[pick - 1]};
    }
    return best;
}

} // namespace detail

/// Feasible schedule maximizing sum_n weights[n]*channels[n] over active
/// links. Ties resolve per schedule_tie_precedes (lexicographically
/// smallest active set, empty last — with all weights zero, link 1 is
/// served rather than nobody), or uniformly at random in Random mode.
///
/// For AtMostK the selection is purely combinatorial: let theta be the
/// k-th largest effective weight. Links above theta are mandatory; the
/// remaining slots are filled with the smallest-indexed links at theta.
/// When theta is zero, zero-weight links are included only while they
/// lower the lexicographic order (i.e. precede a mandatory link).
inline Schedule max_weight_schedule(const NetworkConfig& config,
                                    std::span<const double> weights,
                                    std::span<const std::uint8_t> channels,
                                    TieBreak tie = TieBreak::LowestIndex,
                                    RngStream* rng = nullptr) {
    const int n_links = config.size();
    if (static_cast<int>(weights.size()) != n_links ||
        static_cast<int>(channels.size()) != n_links)
        throw std::invalid_argument("max_weight_schedule: weights/channels length != N");
    for (double w : weights)
        if (!(w >= 0.0)) throw std::invalid_argument("max_weight_schedule: weights must be >= 0");
    if (tie == TieBreak::Random && rng == nullptr)
        throw std::invalid_argument("max_weight_schedule: random tie-break needs an RngStream");

    if (config.feasible.kind() == FeasibleSet::Kind::ExplicitList)
        return detail::pick_from_list(config.feasible.schedules(), weights, channels, tie, rng);

    std::vector<double> value(n_links);
    for (int n = 0; n < n_links; ++n) value[n] = weights[n] * (channels[n] ? 1.0 : 0.0);

    const int k = std::min(config.feasible.k(), n_links);
    std::vector<int> order(n_links);
    std::iota(order.begin(), order.end(), 0);
    if (tie == TieBreak::Random)
        for (int i = n_links - 1; i > 0; --i) // Fisher-Yates, then stable sort by value
            std::swap(order[i], order[static_cast<int>(rng->next_double() * (i + 1))]);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return value[a] > value[b]; });

    if (tie == TieBreak::Random) {
        if (value[order[0]] == 0.0) return Schedule{{order[0]}}; // uniform pick
        // top-k positive-weight links under the randomized tie order
        Schedule s;
        for (int i = 0; i < k; ++i)
            if (value[order[i]] > 0.0) s.active.push_back(order[i]);
        std::sort(s.active.begin(), s.active.end());
        return s;
    }

    if (value[order[0]] == 0.0) // every weight zero: lex-min nonempty set
        return Schedule{{0}};

    const double theta = value[order[k - 1]];
    Schedule s;
    if (theta > 0.0) {
        for (int i = 0; i < k; ++i) s.active.push_back(order[i]);
        // among theta-valued links, prefer the smallest indices
        std::vector<int> at_theta;
        for (int n = 0; n < n_links; ++n)
            if (value[n] == theta) at_theta.push_back(n);
        std::size_t need = 0;
        std::erase_if(s.active, [&](int n) { return value[n] == theta ? (++need, true) : false; });
        s.active.insert(s.active.end(), at_theta.begin(), at_theta.begin() + need);
    } else {
        std::vector<int> mandatory;
        for (int n = 0; n < n_links; ++n)
            if (value[n] > 0.0) mandatory.push_back(n);
        int capacity = config.feasible.k() - static_cast<int>(mandatory.size());
        int max_mandatory = mandatory.empty() ? -1 : mandatory.back();
        s.active = mandatory;
        for (int n = 0; n < max_mandatory && capacity > 0; ++n)
            if (value[n] == 0.0) {
                s.active.push_back(n);
                --capacity;
            }
    }
    std::sort(s.active.begin(), s.active.end());
    return s;
}

/// Exhaustive-enumeration reference for max_weight_schedule, sharing its
/// tie-break order. Guarded to small N; meant for tests and cross-checks.
inline Schedule brute_force_schedule(const NetworkConfig& config,
                                     std::span<const double> weights,
                                     std::span<const std::uint8_t> channels) {
    const int n_links = config.size();
    if (n_links > 20)
        throw std::domain_error("brute_force_schedule: N > 20 is outside oracle scope");
    if (static_cast<int>(weights.size()) != n_links ||
        static_cast<int>(channels.size()) != n_links)
        throw std::invalid_argument("brute_force_schedule: weights/channels length != N");

    if (config.feasible.kind() == FeasibleSet::Kind::ExplicitList)
        return detail::pick_from_list(config.feasible.schedules(), weights, channels,
                                      TieBreak::LowestIndex, nullptr);

    Schedule best; // empty
    double best_value = 0.0;
    const int k = config.feasible.k();
    for (std::uint32_t mask = 1; mask < (1u << n_links); ++mask) {
        if (std::popcount(mask) > k) continue;
        Schedule s;
        for (int n = 0; n < n_links; ++n)
            if (mask & (1u << n)) s.active.push_back(n);
        double v = schedule_value(weights, channels, s);
        if (v > best_value || (v == best_value && schedule_tie_precedes(s, best))) {
            best = std::move(s);
            best_value = v;
        }
    }
    return best;
}

} // namespace laes

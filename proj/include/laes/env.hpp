#pragma once

#include <cstdint>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "laes/network.hpp"
#include "laes/rng.hpp"

namespace laes {

/// Realized ON/OFF channel states for one slot.
struct ChannelState {
    std::vector<std::uint8_t> on; // entries are exactly 0 or 1
};

/// Per-link reward law. Every law has support in [0,1] and mean mu_n.
enum class RewardLaw { Bernoulli, Uniform, PointMass };

inline std::string_view reward_law_name(RewardLaw law) {
    switch (law) {
        case RewardLaw::Bernoulli: return "bernoulli";
        case RewardLaw::Uniform: return "uniform";
        case RewardLaw::PointMass: return "pointmass";
    }
    return "?";
}

struct RewardModel {
    std::vector<RewardLaw> law;
    std::vector<double> mean;

    /// Same law for every link, means taken from the network description.
    static RewardModel make(RewardLaw l, const NetworkConfig& config) {
        RewardModel m;
        m.law.assign(config.links.size(), l);
        m.mean = config.mean_rewards();
        return m;
    }
};

/// One independent Bernoulli(p_n) draw per link. Links are drawn in
/// ascending index order; one uniform is consumed per link even when
/// p_n = 1, so draw alignment does not depend on the parameters.
inline ChannelState sample_channels(const NetworkConfig& config, RngStream& rng) {
    ChannelState c;
    c.on.resize(config.links.size());
    for (std::size_t n = 0; n < config.links.size(); ++n)
        c.on[n] = rng.bernoulli(config.links[n].channel_on_prob) ? 1 : 0;
    return c;
}

/// Draw one packet reward for `link` from its configured law.
inline double sample_reward(const RewardModel& model, int link, RngStream& rng) {
    if (link < 0 || link >= static_cast<int>(model.mean.size()))
        throw std::invalid_argument("sample_reward: link index out of range");
    const double mu = model.mean[link];
    switch (model.law[link]) {
        case RewardLaw::Bernoulli:
            return rng.bernoulli(mu) ? 1.0 : 0.0;
        case RewardLaw::Uniform: {
            const double lo = std::max(0.0, 2.0 * mu - 1.0);
            const double hi = std::min(1.0, 2.0 * mu);
            return rng.uniform(lo, hi);
        }
        case RewardLaw::PointMass:
            return mu;
    }
    return mu;
}

} // namespace laes

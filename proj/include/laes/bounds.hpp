#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>

#include "laes/network.hpp"

namespace laes {

/// Upper bound on the running average total age under Laes(eta):
/// (eta + 1) * N^2 / p_min. Holds for every horizon T >= 1.
inline double age_bound(double eta, int n_links, double p_min) {
    if (!(eta >= 0.0)) throw std::domain_error("age_bound: eta must be >= 0");
    if (n_links < 1) throw std::domain_error("age_bound: N must be >= 1");
    if (!(p_min > 0.0)) throw std::domain_error("age_bound: p_min must be > 0");
    const double n = static_cast<double>(n_links);
    return (eta + 1.0) * n * n / p_min;
}

/// Upper bound on cumulative regret up to horizon T under Laes(eta):
///   N T / eta + 2 sqrt(6 N |S|_max T ln T) + N (1 + 5 pi^2 / 12).
/// Undefined at eta = 0 (the first term diverges), signalled explicitly.
inline double regret_bound(double eta, int n_links, double horizon, double s_max) {
    if (eta == 0.0)
        throw std::domain_error("regret_bound: undefined for eta = 0 (division by zero)");
    if (!(eta > 0.0)) throw std::domain_error("regret_bound: eta must be > 0");
    if (n_links < 1) throw std::domain_error("regret_bound: N must be >= 1");
    if (!(horizon >= 2.0)) throw std::domain_error("regret_bound: T must be >= 2");
    if (!(s_max >= 1.0)) throw std::domain_error("regret_bound: |S|_max must be >= 1");
    const double n = static_cast<double>(n_links);
    return n * horizon / eta + 2.0 * std::sqrt(6.0 * n * s_max * horizon * std::log(horizon)) +
           n * (1.0 + 5.0 * std::numbers::pi * std::numbers::pi / 12.0);
}

/// Fading-only bound on the mean total age, N nu / (1 - nu), with
///   nu_n = 1 - p_n prod_{m != n} (1 - p_m),  nu = max_n nu_n.
/// Requires every p_n in (0, 1): with any always-ON channel the single-ON
/// event degenerates and the expression does not apply.
inline double fading_age_bound(std::span<const double> channel_on_probs) {
    if (channel_on_probs.empty()) throw std::domain_error("fading_age_bound: empty network");
    for (double p : channel_on_probs) {
        if (!(p > 0.0)) throw std::domain_error("fading_age_bound: p_n must be > 0");
        if (p >= 1.0)
            throw std::domain_error(
                "fading_age_bound: requires p_n < 1 for every link (nu_n degenerates at p_n = 1)");
    }
    const std::size_t n_links = channel_on_probs.size();
    double nu = 0.0;
    for (std::size_t n = 0; n < n_links; ++n) {
        double only_n_on = channel_on_probs[n];
        for (std::size_t m = 0; m < n_links; ++m)
            if (m != n) only_n_on *= 1.0 - channel_on_probs[m];
        nu = std::max(nu, 1.0 - only_n_on);
    }
    return static_cast<double>(n_links) * nu / (1.0 - nu);
}

/// Steady-state prediction for two interfering non-fading links with
/// mu1 > mu2 and converged estimates: the weaker link is served once every
/// P = ceil(eta (mu1 - mu2)) slots.
struct TwoLinkPrediction {
    std::int64_t period = 0;
    double weak_avg_age = 0.0;   // (1 + P) / 2
    double strong_avg_age = 0.0; // 1 + 1/P
};

inline TwoLinkPrediction two_link_prediction(double eta, double mu1, double mu2) {
    const double gap = eta * (mu1 - mu2);
    if (!(gap > 0.0))
        throw std::domain_error("two_link_prediction: requires eta * (mu1 - mu2) > 0");
    // ceil with a tolerance so that products meant to be integral
    // (e.g. 200 * 0.1) do not land on the wrong side of a rounding error
    const double rounded = std::round(gap);
    const double period_real =
        std::abs(gap - rounded) < 1e-9 * std::max(1.0, std::abs(gap)) ? rounded : std::ceil(gap);
    TwoLinkPrediction out;
    out.period = static_cast<std::int64_t>(period_real);
    out.weak_avg_age = (1.0 + period_real) / 2.0;
    out.strong_avg_age = 1.0 + 1.0 / period_real;
    return out;
}

/// eta minimizing the product of the age and regret bounds for a given
/// (N, T, |S|_max, p_min), located by golden-section search on log(eta).
/// The regret bound alone decreases monotonically in eta; the product is
/// the quantity with an interior optimum.
inline double tradeoff_optimal_eta(int n_links, double horizon, double s_max, double p_min) {
    auto product = [&](double eta) {
        return age_bound(eta, n_links, p_min) * regret_bound(eta, n_links, horizon, s_max);
    };
    double lo = std::log(1e-6), hi = std::log(std::max(horizon * n_links, 10.0));
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
    double f1 = product(std::exp(x1)), f2 = product(std::exp(x2));
    for (int it = 0; it < 200 && (b - a) > 1e-12; ++it) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = product(std::exp(x1));
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = product(std::exp(x2));
        }
    }
    return std::exp((a + b) / 2.0);
}

/// All closed-form quantities applicable to one network and one eta.
struct BoundReport {
    double age_bound = 0.0;
    std::optional<double> regret_bound;          // absent at eta = 0
    std::optional<double> fading_age_bound;      // present iff all p_n < 1
    std::optional<TwoLinkPrediction> two_link;   // present iff N = 2, non-fading, mu1 > mu2
};

inline BoundReport make_bound_report(const NetworkConfig& config, double eta, double horizon) {
    BoundReport report;
    report.age_bound = age_bound(eta, config.size(), config.p_min());
    if (eta > 0.0 && horizon >= 2.0)
        report.regret_bound =
            regret_bound(eta, config.size(), horizon, config.max_schedule_size());
    bool all_fading = true;
    std::vector<double> p;
    for (const auto& l : config.links) {
        p.push_back(l.channel_on_prob);
        all_fading = all_fading && l.channel_on_prob < 1.0;
    }
    if (all_fading) report.fading_age_bound = fading_age_bound(p);
    if (config.size() == 2 && !all_fading && p[0] == 1.0 && p[1] == 1.0 && eta > 0.0 &&
        config.links[0].mean_reward > config.links[1].mean_reward)
        report.two_link =
            two_link_prediction(eta, config.links[0].mean_reward, config.links[1].mean_reward);
    return report;
}

} // namespace laes

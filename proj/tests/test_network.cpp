#include <catch2/catch_amalgamated.hpp>

#include <vector>

#include "laes/network.hpp"
#include "laes/rng.hpp"

using laes::brute_force_schedule;
using laes::FeasibleSet;
using laes::max_weight_schedule;
using laes::NetworkConfig;
using laes::RngStream;
using laes::Schedule;
using laes::schedule_value;

namespace {

NetworkConfig uniform_network(int n_links, FeasibleSet feasible) {
    NetworkConfig config;
    config.links.assign(n_links, {0.5, 1.0});
    config.feasible = std::move(feasible);
    return config;
}

std::vector<std::uint8_t> all_on(int n) { return std::vector<std::uint8_t>(n, 1); }

// Random weight grids use multiples of 1/64 so every schedule value is an
// exact dyadic sum and solver/oracle comparisons cannot hinge on rounding.
double grid_weight(RngStream& rng) {
    return static_cast<double>(rng.next_u64() % 641) / 64.0; // [0, 10] step 1/64
}

} // namespace

TEST_CASE("max_weight_schedule: unique maximum") {
    auto config = uniform_network(3, FeasibleSet::at_most_k(1));
    const std::vector<double> w{3, 7, 2};
    CHECK(max_weight_schedule(config, w, all_on(3)).active == std::vector<int>{1});
}

TEST_CASE("max_weight_schedule: k=2 tie broken toward lowest indices") {
    auto config = uniform_network(4, FeasibleSet::at_most_k(2));
    const std::vector<double> w{5, 1, 4, 4};
    const auto s = max_weight_schedule(config, w, all_on(4));
    CHECK(s.active == std::vector<int>{0, 2}); // {1,3} beats {1,4}, both worth 9
    CHECK(schedule_value(w, all_on(4), s) == 9.0);
}

TEST_CASE("max_weight_schedule: explicit list picks the heavier entry") {
    auto config = uniform_network(3, FeasibleSet::explicit_list({{0}, {1, 2}}));
    const std::vector<double> w{6, 4, 3};
    CHECK(max_weight_schedule(config, w, all_on(3)).active == std::vector<int>{1, 2});
}

TEST_CASE("max_weight_schedule: OFF link contributes nothing") {
    auto config = uniform_network(2, FeasibleSet::at_most_k(1));
    const std::vector<double> w{3, 7};
    const std::vector<std::uint8_t> channels{1, 0};
    CHECK(max_weight_schedule(config, w, channels).active == std::vector<int>{0});
}

TEST_CASE("max_weight_schedule: all-zero weights serve link 1, not nobody") {
    auto config = uniform_network(4, FeasibleSet::at_most_k(2));
    const std::vector<double> w{0, 0, 0, 0};
    CHECK(max_weight_schedule(config, w, all_on(4)).active == std::vector<int>{0});
}

TEST_CASE("max_weight_schedule: input validation") {
    auto config = uniform_network(3, FeasibleSet::at_most_k(1));
    const std::vector<double> short_w{1, 2};
    CHECK_THROWS_AS(max_weight_schedule(config, short_w, all_on(3)), std::invalid_argument);
    const std::vector<double> w{1, 2, 3};
    const std::vector<std::uint8_t> short_c{1, 1};
    CHECK_THROWS_AS(max_weight_schedule(config, w, short_c), std::invalid_argument);
    const std::vector<double> negative{1, -2, 3};
    CHECK_THROWS_AS(max_weight_schedule(config, negative, all_on(3)), std::invalid_argument);
    CHECK_THROWS_AS(max_weight_schedule(config, w, all_on(3), laes::TieBreak::Random, nullptr),
                    std::invalid_argument);
}

TEST_CASE("brute_force_schedule: oracle basics") {
    auto config = uniform_network(3, FeasibleSet::at_most_k(2));
    const std::vector<double> ones{1, 1, 1};
    const auto s = brute_force_schedule(config, ones, all_on(3));
    CHECK(schedule_value(ones, all_on(3), s) == 2.0);

    auto pair_only = uniform_network(2, FeasibleSet::explicit_list({{0, 1}}));
    const std::vector<double> zeros{0, 0};
    // zero-weight tie between {} and {1,2}: nonempty wins under the
    // documented order
    CHECK(brute_force_schedule(pair_only, zeros, all_on(2)).active == std::vector<int>{0, 1});

    auto big = uniform_network(21, FeasibleSet::at_most_k(1));
    const std::vector<double> w21(21, 1.0);
    CHECK_THROWS_AS(brute_force_schedule(big, w21, all_on(21)), std::domain_error);
}

TEST_CASE("solver equals enumeration oracle on 1000 random instances") {
    RngStream rng(20250811);
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = 2 + static_cast<int>(rng.next_u64() % 11); // N in 2..12
        NetworkConfig config;
        config.links.assign(n, {0.5, 1.0});
        if (trial % 2 == 0) {
            config.feasible = FeasibleSet::at_most_k(1 + static_cast<int>(rng.next_u64() % 3));
        } else {
            const int entries = 1 + static_cast<int>(rng.next_u64() % 6);
            std::vector<std::vector<int>> list;
            for (int e = 0; e < entries; ++e) {
                std::vector<int> s;
                for (int link = 0; link < n; ++link)
                    if (rng.bernoulli(0.3)) s.push_back(link);
                list.push_back(std::move(s));
            }
            config.feasible = FeasibleSet::explicit_list(std::move(list));
        }
        std::vector<double> weights(n);
        std::vector<std::uint8_t> channels(n);
        for (int i = 0; i < n; ++i) {
            weights[i] = grid_weight(rng);
            channels[i] = rng.bernoulli(0.7) ? 1 : 0;
        }

        const auto fast = max_weight_schedule(config, weights, channels);
        const auto slow = brute_force_schedule(config, weights, channels);
        REQUIRE(schedule_value(weights, channels, fast) ==
                schedule_value(weights, channels, slow));
        REQUIRE(fast.active == slow.active); // tie-break parity, not just value
        REQUIRE(config.is_feasible(fast));
    }
}

TEST_CASE("greedy top-k over ON links is optimal for AtMostK") {
    RngStream rng(99);
    for (int trial = 0; trial < 300; ++trial) {
        const int n = 2 + static_cast<int>(rng.next_u64() % 9);
        const int k = 1 + static_cast<int>(rng.next_u64() % 3);
        auto config = uniform_network(n, FeasibleSet::at_most_k(std::min(k, n)));
        std::vector<double> weights(n);
        std::vector<std::uint8_t> channels(n);
        for (int i = 0; i < n; ++i) {
            weights[i] = grid_weight(rng);
            channels[i] = rng.bernoulli(0.6) ? 1 : 0;
        }
        // naive greedy: the min(k, #ON) largest weighted ON links
        std::vector<int> on;
        for (int i = 0; i < n; ++i)
            if (channels[i]) on.push_back(i);
        std::sort(on.begin(), on.end(),
                  [&](int a, int b) { return weights[a] > weights[b]; });
        Schedule greedy;
        for (std::size_t i = 0; i < on.size() && i < static_cast<std::size_t>(k); ++i)
            greedy.active.push_back(on[i]);
        std::sort(greedy.active.begin(), greedy.active.end());

        const auto oracle = brute_force_schedule(config, weights, channels);
        REQUIRE(schedule_value(weights, channels, greedy) ==
                schedule_value(weights, channels, oracle));
    }
}

TEST_CASE("objective is invariant to weights of OFF links") {
    RngStream rng(4711);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 3 + static_cast<int>(rng.next_u64() % 6);
        auto config = uniform_network(n, FeasibleSet::at_most_k(2));
        std::vector<double> weights(n);
        std::vector<std::uint8_t> channels(n);
        for (int i = 0; i < n; ++i) {
            weights[i] = grid_weight(rng);
            channels[i] = rng.bernoulli(0.5) ? 1 : 0;
        }
        const double base =
            schedule_value(weights, channels, max_weight_schedule(config, weights, channels));
        auto tweaked = weights;
        for (int i = 0; i < n; ++i)
            if (!channels[i]) tweaked[i] = grid_weight(rng);
        const double after =
            schedule_value(tweaked, channels, max_weight_schedule(config, tweaked, channels));
        REQUIRE(base == after);
    }
}

TEST_CASE("identical inputs give identical schedules") {
    auto config = uniform_network(6, FeasibleSet::at_most_k(3));
    RngStream rng(31337);
    std::vector<double> weights(6);
    std::vector<std::uint8_t> channels(6);
    for (int i = 0; i < 6; ++i) {
        weights[i] = grid_weight(rng);
        channels[i] = rng.bernoulli(0.7) ? 1 : 0;
    }
    const auto first = max_weight_schedule(config, weights, channels);
    for (int rep = 0; rep < 10; ++rep)
        REQUIRE(max_weight_schedule(config, weights, channels).active == first.active);
}

TEST_CASE("random tie-break returns an optimal feasible schedule") {
    auto config = uniform_network(5, FeasibleSet::at_most_k(2));
    const std::vector<double> w{2, 2, 2, 1, 2};
    RngStream rng(8);
    bool saw_other = false;
    for (int trial = 0; trial < 200; ++trial) {
        const auto s = max_weight_schedule(config, w, all_on(5), laes::TieBreak::Random, &rng);
        REQUIRE(config.is_feasible(s));
        REQUIRE(schedule_value(w, all_on(5), s) == 4.0);
        if (s.active != std::vector<int>{0, 1}) saw_other = true;
    }
    CHECK(saw_other); // it actually randomizes across the tied pairs
}

TEST_CASE("feasible set validation") {
    NetworkConfig config;
    config.links = {{0.5, 1.0}, {0.5, 1.0}};
    config.feasible = FeasibleSet::at_most_k(3);
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);
    config.feasible = FeasibleSet::explicit_list({{0, 5}});
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);
    config.feasible = FeasibleSet::explicit_list({{0, 1}});
    CHECK_NOTHROW(config.validate());
    CHECK(config.max_schedule_size() == 2);
    CHECK(config.is_feasible(Schedule{})); // empty always feasible
    CHECK_FALSE(config.is_feasible(Schedule{{0}}));

    NetworkConfig bad;
    bad.links = {{1.5, 1.0}};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad.links = {{0.5, 0.0}};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad.links.clear();
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

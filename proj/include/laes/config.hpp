#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "laes/engine.hpp"
#include "laes/network.hpp"
#include "laes/policy.hpp"

namespace laes {

/// One experiment: a network, the policies to compare, and run settings.
/// Parsed from a JSON document; see README for the schema.
struct ExperimentConfig {
    std::string label = "experiment";
    NetworkConfig network;
    std::vector<PolicySpec> policies;
    std::int64_t horizon = 30000;
    int replications = 100;
    std::uint64_t seed = 1;
    std::int64_t stride = 0; // 0 = auto
    RewardLaw reward_model = RewardLaw::Bernoulli;
    TieBreak tie_break = TieBreak::LowestIndex;
    DeliveryRatioKind ratio_kind = DeliveryRatioKind::DeliveredPerSlot;
    std::string out_dir = "results";

    EngineOptions engine_options() const {
        EngineOptions opt;
        opt.horizon = horizon;
        opt.stride = stride;
        opt.reward_law = reward_model;
        opt.tie_break = tie_break;
        opt.ratio_kind = ratio_kind;
        return opt;
    }

    /// Checks every module precondition up front so runs cannot fail midway.
    void validate() const {
        network.validate();
        if (policies.empty()) throw std::invalid_argument("config: policies must be nonempty");
        for (const auto& p : policies) {
            if (p.kind == PolicyKind::Laes && !(p.eta >= 0.0))
                throw std::invalid_argument("config: laes eta must be >= 0");
            if (p.kind == PolicyKind::RoundRobin &&
                (network.feasible.kind() != FeasibleSet::Kind::AtMostK ||
                 network.feasible.k() != 1))
                throw std::invalid_argument("config: round_robin requires at_most_k = 1");
        }
        if (horizon < 1) throw std::invalid_argument("config: horizon must be >= 1");
        if (replications < 1) throw std::invalid_argument("config: replications must be >= 1");
        if (stride < 0) throw std::invalid_argument("config: stride must be >= 0");
    }
};

namespace detail {

using json = nlohmann::json;

[[noreturn]] inline void fail_at(const std::string& path, const std::string& what) {
    throw std::invalid_argument("config error at " + path + ": " + what);
}

inline const json& member(const json& obj, const std::string& path, const char* key) {
    if (!obj.is_object()) fail_at(path, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) fail_at(path + "/" + key, "missing required key");
    return *it;
}

inline double number_at(const json& v, const std::string& path) {
    if (!v.is_number()) fail_at(path, "expected a number");
    return v.get<double>();
}

inline std::int64_t integer_at(const json& v, const std::string& path) {
    if (!v.is_number_integer()) fail_at(path, "expected an integer");
    return v.get<std::int64_t>();
}

inline std::string string_at(const json& v, const std::string& path) {
    if (!v.is_string()) fail_at(path, "expected a string");
    return v.get<std::string>();
}

inline void reject_unknown_keys(const json& obj, const std::string& path,
                                std::initializer_list<const char*> known) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char* k : known) ok = ok || it.key() == k;
        if (!ok) fail_at(path + "/" + it.key(), "unknown key");
    }
}

inline PolicySpec parse_policy(const json& v, const std::string& path) {
    reject_unknown_keys(v, path, {"kind", "eta"});
    const std::string kind = string_at(member(v, path, "kind"), path + "/kind");
    if (kind == "laes") {
        PolicySpec p = PolicySpec::laes(number_at(member(v, path, "eta"), path + "/eta"));
        if (!(p.eta >= 0.0)) fail_at(path + "/eta", "must be >= 0");
        return p;
    }
    if (v.contains("eta")) fail_at(path + "/eta", "only laes takes an eta");
    if (kind == "ucb") return PolicySpec::ucb_only();
    if (kind == "age_based") return PolicySpec::age_based();
    if (kind == "genie") return PolicySpec::genie();
    if (kind == "round_robin") return PolicySpec::round_robin();
    fail_at(path + "/kind",
            "unknown policy '" + kind + "' (laes|ucb|age_based|genie|round_robin)");
}

} // namespace detail

inline ExperimentConfig parse_experiment_config(const nlohmann::json& doc) {
    using detail::fail_at;
    using detail::integer_at;
    using detail::member;
    using detail::number_at;
    using detail::string_at;

    detail::reject_unknown_keys(doc, "",
                                {"label", "network", "policies", "horizon", "replications",
                                 "seed", "stride", "reward_model", "tie_break",
                                 "delivery_ratio", "out_dir"});

    ExperimentConfig config;
    if (doc.contains("label")) config.label = string_at(doc["label"], "/label");

    const auto& net = member(doc, "", "network");
    detail::reject_unknown_keys(net, "/network", {"links", "feasible"});
    const auto& links = member(net, "/network", "links");
    if (!links.is_array() || links.empty())
        fail_at("/network/links", "expected a nonempty array");
    for (std::size_t i = 0; i < links.size(); ++i) {
        const std::string path = "/network/links/" + std::to_string(i + 1);
        detail::reject_unknown_keys(links[i], path, {"mean_reward", "channel_on_prob"});
        LinkParams l;
        l.mean_reward = number_at(member(links[i], path, "mean_reward"), path + "/mean_reward");
        l.channel_on_prob =
            number_at(member(links[i], path, "channel_on_prob"), path + "/channel_on_prob");
        config.network.links.push_back(l);
    }
    const auto& feasible = member(net, "/network", "feasible");
    detail::reject_unknown_keys(feasible, "/network/feasible", {"kind", "k", "schedules"});
    const std::string kind =
        string_at(member(feasible, "/network/feasible", "kind"), "/network/feasible/kind");
    if (kind == "at_most_k") {
        const auto k = integer_at(member(feasible, "/network/feasible", "k"),
                                  "/network/feasible/k");
        if (k < 1 || k > static_cast<std::int64_t>(links.size()))
            fail_at("/network/feasible/k", "must satisfy 1 <= k <= N");
        config.network.feasible = FeasibleSet::at_most_k(static_cast<int>(k));
    } else if (kind == "explicit") {
        const auto& scheds = member(feasible, "/network/feasible", "schedules");
        if (!scheds.is_array() || scheds.empty())
            fail_at("/network/feasible/schedules", "expected a nonempty array");
        std::vector<std::vector<int>> list;
        for (std::size_t i = 0; i < scheds.size(); ++i) {
            const std::string path = "/network/feasible/schedules/" + std::to_string(i + 1);
            if (!scheds[i].is_array()) fail_at(path, "expected an array of link indices");
            std::vector<int> s;
            for (const auto& v : scheds[i]) {
                const auto link = integer_at(v, path); // 1-based in config files
                if (link < 1 || link > static_cast<std::int64_t>(links.size()))
                    fail_at(path, "link index " + std::to_string(link) + " outside 1.." +
                                      std::to_string(links.size()));
                s.push_back(static_cast<int>(link - 1));
            }
            list.push_back(std::move(s));
        }
        config.network.feasible = FeasibleSet::explicit_list(std::move(list));
    } else {
        fail_at("/network/feasible/kind", "unknown kind '" + kind + "' (at_most_k|explicit)");
    }

    const auto& policies = member(doc, "", "policies");
    if (!policies.is_array() || policies.empty())
        fail_at("/policies", "expected a nonempty array");
    for (std::size_t i = 0; i < policies.size(); ++i)
        config.policies.push_back(
            detail::parse_policy(policies[i], "/policies/" + std::to_string(i + 1)));

    config.horizon = integer_at(member(doc, "", "horizon"), "/horizon");
    const auto replications = integer_at(member(doc, "", "replications"), "/replications");
    if (replications < 1 || replications > 1000000)
        fail_at("/replications", "must be in 1..1000000");
    config.replications = static_cast<int>(replications);
    const auto seed = integer_at(member(doc, "", "seed"), "/seed");
    if (seed < 0) fail_at("/seed", "must be >= 0");
    config.seed = static_cast<std::uint64_t>(seed);

    if (doc.contains("stride")) config.stride = integer_at(doc["stride"], "/stride");
    if (doc.contains("reward_model")) {
        const std::string m = string_at(doc["reward_model"], "/reward_model");
        if (m == "bernoulli") config.reward_model = RewardLaw::Bernoulli;
        else if (m == "uniform") config.reward_model = RewardLaw::Uniform;
        else if (m == "pointmass") config.reward_model = RewardLaw::PointMass;
        else fail_at("/reward_model", "unknown law '" + m + "' (bernoulli|uniform|pointmass)");
    }
    if (doc.contains("tie_break")) {
        const std::string t = string_at(doc["tie_break"], "/tie_break");
        if (t == "lowest_index") config.tie_break = TieBreak::LowestIndex;
        else if (t == "random") config.tie_break = TieBreak::Random;
        else fail_at("/tie_break", "unknown mode '" + t + "' (lowest_index|random)");
    }
    if (doc.contains("delivery_ratio")) {
        const std::string d = string_at(doc["delivery_ratio"], "/delivery_ratio");
        if (d == "delivered") config.ratio_kind = DeliveryRatioKind::DeliveredPerSlot;
        else if (d == "scheduled") config.ratio_kind = DeliveryRatioKind::ScheduledPerSlot;
        else fail_at("/delivery_ratio", "unknown mode '" + d + "' (delivered|scheduled)");
    }
    if (doc.contains("out_dir")) config.out_dir = string_at(doc["out_dir"], "/out_dir");

    config.validate();
    return config;
}

/// Canonical JSON form of a config: object keys sorted, link indices
/// 1-based, optional settings always present. Digest and round-trip tests
/// both go through this.
inline nlohmann::json to_json(const ExperimentConfig& config) {
    nlohmann::json doc;
    doc["label"] = config.label;
    for (const auto& l : config.network.links)
        doc["network"]["links"].push_back(
            {{"mean_reward", l.mean_reward}, {"channel_on_prob", l.channel_on_prob}});
    if (config.network.feasible.kind() == FeasibleSet::Kind::AtMostK) {
        doc["network"]["feasible"] = {{"kind", "at_most_k"}, {"k", config.network.feasible.k()}};
    } else {
        nlohmann::json scheds = nlohmann::json::array();
        for (const auto& s : config.network.feasible.schedules()) {
            nlohmann::json entry = nlohmann::json::array();
            for (int link : s) entry.push_back(link + 1);
            scheds.push_back(entry);
        }
        doc["network"]["feasible"] = {{"kind", "explicit"}, {"schedules", scheds}};
    }
    for (const auto& p : config.policies) {
        nlohmann::json entry;
        switch (p.kind) {
            case PolicyKind::Laes: entry = {{"kind", "laes"}, {"eta", p.eta}}; break;
            case PolicyKind::UcbOnly: entry = {{"kind", "ucb"}}; break;
            case PolicyKind::AgeBased: entry = {{"kind", "age_based"}}; break;
            case PolicyKind::Genie: entry = {{"kind", "genie"}}; break;
            case PolicyKind::RoundRobin: entry = {{"kind", "round_robin"}}; break;
        }
        doc["policies"].push_back(entry);
    }
    doc["horizon"] = config.horizon;
    doc["replications"] = config.replications;
    doc["seed"] = config.seed;
    doc["stride"] = config.stride;
    doc["reward_model"] = std::string(reward_law_name(config.reward_model));
    doc["tie_break"] =
        config.tie_break == TieBreak::LowestIndex ? "lowest_index" : "random";
    doc["delivery_ratio"] =
        config.ratio_kind == DeliveryRatioKind::DeliveredPerSlot ? "delivered" : "scheduled";
    doc["out_dir"] = config.out_dir;
    return doc;
}

/// FNV-1a content hash of the canonical JSON form, as 16 hex digits.
/// out_dir is not part of the hash: it decides where tables land, not
/// what they contain, and digests must agree across output locations.
inline std::string config_digest(const ExperimentConfig& config) {
    nlohmann::json doc = to_json(config);
    doc.erase("out_dir");
    const std::string canonical = doc.dump();
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : canonical) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

/// Parse a config document, reporting parse errors with their line/column
/// and schema errors with the offending JSON path.
inline ExperimentConfig parse_experiment_config_text(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("config: ") + e.what());
    }
    return parse_experiment_config(doc);
}

inline ExperimentConfig load_experiment_config(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw std::invalid_argument("config: cannot open " + file.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_experiment_config_text(buf.str());
}

/// The two preset networks used by the bundled reproduction runs:
/// "paper-1" is 5 fully connected non-fading links with one transmission
/// per slot; "paper-2" is 10 ON-OFF fading links with at most two.
inline ExperimentConfig preset_experiment(std::string_view name) {
    ExperimentConfig config;
    config.label = std::string(name);
    config.horizon = 30000;
    config.replications = 100; // reference curves use 500; desk-scale default
    config.seed = 1729;
    config.policies = {PolicySpec::ucb_only(),  PolicySpec::laes(0.0),
                       PolicySpec::laes(10.0),  PolicySpec::laes(50.0),
                       PolicySpec::laes(100.0), PolicySpec::laes(200.0)};
    if (name == "paper-1") {
        for (double mu : {0.9, 0.8, 0.5, 0.7, 0.2})
            config.network.links.push_back({mu, 1.0});
        config.network.feasible = FeasibleSet::at_most_k(1);
    } else if (name == "paper-2") {
        const double mu[] = {0.9, 0.8, 0.4, 0.7, 0.5, 0.6, 0.75, 0.65, 0.5, 0.4};
        const double p[] = {0.8, 0.7, 0.6, 0.9, 0.2, 0.5, 0.8, 0.9, 0.7, 0.85};
        for (int n = 0; n < 10; ++n) config.network.links.push_back({mu[n], p[n]});
        config.network.feasible = FeasibleSet::at_most_k(2);
    } else {
        throw std::invalid_argument("unknown setup '" + std::string(name) +
                                    "' (expected paper-1 or paper-2)");
    }
    config.validate();
    return config;
}

} // namespace laes

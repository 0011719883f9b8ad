#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "laes/config.hpp"
#include "laes/engine.hpp"
#include "laes/version.hpp"

namespace laes {

namespace detail {

inline std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

} // namespace detail

inline std::string table_filename(const ExperimentConfig& config, const PolicySpec& policy) {
    return config.label + "_" + policy.name() + ".csv";
}

/// Write one aggregated result as CSV: a '#'-prefixed metadata block, a
/// header row, then ceil(horizon/stride) data rows. Everything written is
/// a pure function of (config, result), so reruns are byte-identical.
inline void write_experiment_table(const std::filesystem::path& path,
                                   const ExperimentResult& result,
                                   const ExperimentConfig& config, const std::string& digest) {
    std::ofstream out(path, std::ios::binary); // fixed '\n' on every platform
    if (!out) throw std::runtime_error("cannot write " + path.string());

    out << "# laes-table v1\n";
    out << "# config_digest=" << digest << "\n";
    out << "# seed=" << result.master_seed << "\n";
    out << "# rng=" << rng_name << "\n";
    out << "# policy=" << result.policy.name() << "\n";
    out << "# horizon=" << result.horizon << " replications=" << result.replications
        << " stride=" << result.stride << "\n";
    out << "# reward_model=" << reward_law_name(config.reward_model) << " tie_break="
        << (config.tie_break == TieBreak::LowestIndex ? "lowest_index" : "random")
        << " delivery_ratio="
        << (config.ratio_kind == DeliveryRatioKind::DeliveredPerSlot ? "delivered" : "scheduled")
        << "\n";
    out << "# build=" << version << "\n";

    out << "slot,regret_mean,regret_stderr,avg_age_mean,avg_age_stderr,total_age_mean";
    for (int n = 1; n <= result.n_links; ++n) out << ",ratio_link" << n;
    out << "\n";

    for (std::size_t i = 0; i < result.slots.size(); ++i) {
        out << result.slots[i] << ',' << detail::format_number(result.regret_mean[i]) << ','
            << detail::format_number(result.regret_stderr[i]) << ','
            << detail::format_number(result.avg_age_mean[i]) << ','
            << detail::format_number(result.avg_age_stderr[i]) << ','
            << detail::format_number(result.total_age_mean[i]);
        for (int n = 0; n < result.n_links; ++n)
            out << ',' << detail::format_number(result.ratio_mean_at(i, n));
        out << '\n';
    }
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

/// Companion metadata file for one run: digest, seed, generator, build
/// version and the tables written. Deliberately free of timestamps so a
/// rerun reproduces the whole output directory byte for byte.
inline void write_metadata_sidecar(const std::filesystem::path& dir,
                                   const ExperimentConfig& config, const std::string& digest,
                                   const std::vector<std::string>& tables) {
    nlohmann::json doc;
    doc["build"] = std::string(version);
    doc["config_digest"] = digest;
    doc["rng"] = std::string(rng_name);
    doc["seed"] = config.seed;
    doc["horizon"] = config.horizon;
    doc["replications"] = config.replications;
    doc["tables"] = tables;
    doc["config"] = to_json(config);
    doc["config"].erase("out_dir"); // location-independent, like the digest
    const auto path = dir / (config.label + "_metadata.json");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << doc.dump(2) << "\n";
}

} // namespace laes

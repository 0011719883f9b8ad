// Command-line experiment runner: simulate scheduling policies on a
// configured network, reproduce the two bundled reference setups, and
// evaluate the closed-form age/regret bounds.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "laes/laes.hpp"

namespace {

struct CommonFlags {
    std::optional<std::uint64_t> seed;
    std::optional<int> replications;
    std::optional<std::int64_t> horizon;
    std::optional<std::int64_t> stride;
    std::optional<std::string> out_dir;
    std::optional<std::string> tie_break;
    std::optional<std::string> reward_model;
    int workers = 0; // 0 = one per hardware thread
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--seed", flags.seed, "Master seed (replications derive substreams)");
    cmd->add_option("--replications", flags.replications, "Number of independent replications");
    cmd->add_option("--horizon", flags.horizon, "Slots to simulate per replication");
    cmd->add_option("--stride", flags.stride, "Record metrics every this many slots (0 = auto)");
    cmd->add_option("--workers", flags.workers,
                    "Worker threads (never affects output bytes; 0 = hardware)");
    cmd->add_option("--out-dir", flags.out_dir, "Directory for result tables");
    cmd->add_option("--tie-break", flags.tie_break, "Tie handling: lowest-index or random")
        ->check(CLI::IsMember({"lowest-index", "random"}));
    cmd->add_option("--reward-model", flags.reward_model,
                    "Reward law: bernoulli, uniform or pointmass")
        ->check(CLI::IsMember({"bernoulli", "uniform", "pointmass"}));
}

void apply_overrides(laes::ExperimentConfig& config, const CommonFlags& flags) {
    if (flags.seed) config.seed = *flags.seed;
    if (flags.replications) config.replications = *flags.replications;
    if (flags.horizon) config.horizon = *flags.horizon;
    if (flags.stride) config.stride = *flags.stride;
    if (flags.out_dir) config.out_dir = *flags.out_dir;
    if (flags.tie_break)
        config.tie_break = *flags.tie_break == "random" ? laes::TieBreak::Random
                                                        : laes::TieBreak::LowestIndex;
    if (flags.reward_model) {
        if (*flags.reward_model == "bernoulli") config.reward_model = laes::RewardLaw::Bernoulli;
        if (*flags.reward_model == "uniform") config.reward_model = laes::RewardLaw::Uniform;
        if (*flags.reward_model == "pointmass") config.reward_model = laes::RewardLaw::PointMass;
    }
    config.validate();
}

int effective_workers(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

int run_experiments(const laes::ExperimentConfig& config, int workers) {
    const std::string digest = laes::config_digest(config);
    const std::filesystem::path dir(config.out_dir);
    std::filesystem::create_directories(dir);

    std::vector<std::string> tables;
    for (const auto& policy : config.policies) {
        const auto result = laes::run_experiment(config.network, policy,
                                                 config.engine_options(), config.replications,
                                                 config.seed, effective_workers(workers));
        const std::string filename = laes::table_filename(config, policy);
        laes::write_experiment_table(dir / filename, result, config, digest);
        tables.push_back(filename);
        const std::size_t last = result.slots.size() - 1;
        std::printf("%-14s regret %10.2f +- %.2f   avg total age %9.2f +- %.3f   -> %s\n",
                    policy.name().c_str(), result.regret_mean[last], result.regret_stderr[last],
                    result.avg_age_mean[last], result.avg_age_stderr[last], filename.c_str());
    }
    laes::write_metadata_sidecar(dir, config, digest, tables);
    std::printf("config digest %s, %d replications of %lld slots, results in %s\n",
                digest.c_str(), config.replications,
                static_cast<long long>(config.horizon), config.out_dir.c_str());
    return 0;
}

int print_bounds(const laes::ExperimentConfig& config) {
    const auto& net = config.network;
    std::printf("network: N=%d links, |S|_max=%d, p_min=%g\n", net.size(),
                net.max_schedule_size(), net.p_min());

    bool all_fading = true;
    for (const auto& l : net.links) all_fading = all_fading && l.channel_on_prob < 1.0;

    std::printf("%-14s %16s %18s\n", "policy", "age bound", "regret bound");
    for (const auto& policy : config.policies) {
        if (policy.kind != laes::PolicyKind::Laes && policy.kind != laes::PolicyKind::AgeBased) {
            std::printf("%-14s %16s %18s\n", policy.name().c_str(), "-", "-");
            continue;
        }
        const double eta = policy.kind == laes::PolicyKind::Laes ? policy.eta : 0.0;
        const double age = laes::age_bound(eta, net.size(), net.p_min());
        if (eta > 0.0) {
            const double regret = laes::regret_bound(
                eta, net.size(), static_cast<double>(config.horizon), net.max_schedule_size());
            std::printf("%-14s %16.6g %18.6g\n", policy.name().c_str(), age, regret);
        } else {
            std::printf("%-14s %16.6g %18s\n", policy.name().c_str(), age, "undefined (eta=0)");
        }
    }

    if (all_fading) {
        std::vector<double> p;
        for (const auto& l : net.links) p.push_back(l.channel_on_prob);
        std::printf("fading age bound (eta-independent): %.6g\n", laes::fading_age_bound(p));
    } else {
        std::printf("fading age bound: not applicable (some channel_on_prob = 1)\n");
    }

    if (net.size() == 2 && !all_fading &&
        net.links[0].mean_reward > net.links[1].mean_reward) {
        for (const auto& policy : config.policies)
            if (policy.kind == laes::PolicyKind::Laes && policy.eta > 0.0) {
                const auto two = laes::two_link_prediction(policy.eta, net.links[0].mean_reward,
                                                           net.links[1].mean_reward);
                std::printf("two-link prediction (eta=%g): period %lld, "
                            "weak avg age %.4g, strong avg age %.4g\n",
                            policy.eta, static_cast<long long>(two.period), two.weak_avg_age,
                            two.strong_avg_age);
            }
    }

    const double best_eta = laes::tradeoff_optimal_eta(
        net.size(), static_cast<double>(config.horizon), net.max_schedule_size(), net.p_min());
    std::printf("eta minimizing age-bound x regret-bound at T=%lld: %.4g\n",
                static_cast<long long>(config.horizon), best_eta);
    return 0;
}

std::vector<double> parse_eta_list(const std::string& text) {
    std::vector<double> etas;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            etas.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw std::invalid_argument("sweep: bad eta value '" + item + "'");
        }
        if (!(etas.back() >= 0.0)) throw std::invalid_argument("sweep: eta must be >= 0");
    }
    if (etas.empty()) throw std::invalid_argument("sweep: empty eta list");
    return etas;
}

int run_sweep(laes::ExperimentConfig config, const std::string& eta_list, int workers) {
    const std::vector<double> etas = parse_eta_list(eta_list);
    config.policies.clear();
    for (double eta : etas) config.policies.push_back(laes::PolicySpec::laes(eta));
    config.validate();

    const std::string digest = laes::config_digest(config);
    const std::filesystem::path dir(config.out_dir);
    std::filesystem::create_directories(dir);

    std::ofstream summary(dir / (config.label + "_sweep_summary.csv"), std::ios::binary);
    summary << "# laes-sweep v1\n# config_digest=" << digest << "\n";
    summary << "eta,regret_mean,regret_stderr,avg_age_mean,avg_age_stderr,"
               "age_bound,regret_bound\n";

    std::vector<std::string> tables;
    for (const auto& policy : config.policies) {
        const auto result = laes::run_experiment(config.network, policy,
                                                 config.engine_options(), config.replications,
                                                 config.seed, effective_workers(workers));
        const std::string filename = laes::table_filename(config, policy);
        laes::write_experiment_table(dir / filename, result, config, digest);
        tables.push_back(filename);
        const std::size_t last = result.slots.size() - 1;
        char regret_bound_text[32] = "";
        if (policy.eta > 0.0)
            std::snprintf(regret_bound_text, sizeof(regret_bound_text), "%.12g",
                          laes::regret_bound(policy.eta, config.network.size(),
                                             static_cast<double>(config.horizon),
                                             config.network.max_schedule_size()));
        char line[256];
        std::snprintf(line, sizeof(line), "%g,%.12g,%.12g,%.12g,%.12g,%.12g,%s\n", policy.eta,
                      result.regret_mean[last], result.regret_stderr[last],
                      result.avg_age_mean[last], result.avg_age_stderr[last],
                      laes::age_bound(policy.eta, config.network.size(), config.network.p_min()),
                      regret_bound_text);
        summary << line;
        std::printf("eta=%-8g regret %10.2f   avg total age %9.2f\n", policy.eta,
                    result.regret_mean[last], result.avg_age_mean[last]);
    }
    laes::write_metadata_sidecar(dir, config, digest, tables);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Age-aware learning schedulers: simulation and bound calculators"};
    app.require_subcommand(1);

    std::string config_file;
    std::string setup_name;
    std::string eta_list = "0,10,50,100,200";
    CommonFlags flags;

    auto* cmd_run = app.add_subcommand("run", "Run the experiment described by a config file");
    cmd_run->add_option("config", config_file, "JSON experiment config")
        ->required()
        ->check(CLI::ExistingFile);
    add_common_flags(cmd_run, flags);

    auto* cmd_reproduce =
        app.add_subcommand("reproduce", "Run a bundled setup (paper-1 or paper-2)");
    cmd_reproduce->add_option("setup", setup_name, "paper-1 | paper-2")->required();
    add_common_flags(cmd_reproduce, flags);

    auto* cmd_bounds =
        app.add_subcommand("bounds", "Print the closed-form bounds for a config");
    cmd_bounds->add_option("config", config_file, "JSON experiment config")
        ->required()
        ->check(CLI::ExistingFile);

    auto* cmd_sweep = app.add_subcommand("sweep", "Run a grid of laes eta values on one network");
    cmd_sweep->add_option("config", config_file, "JSON experiment config")
        ->required()
        ->check(CLI::ExistingFile);
    cmd_sweep->add_option("--etas", eta_list, "Comma-separated eta grid");
    add_common_flags(cmd_sweep, flags);

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_run->parsed()) {
            auto config = laes::load_experiment_config(config_file);
            apply_overrides(config, flags);
            return run_experiments(config, flags.workers);
        }
        if (cmd_reproduce->parsed()) {
            auto config = laes::preset_experiment(setup_name);
            apply_overrides(config, flags);
            return run_experiments(config, flags.workers);
        }
        if (cmd_bounds->parsed()) {
            return print_bounds(laes::load_experiment_config(config_file));
        }
        if (cmd_sweep->parsed()) {
            auto config = laes::load_experiment_config(config_file);
            apply_overrides(config, flags);
            return run_sweep(std::move(config), eta_list, flags.workers);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

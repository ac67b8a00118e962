// Command-line front end. Talks to the engine only through the C API.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "myopia/myopia.h"

namespace fs = std::filesystem;

namespace {

struct ConfigDeleter {
    void operator()(myopia_config* c) const { myopia_config_free(c); }
};
struct MetricsDeleter {
    void operator()(myopia_metrics* m) const { myopia_metrics_free(m); }
};
using ConfigPtr = std::unique_ptr<myopia_config, ConfigDeleter>;
using MetricsPtr = std::unique_ptr<myopia_metrics, MetricsDeleter>;

struct Failure {
    myopia_status status;
    std::string message;
};

void check(myopia_status s) {
    if (s != MYOPIA_OK) throw Failure{s, myopia_last_error()};
}

struct CampaignOptions {
    std::string config_path;
    std::string out_dir = ".";
    std::optional<int> replications;
    std::optional<int> trials;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> strategy;
    std::optional<int> horizon;
    bool no_diagnostics = false;
    unsigned threads = 0;
};

void add_campaign_options(CLI::App* cmd, CampaignOptions& o) {
    cmd->add_option("-c,--config", o.config_path, "Experiment config file")->required();
    cmd->add_option("-o,--out", o.out_dir, "Output directory");
    cmd->add_option("--replications", o.replications, "Override the replication count");
    cmd->add_option("--trials", o.trials, "Override the number of trials");
    cmd->add_option("--seed", o.seed, "Override the base seed");
    cmd->add_option("-j,--threads", o.threads, "Worker threads (0 = all cores)");
}

ConfigPtr load(const CampaignOptions& o) {
    myopia_config* raw = nullptr;
    check(myopia_config_load(o.config_path.c_str(), &raw));
    ConfigPtr cfg(raw);
    if (o.replications) check(myopia_config_set_replications(cfg.get(), *o.replications));
    if (o.trials) check(myopia_config_set_trials(cfg.get(), *o.trials));
    if (o.seed) check(myopia_config_set_seed(cfg.get(), *o.seed));
    if (o.strategy) {
        myopia_strategy s = MYOPIA_STRATEGY_MYOPIC;
        if (*o.strategy == "global") s = MYOPIA_STRATEGY_GLOBAL;
        else if (*o.strategy == "ahead") s = MYOPIA_STRATEGY_AHEAD;
        else if (*o.strategy != "myopic") throw Failure{MYOPIA_ERR_USAGE, "unknown strategy '" + *o.strategy + "'"};
        check(myopia_config_set_strategy(cfg.get(), s, o.horizon.value_or(s == MYOPIA_STRATEGY_MYOPIC ? 1 : 2)));
    }
    if (o.no_diagnostics) check(myopia_config_set_diagnostics(cfg.get(), 0, 0));
    return cfg;
}

std::string prepare_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Failure{MYOPIA_ERR_RUNTIME, "cannot create output directory '" + dir + "': " + ec.message()};
    return dir;
}

void write_manifest(const std::string& dir, const char* command, const myopia_config* cfg,
                    const std::vector<std::string>& outputs) {
    std::vector<const char*> names;
    for (const auto& s : outputs) names.push_back(s.c_str());
    check(myopia_write_manifest((fs::path(dir) / "manifest.json").c_str(), command, cfg, names.data(),
                                names.size()));
}

std::vector<int> default_decompose_trials(const std::string& model) {
    if (model == "psychometric") return {5, 25, 55, 95, 125, 165};
    if (model == "memory") return {5, 15, 25, 35, 45, 65};
    return {5, 25, 55, 85, 115, 145};
}

void print_summary(const myopia_metrics* m, const char* label) {
    const size_t n = myopia_metrics_trials(m);
    if (n == 0) return;
    myopia_trial_row last{};
    check(myopia_metrics_row(m, n - 1, &last));
    std::printf("%-8s trial %d: mse_p1=%.6g mse_p2=%.6g info_gain=%.6g\n", label, last.trial, last.mse_p1,
                last.mse_p2, last.info_gain);
}

int cmd_presets(const std::string& out_dir) {
    prepare_dir(out_dir);
    std::vector<std::string> written;
    for (size_t i = 0; i < myopia_preset_count(); ++i) {
        const std::string name = myopia_preset_name(i);
        myopia_config* raw = nullptr;
        check(myopia_config_from_preset(name.c_str(), &raw));
        ConfigPtr cfg(raw);
        const auto file = name + ".ini";
        check(myopia_config_save(cfg.get(), (fs::path(out_dir) / file).c_str()));
        written.push_back(file);
        std::printf("wrote %s\n", (fs::path(out_dir) / file).c_str());
    }
    write_manifest(out_dir, "presets", nullptr, written);
    return 0;
}

int cmd_run(const CampaignOptions& o) {
    auto cfg = load(o);
    const auto dir = prepare_dir(o.out_dir);
    myopia_metrics* raw = nullptr;
    check(myopia_run(cfg.get(), o.threads, &raw));
    MetricsPtr metrics(raw);
    check(myopia_metrics_write_csv(metrics.get(), (fs::path(dir) / "metrics.csv").c_str()));
    write_manifest(dir, "run", cfg.get(), {"metrics.csv"});
    print_summary(metrics.get(), "run");
    return 0;
}

int cmd_compare(const CampaignOptions& o) {
    auto cfg = load(o);
    const auto dir = prepare_dir(o.out_dir);
    myopia_metrics* raw[3] = {nullptr, nullptr, nullptr};
    check(myopia_compare(cfg.get(), o.threads, raw, 3));
    MetricsPtr tables[3] = {MetricsPtr(raw[0]), MetricsPtr(raw[1]), MetricsPtr(raw[2])};
    const char* labels[3] = {"myopic", "ahead", "global"};
    std::vector<std::string> outputs;
    for (int i = 0; i < 3; ++i) {
        const std::string file = std::string("metrics_") + labels[i] + ".csv";
        check(myopia_metrics_write_csv(tables[i].get(), (fs::path(dir) / file).c_str()));
        outputs.push_back(file);
        print_summary(tables[i].get(), labels[i]);
    }
    const myopia_metrics* views[3] = {tables[0].get(), tables[1].get(), tables[2].get()};
    check(myopia_write_comparison(views, 3, (fs::path(dir) / "comparison.csv").c_str()));
    outputs.emplace_back("comparison.csv");
    write_manifest(dir, "compare", cfg.get(), outputs);
    return 0;
}

int cmd_decompose(const CampaignOptions& o, std::vector<int> at) {
    auto cfg = load(o);
    if (at.empty()) at = default_decompose_trials(myopia_config_model(cfg.get()));
    const auto dir = prepare_dir(o.out_dir);
    myopia_metrics* raw = nullptr;
    // Curves are averaged over every replication.
    const int reps = myopia_config_replications(cfg.get());
    check(myopia_config_set_diagnostics(cfg.get(), 1, reps));
    check(myopia_run(cfg.get(), o.threads, &raw));
    MetricsPtr metrics(raw);
    check(myopia_metrics_write_curves(metrics.get(), at.data(), at.size(), (fs::path(dir) / "curves.csv").c_str()));
    check(myopia_metrics_write_csv(metrics.get(), (fs::path(dir) / "metrics.csv").c_str()));
    write_manifest(dir, "decompose", cfg.get(), {"curves.csv", "metrics.csv"});

    double max_ud = 0.0, max_rd = 0.0;
    for (size_t i = 0; i < myopia_metrics_trials(metrics.get()); ++i) {
        myopia_trial_row r{};
        check(myopia_metrics_row(metrics.get(), i, &r));
        max_ud = std::max(max_ud, r.ud_mean);
        max_rd = std::max(max_rd, r.rd_mean);
    }
    std::printf("max mean UD = %.6g, max mean RD = %.6g, min UD = %.3g\n", max_ud, max_rd,
                myopia_metrics_min_ud(metrics.get()));
    return 0;
}

int cmd_oracle(std::uint64_t seed, std::size_t instances) {
    myopia_oracle_report r{};
    check(myopia_oracle_battery(seed, instances, &r));
    std::printf("instances: %zu\n", r.instances);
    std::printf("max |bellman - brute force| = %.3e\n", r.max_deviation);
    std::printf("worst V(T+1) - V(T) = %.3e\n", r.worst_monotonicity);
    std::printf("worst V(2) - greedy = %.3e\n", r.worst_dominance);
    std::printf("max |decomposition - V(2)| = %.3e\n", r.worst_decomposition);
    const bool ok = r.max_deviation <= 1e-10 && r.worst_monotonicity >= -1e-12 && r.worst_dominance >= -1e-12 &&
                    r.worst_decomposition <= 1e-10;
    std::printf("%s\n", ok ? "PASS" : "FAIL");
    return ok ? 0 : MYOPIA_ERR_RUNTIME;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"myopic vs. exact lookahead Bayesian adaptive design laboratory", "myopia"};
    app.set_version_flag("--version", myopia_version());
    app.require_subcommand(1);

    std::string presets_dir = ".";
    auto* presets = app.add_subcommand("presets", "Write the bundled gap/psychometric/memory configs");
    presets->add_option("-o,--out", presets_dir, "Output directory");

    CampaignOptions run_opts;
    auto* run = app.add_subcommand("run", "Run one campaign and write metrics.csv");
    add_campaign_options(run, run_opts);
    run->add_option("--strategy", run_opts.strategy, "myopic | ahead | global");
    run->add_option("--horizon", run_opts.horizon, "Lookahead trials for ahead/global");
    run->add_flag("--no-diagnostics", run_opts.no_diagnostics, "Skip the two-trial decomposition");

    CampaignOptions cmp_opts;
    auto* compare = app.add_subcommand("compare", "Run myopic, T-step ahead and global T-step side by side");
    add_campaign_options(compare, cmp_opts);
    compare->add_flag("--no-diagnostics", cmp_opts.no_diagnostics, "Skip the two-trial decomposition");

    CampaignOptions dec_opts;
    std::vector<int> at;
    auto* decompose = app.add_subcommand("decompose", "Per-design utility curves and UD/RD series");
    add_campaign_options(decompose, dec_opts);
    decompose->add_option("--at", at, "Trials whose curves are written (default per model)")->delimiter(',');

    std::uint64_t oracle_seed = 7;
    std::size_t oracle_instances = 200;
    auto* oracle = app.add_subcommand("oracle", "Check the Bellman solver against brute-force policy enumeration");
    oracle->add_option("--seed", oracle_seed, "Instance generator seed");
    oracle->add_option("--instances", oracle_instances, "Number of random instances");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : MYOPIA_ERR_USAGE;
    }

    try {
        if (*presets) return cmd_presets(presets_dir);
        if (*run) return cmd_run(run_opts);
        if (*compare) return cmd_compare(cmp_opts);
        if (*decompose) return cmd_decompose(dec_opts, at);
        if (*oracle) return cmd_oracle(oracle_seed, oracle_instances);
    } catch (const Failure& f) {
        std::fprintf(stderr, "myopia: %s\n", f.message.c_str());
        return f.status;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "myopia: %s\n", e.what());
        return MYOPIA_ERR_RUNTIME;
    }
    return MYOPIA_ERR_USAGE;
}

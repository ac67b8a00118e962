#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "grid.hpp"
#include "response_model.hpp"
#include "strategy.hpp"

namespace myopia {

enum class Strategy { Myopic, GlobalTStep, TStepAhead };

std::string_view strategy_name(Strategy s);
/// Accepts "myopic", "global", "ahead".
Strategy parse_strategy(std::string_view text);

struct ExperimentConfig {
    ResponseModel model;
    std::vector<AxisSpec> parameter_axes;  // axis names select the model parameter
    AxisSpec design_axis;
    std::vector<double> true_params;  // one per parameter axis, same order
    int trials = 1;
    int replications = 1;
    Strategy strategy = Strategy::Myopic;
    HorizonSpec horizon;
    std::uint64_t seed = 0;
    bool diagnostics = false;
    int diagnostics_replications = 0;
    double node_budget = 1e7;

    /// Throws ConfigError naming the offending field.
    void validate() const;
    bool operator==(const ExperimentConfig&) const = default;
};

/// Grids, likelihood table and the true parameters in model order, built once per campaign.
class Experiment {
public:
    explicit Experiment(ExperimentConfig config);

    const ExperimentConfig& config() const { return config_; }
    const ParameterGrid& grid() const { return grid_; }
    const DesignGrid& designs() const { return designs_; }
    const ModelContext& context() const { return *context_; }
    /// True parameters ordered as success_probability expects.
    std::span<const double> true_model_params() const { return true_model_; }

private:
    ExperimentConfig config_;
    ParameterGrid grid_;
    DesignGrid designs_;
    std::shared_ptr<const ModelContext> context_;
    std::vector<double> true_model_;
};

/// Counter-based stream position: one uniform variate per (seed, replication, trial).
struct RandomKey {
    std::uint64_t seed = 0;
    std::uint64_t replication = 0;
    std::uint64_t trial = 0;
};

double uniform_variate(const RandomKey& key);

/// Draws one response of the simulated observer.
int simulate_response(const ResponseModel& model, std::span<const double> true_params,
                      double design, const RandomKey& key);

struct TrialRecord {
    int trial = 0;  // 1-based
    std::size_t design_index = 0;
    double design = 0.0;
    int response = 0;
    double posterior_entropy = 0.0;
    std::vector<double> posterior_mean;  // parameter-axis order
};

/// Two-trial analysis of the prior at the start of a trial.
struct TrialDiagnostics {
    std::vector<double> immediate;
    std::vector<double> expected_next;
    double ud = 0.0;
    double rd = 0.0;
    bool degenerate = false;
};

struct ReplicationResult {
    std::vector<TrialRecord> records;
    std::vector<TrialDiagnostics> diagnostics;  // empty unless requested
};

ReplicationResult run_replication(const Experiment& experiment, std::size_t replication,
                                  bool with_diagnostics);

struct TrialMetrics {
    int trial = 0;
    std::vector<double> mse;  // per parameter axis
    double mean_entropy = 0.0;
    double info_gain = 0.0;
    std::optional<double> ud_mean;
    std::optional<double> rd_mean;
    std::optional<double> width_immediate;
    std::optional<double> width_next;

    bool operator==(const TrialMetrics&) const = default;
};

struct MetricsTable {
    std::string model;
    Strategy strategy = Strategy::Myopic;
    int steps = 1;
    std::vector<std::string> parameter_names;
    std::vector<double> design_values;
    int replications = 0;
    int diagnostics_replications = 0;
    double initial_entropy = 0.0;
    std::vector<TrialMetrics> rows;
    /// Replication-averaged decomposition curves per trial; empty without diagnostics.
    std::vector<std::vector<double>> mean_immediate;
    std::vector<std::vector<double>> mean_expected_next;
    /// Smallest UD seen in any diagnosed (replication, trial).
    double min_ud = 0.0;

    bool has_diagnostics() const { return !mean_immediate.empty(); }
    bool operator==(const MetricsTable&) const = default;
};

struct RunOptions {
    /// Worker threads for replications; 0 uses the hardware concurrency.
    unsigned threads = 0;
};

MetricsTable run_campaign(const ExperimentConfig& config, const RunOptions& options = {});

/// Myopic, T-step ahead and global T-step variants of one config (T from the
/// config horizon, or 2 when the config is myopic).
std::vector<ExperimentConfig> comparison_configs(const ExperimentConfig& base);

/// Runs each campaign; configs must differ only in strategy and horizon.
std::vector<MetricsTable> compare_strategies(std::span<const ExperimentConfig> configs,
                                             const RunOptions& options = {});

}  // namespace myopia

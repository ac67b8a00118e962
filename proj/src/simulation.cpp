#include "simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "diagnostics.hpp"
#include "errors.hpp"

namespace myopia {

std::string_view strategy_name(Strategy s) {
    switch (s) {
        case Strategy::Myopic: return "myopic";
        case Strategy::GlobalTStep: return "global";
        case Strategy::TStepAhead: return "ahead";
    }
    return "?";
}

Strategy parse_strategy(std::string_view text) {
    if (text == "myopic") return Strategy::Myopic;
    if (text == "global") return Strategy::GlobalTStep;
    if (text == "ahead") return Strategy::TStepAhead;
    throw ConfigError("strategy: unknown value '" + std::string(text) +
                      "' (expected myopic, global or ahead)");
}

void ExperimentConfig::validate() const {
    if (parameter_axes.size() != 2) throw ConfigError("parameters: exactly two parameter axes are required");
    for (const auto& a : parameter_axes) a.validate();
    design_axis.validate();
    if (true_params.size() != parameter_axes.size())
        throw ConfigError("true: one true value per parameter axis is required");
    for (double v : true_params)
        if (!std::isfinite(v)) throw ConfigError("true: parameter values must be finite");
    if (trials < 1) throw ConfigError("trials: must be >= 1");
    if (replications < 1) throw ConfigError("replications: must be >= 1");
    horizon.validate();
    if (strategy == Strategy::Myopic && horizon.steps != 1)
        throw ConfigError("horizon: the myopic strategy requires horizon = 1");
    if (diagnostics && diagnostics_replications < 1)
        throw ConfigError("diagnostics_replications: must be >= 1 when diagnostics are enabled");
    if (!(node_budget >= 1.0)) throw ConfigError("node_budget: must be >= 1");
    if (model.kind == ModelKind::MemoryRetention && model.word_count < 1)
        throw ConfigError("word_count: must be >= 1");
    (void)axis_mapping(model.kind, ParameterGrid(parameter_axes));
}

namespace {

ExperimentConfig validated(ExperimentConfig config) {
    config.validate();
    return config;
}

}  // namespace

Experiment::Experiment(ExperimentConfig config)
    : config_(validated(std::move(config))),
      grid_(config_.parameter_axes),
      designs_(config_.design_axis) {
    context_ = std::make_shared<const ModelContext>(likelihood_tensor(config_.model, grid_, designs_));
    const auto mapping = axis_mapping(config_.model.kind, grid_);
    true_model_ = {config_.true_params[mapping[0]], config_.true_params[mapping[1]]};
    // Rejects true parameters outside the model domain up front.
    (void)success_probability(config_.model, true_model_, designs_.value(0));
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

double uniform_variate(const RandomKey& key) {
    std::uint64_t h = splitmix64(key.seed);
    h = splitmix64(h ^ key.replication);
    h = splitmix64(h ^ (key.trial * 0xd1b54a32d192ed03ULL));
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

int simulate_response(const ResponseModel& model, std::span<const double> true_params,
                      double design, const RandomKey& key) {
    const auto pmf = response_pmf(model, true_params, design);
    const double u = uniform_variate(key);
    double cumulative = 0.0;
    int last_possible = 0;
    for (std::size_t y = 0; y < pmf.size(); ++y) {
        if (pmf[y] <= 0.0) continue;
        last_possible = static_cast<int>(y);
        cumulative += pmf[y];
        if (u < cumulative) return last_possible;
    }
    return last_possible;
}

ReplicationResult run_replication(const Experiment& experiment, std::size_t replication,
                                  bool with_diagnostics) {
    const auto& cfg = experiment.config();
    const auto& ctx = experiment.context();
    const BellmanOptions bellman{cfg.node_budget};
    const bool reuse_analysis = cfg.strategy == Strategy::TStepAhead && cfg.horizon.steps == 2 &&
                                cfg.horizon.discount == 1.0;

    ReplicationResult result;
    result.records.reserve(static_cast<std::size_t>(cfg.trials));
    if (with_diagnostics) result.diagnostics.reserve(static_cast<std::size_t>(cfg.trials));

    GridDistribution belief = uniform_prior(experiment.grid());
    PolicyTree plan;
    std::vector<std::size_t> block_responses;

    for (int t = 1; t <= cfg.trials; ++t) {
        try {
            std::optional<TwoTrialAnalysis> analysis;
            if (with_diagnostics) {
                analysis = analyze_two_trial(belief, ctx);
                result.diagnostics.push_back(TrialDiagnostics{
                    analysis->decomposition.immediate, analysis->decomposition.expected_next,
                    analysis->stats.ud, analysis->stats.rd, analysis->stats.degenerate});
            }

            std::size_t design = 0;
            switch (cfg.strategy) {
                case Strategy::Myopic:
                    design = myopic_design(belief, ctx);
                    break;
                case Strategy::TStepAhead:
                    // The two-trial analysis is the exact two-step solve.
                    design = (analysis && reuse_analysis)
                                 ? analysis->global_design
                                 : step_ahead_design(belief, ctx, cfg.horizon, bellman);
                    break;
                case Strategy::GlobalTStep:
                    if ((t - 1) % cfg.horizon.steps == 0) {
                        plan = bellman_solve(belief, ctx, cfg.horizon, bellman);
                        block_responses.clear();
                    }
                    design = policy_walk(plan, block_responses).back();
                    break;
            }

            const double design_value = experiment.designs().value(design);
            const int response = simulate_response(
                cfg.model, experiment.true_model_params(), design_value,
                RandomKey{cfg.seed, replication, static_cast<std::uint64_t>(t)});
            block_responses.push_back(static_cast<std::size_t>(response));
            belief = bayes_update(belief, design, static_cast<std::size_t>(response), ctx);

            result.records.push_back(TrialRecord{t, design, design_value, response, entropy(belief),
                                                 posterior_mean(belief, experiment.grid())});
        } catch (const ImpossibleObservation& e) {
            throw ImpossibleObservation("replication " + std::to_string(replication) + ", trial " +
                                        std::to_string(t) + ": " + e.what());
        }
    }
    return result;
}

namespace {

template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& body) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::exception_ptr error;
    std::size_t error_index = count;

    auto worker = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                // Report the lowest failing index so the error does not depend on scheduling.
                if (i < error_index) {
                    error_index = i;
                    error = std::current_exception();
                }
            }
        }
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned k = 0; k < threads; ++k) pool.emplace_back(worker);
    }
    if (error) std::rethrow_exception(error);
}

}  // namespace

MetricsTable run_campaign(const ExperimentConfig& config, const RunOptions& options) {
    const Experiment experiment(config);
    const auto& cfg = experiment.config();
    const auto reps = static_cast<std::size_t>(cfg.replications);
    const std::size_t diag_reps =
        cfg.diagnostics ? std::min(reps, static_cast<std::size_t>(cfg.diagnostics_replications)) : 0;

    std::vector<ReplicationResult> results(reps);
    parallel_for(reps, options.threads, [&](std::size_t r) {
        results[r] = run_replication(experiment, r, r < diag_reps);
    });

    MetricsTable table;
    table.model = std::string(model_kind_name(cfg.model.kind));
    table.strategy = cfg.strategy;
    table.steps = cfg.horizon.steps;
    for (const auto& a : cfg.parameter_axes) table.parameter_names.push_back(a.name);
    table.design_values = experiment.designs().values();
    table.replications = cfg.replications;
    table.diagnostics_replications = static_cast<int>(diag_reps);
    table.initial_entropy = entropy(uniform_prior(experiment.grid()));

    const std::size_t dim = cfg.parameter_axes.size();
    const std::size_t n_design = experiment.designs().size();
    for (int t = 0; t < cfg.trials; ++t) {
        const auto ti = static_cast<std::size_t>(t);
        TrialMetrics row;
        row.trial = t + 1;
        std::vector<CompensatedSum> sq(dim);
        CompensatedSum ent;
        for (const auto& res : results) {
            const auto& rec = res.records[ti];
            for (std::size_t k = 0; k < dim; ++k) {
                const double err = rec.posterior_mean[k] - cfg.true_params[k];
                sq[k].add(err * err);
            }
            ent.add(rec.posterior_entropy);
        }
        const double n = static_cast<double>(reps);
        for (std::size_t k = 0; k < dim; ++k) row.mse.push_back(sq[k].value() / n);
        row.mean_entropy = ent.value() / n;
        row.info_gain = table.initial_entropy - row.mean_entropy;

        if (diag_reps > 0) {
            CompensatedSum ud, rd;
            std::vector<CompensatedSum> imm(n_design), next(n_design);
            for (std::size_t r = 0; r < diag_reps; ++r) {
                const auto& dg = results[r].diagnostics[ti];
                ud.add(dg.ud);
                rd.add(dg.rd);
                table.min_ud = std::min(table.min_ud, dg.ud);
                for (std::size_t j = 0; j < n_design; ++j) {
                    imm[j].add(dg.immediate[j]);
                    next[j].add(dg.expected_next[j]);
                }
            }
            const double m = static_cast<double>(diag_reps);
            std::vector<double> mean_imm(n_design), mean_next(n_design);
            for (std::size_t j = 0; j < n_design; ++j) {
                mean_imm[j] = imm[j].value() / m;
                mean_next[j] = next[j].value() / m;
            }
            row.ud_mean = ud.value() / m;
            row.rd_mean = rd.value() / m;
            row.width_immediate = range_width(mean_imm);
            row.width_next = range_width(mean_next);
            table.mean_immediate.push_back(std::move(mean_imm));
            table.mean_expected_next.push_back(std::move(mean_next));
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

std::vector<ExperimentConfig> comparison_configs(const ExperimentConfig& base) {
    const int steps = base.horizon.steps > 1 ? base.horizon.steps : 2;
    std::vector<ExperimentConfig> out(3, base);
    out[0].strategy = Strategy::Myopic;
    out[0].horizon.steps = 1;
    out[1].strategy = Strategy::TStepAhead;
    out[1].horizon.steps = steps;
    out[2].strategy = Strategy::GlobalTStep;
    out[2].horizon.steps = steps;
    return out;
}

std::vector<MetricsTable> compare_strategies(std::span<const ExperimentConfig> configs,
                                             const RunOptions& options) {
    if (configs.empty()) throw ConfigError("compare: no configurations given");
    for (const auto& c : configs) {
        ExperimentConfig normalized = c;
        normalized.strategy = configs.front().strategy;
        normalized.horizon = configs.front().horizon;
        if (!(normalized == configs.front()))
            throw ConfigError("compare: configurations must differ only in strategy and horizon");
    }
    std::vector<MetricsTable> tables;
    tables.reserve(configs.size());
    for (const auto& c : configs) tables.push_back(run_campaign(c, options));
    return tables;
}

}  // namespace myopia

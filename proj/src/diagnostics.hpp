#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "grid.hpp"
#include "strategy.hpp"

namespace myopia {

/// Per-design split of the two-trial objective into the immediate utility and
/// the expected optimal utility of the following trial.
struct Decomposition {
    std::vector<double> immediate;
    std::vector<double> expected_next;
};

struct UtilityStats {
    double ud = 0.0;            // two-trial optimum minus greedy two-step total
    double rd = 0.0;            // ud / myopic_max, 0 when degenerate
    double myopic_max = 0.0;    // max_d u(d | prior)
    double global_value = 0.0;  // root value of the exact two-trial solve (discount 1)
    double myopic_total = 0.0;  // greedy first design followed by the best second design
    bool degenerate = false;    // myopic_max == 0
};

struct TwoTrialAnalysis {
    Decomposition decomposition;
    UtilityStats stats;
    std::size_t global_design = 0;  // argmax of immediate + expected_next
    std::size_t myopic_design = 0;
};

/// Everything the decomposition study needs, from a single exhaustive two-trial pass.
TwoTrialAnalysis analyze_two_trial(const GridDistribution& prior, const ModelContext& ctx);

Decomposition two_trial_decomposition(const GridDistribution& prior, const ModelContext& ctx);
UtilityStats utility_difference(const GridDistribution& prior, const ModelContext& ctx);

/// Expected cumulative utility of the greedy policy rolled out `steps` trials
/// over every response path.
double greedy_rollout_value(const GridDistribution& prior, const ModelContext& ctx, int steps,
                            double discount = 1.0);

struct OracleResult {
    double value = 0.0;
    std::size_t policies = 0;
};

/// Maximum expected cumulative utility over every response-contingent design
/// assignment, by explicit enumeration. Shares no code with bellman_solve.
OracleResult brute_force_policy_oracle(const GridDistribution& prior, const ModelContext& ctx,
                                       const HorizonSpec& horizon,
                                       std::size_t max_policies = 10'000'000);

/// One randomized small instance: random prior and random likelihood table.
struct OracleInstance {
    GridDistribution prior;
    ModelContext context;
    int steps;
};

OracleInstance random_oracle_instance(std::uint64_t seed, std::size_t index);

struct OracleBatteryReport {
    std::size_t instances = 0;
    double max_deviation = 0.0;           // |bellman - brute force|
    double worst_monotonicity = 0.0;      // most negative V(T+1) - V(T)
    double worst_dominance = 0.0;         // most negative V(2) - greedy two-step value
    double worst_decomposition = 0.0;     // |max(immediate + next) - V(2)|
};

OracleBatteryReport run_oracle_battery(std::uint64_t seed, std::size_t instances);

}  // namespace myopia

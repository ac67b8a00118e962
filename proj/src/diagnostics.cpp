#include "diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "errors.hpp"

namespace myopia {

TwoTrialAnalysis analyze_two_trial(const GridDistribution& prior, const ModelContext& ctx) {
    auto table = two_step_table(prior, ctx);
    TwoTrialAnalysis out;
    std::vector<double> totals(table.n_design);
    for (std::size_t d = 0; d < totals.size(); ++d) totals[d] = table.immediate[d] + table.expected_next[d];
    out.global_design = argmax_lowest(totals);
    out.myopic_design = argmax_lowest(table.immediate);

    auto& s = out.stats;
    s.global_value = totals[out.global_design];
    s.myopic_max = table.immediate[out.myopic_design];
    s.myopic_total = totals[out.myopic_design];
    s.ud = s.global_value - s.myopic_total;
    s.degenerate = !(s.myopic_max > 0.0);
    s.rd = s.degenerate ? 0.0 : s.ud / s.myopic_max;

    out.decomposition.immediate = std::move(table.immediate);
    out.decomposition.expected_next = std::move(table.expected_next);
    return out;
}

Decomposition two_trial_decomposition(const GridDistribution& prior, const ModelContext& ctx) {
    return analyze_two_trial(prior, ctx).decomposition;
}

UtilityStats utility_difference(const GridDistribution& prior, const ModelContext& ctx) {
    return analyze_two_trial(prior, ctx).stats;
}

double greedy_rollout_value(const GridDistribution& prior, const ModelContext& ctx, int steps,
                            double discount) {
    if (steps < 1) throw ContractViolation("greedy rollout needs at least one step");
    const std::size_t d = myopic_design(prior, ctx);
    double value = mutual_information(prior, d, ctx);
    if (steps == 1) return value;
    const auto pmf = predictive_pmf(prior, d, ctx);
    for (std::size_t y = 0; y < pmf.size(); ++y) {
        if (!(pmf[y] > 0.0)) continue;
        value += discount * pmf[y] *
                 greedy_rollout_value(bayes_update(prior, d, y, ctx), ctx, steps - 1, discount);
    }
    return value;
}

namespace {

// The oracle works on plain vectors and recomputes everything from the
// likelihood table directly.
using Weights = std::vector<double>;

double direct_mi(const Weights& p, std::size_t d, const LikelihoodTable& lik) {
    double mi = 0.0;
    for (std::size_t y = 0; y < lik.n_response(); ++y) {
        double marginal = 0.0;
        for (std::size_t i = 0; i < p.size(); ++i) marginal += p[i] * lik(i, d, y);
        if (marginal <= 0.0) continue;
        for (std::size_t i = 0; i < p.size(); ++i) {
            const double joint = p[i] * lik(i, d, y);
            if (joint > 0.0) mi += joint * std::log(lik(i, d, y) / marginal);
        }
    }
    return mi;
}

// Heap-ordered history tree: node k has children k*|Y| + 1 + y.
double rollout(const std::vector<std::size_t>& policy, std::size_t node, const Weights& p,
               const LikelihoodTable& lik, int remaining, double discount) {
    const std::size_t d = policy[node];
    double value = direct_mi(p, d, lik);
    if (remaining == 1) return value;
    const std::size_t n_resp = lik.n_response();
    for (std::size_t y = 0; y < n_resp; ++y) {
        Weights post(p.size());
        double evidence = 0.0;
        for (std::size_t i = 0; i < p.size(); ++i) {
            post[i] = p[i] * lik(i, d, y);
            evidence += post[i];
        }
        if (evidence <= 0.0) continue;
        for (double& w : post) w /= evidence;
        value += discount * evidence *
                 rollout(policy, node * n_resp + 1 + y, post, lik, remaining - 1, discount);
    }
    return value;
}

}  // namespace

OracleResult brute_force_policy_oracle(const GridDistribution& prior, const ModelContext& ctx,
                                       const HorizonSpec& horizon, std::size_t max_policies) {
    horizon.validate();
    if (prior.size() != ctx.n_theta()) throw ContractViolation("oracle: prior and model sizes differ");
    const auto& lik = ctx.table();
    const std::size_t n_design = lik.n_design();

    std::size_t history_nodes = 0;
    double level = 1.0;
    for (int k = 0; k < horizon.steps; ++k) {
        history_nodes += static_cast<std::size_t>(level);
        level *= static_cast<double>(lik.n_response());
    }
    const double policy_count = std::pow(static_cast<double>(n_design), static_cast<double>(history_nodes));
    if (policy_count > static_cast<double>(max_policies))
        throw ResourceError("oracle: " + std::to_string(policy_count) + " policies exceed the limit");

    const Weights p(prior.weights().begin(), prior.weights().end());
    std::vector<std::size_t> policy(history_nodes, 0);
    OracleResult best;
    best.value = -1.0;
    // Odometer over all design assignments.
    while (true) {
        const double v = rollout(policy, 0, p, lik, horizon.steps, horizon.discount);
        ++best.policies;
        best.value = std::max(best.value, v);
        std::size_t k = 0;
        while (k < history_nodes && ++policy[k] == n_design) policy[k++] = 0;
        if (k == history_nodes) break;
    }
    return best;
}

OracleInstance random_oracle_instance(std::uint64_t seed, std::size_t index) {
    std::mt19937_64 rng(seed ^ (0x9e3779b97f4a7c15ULL * (index + 1)));
    std::uniform_int_distribution<std::size_t> theta_count(2, 4);
    std::uniform_int_distribution<std::size_t> design_count(1, 3);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const std::size_t n_theta = theta_count(rng);
    const std::size_t n_design = design_count(rng);

    Eigen::MatrixXd columns(static_cast<Eigen::Index>(n_theta), static_cast<Eigen::Index>(2 * n_design));
    for (std::size_t i = 0; i < n_theta; ++i)
        for (std::size_t d = 0; d < n_design; ++d) {
            const double p = unit(rng);
            columns(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(2 * d)) = 1.0 - p;
            columns(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(2 * d + 1)) = p;
        }
    std::vector<double> w(n_theta);
    for (double& x : w) x = -std::log1p(-unit(rng)) + 1e-3;
    const int steps = (index % 2 == 0) ? 2 : 3;
    return OracleInstance{GridDistribution::normalized(std::move(w)),
                          ModelContext(LikelihoodTable(std::move(columns), n_design, 2)), steps};
}

OracleBatteryReport run_oracle_battery(std::uint64_t seed, std::size_t instances) {
    OracleBatteryReport report;
    for (std::size_t n = 0; n < instances; ++n) {
        const auto inst = random_oracle_instance(seed, n);
        const HorizonSpec horizon{inst.steps, 1.0};
        const double bellman = bellman_solve(inst.prior, inst.context, horizon).value;
        const double brute = brute_force_policy_oracle(inst.prior, inst.context, horizon).value;
        report.max_deviation = std::max(report.max_deviation, std::abs(bellman - brute));

        double previous = -INFINITY;
        double v2 = 0.0;
        for (int t = 1; t <= 3; ++t) {
            const double v = bellman_solve(inst.prior, inst.context, HorizonSpec{t, 1.0}).value;
            if (t > 1) report.worst_monotonicity = std::min(report.worst_monotonicity, v - previous);
            if (t == 2) v2 = v;
            previous = v;
        }
        const double greedy = greedy_rollout_value(inst.prior, inst.context, 2);
        report.worst_dominance = std::min(report.worst_dominance, v2 - greedy);
        const auto stats = utility_difference(inst.prior, inst.context);
        report.worst_decomposition = std::max(report.worst_decomposition, std::abs(stats.global_value - v2));
        ++report.instances;
    }
    return report;
}

}  // namespace myopia

#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "grid.hpp"
#include "response_model.hpp"

namespace myopia {

/// Likelihood table plus the per-(theta, design) negative conditional
/// entropies sum_y p ln p. Immutable and shareable across threads.
class ModelContext {
public:
    explicit ModelContext(LikelihoodTable table);

    const LikelihoodTable& table() const { return table_; }
    std::size_t n_theta() const { return table_.n_theta(); }
    std::size_t n_design() const { return table_.n_design(); }
    std::size_t n_response() const { return table_.n_response(); }

    /// [L | H]: the likelihood columns followed by one sum_y p ln p column per design.
    const Eigen::MatrixXd& basis() const { return basis_; }

private:
    LikelihoodTable table_;
    Eigen::MatrixXd basis_;
};

struct HorizonSpec {
    int steps = 1;
    double discount = 1.0;

    /// Throws ConfigError unless steps >= 1 and 0 < discount <= 1.
    void validate() const;
    bool operator==(const HorizonSpec&) const = default;
};

/// Response-contingent plan. Leaves sit at depth `steps`; every internal node
/// has one child per response. Children reached with zero predictive
/// probability are placeholders (reachable == false, design 0, value 0).
struct PolicyTree {
    std::size_t design = 0;
    double value = 0.0;
    bool reachable = true;
    std::vector<PolicyTree> children;

    int depth() const;
    std::size_t node_count() const;
};

struct BellmanOptions {
    /// Upper bound on the number of posterior nodes the exact recursion may visit.
    double node_budget = 1e7;
};

std::vector<double> predictive_pmf(const GridDistribution& prior, std::size_t design,
                                   const ModelContext& ctx);

/// Mutual information between parameter and response, evaluated as the
/// direct double sum over (theta, y).
double mutual_information(const GridDistribution& prior, std::size_t design,
                          const ModelContext& ctx);

GridDistribution bayes_update(const GridDistribution& prior, std::size_t design,
                              std::size_t response, const ModelContext& ctx);

/// Mutual information for every design, computed in one matrix-vector pass.
std::vector<double> utility_curve(const GridDistribution& prior, const ModelContext& ctx);

/// Index of the largest entry; ties go to the lowest index.
std::size_t argmax_lowest(std::span<const double> values);

std::size_t myopic_design(const GridDistribution& prior, const ModelContext& ctx);

/// Exhaustive two-trial lookahead from one prior.
struct TwoStepTable {
    std::size_t n_design = 0;
    std::size_t n_response = 0;
    std::vector<double> immediate;      // u(d | prior)
    std::vector<double> expected_next;  // sum_y p(y|prior,d) max_d' u(d' | posterior)
    std::vector<double> predictive;     // p(y | prior, d) at d*|Y| + y
    std::vector<double> branch_value;   // max_d' u(d' | posterior) at d*|Y| + y (0 if unreachable)
    std::vector<std::size_t> branch_design;  // argmax_d' at d*|Y| + y
};

TwoStepTable two_step_table(const GridDistribution& prior, const ModelContext& ctx);

/// Number of posterior nodes an exact solve of the given horizon visits.
double bellman_node_estimate(const ModelContext& ctx, int steps);

PolicyTree bellman_solve(const GridDistribution& prior, const ModelContext& ctx,
                         const HorizonSpec& horizon, const BellmanOptions& options = {});

/// Designs along the branch selected by the observed responses, starting at the root.
std::vector<std::size_t> policy_walk(const PolicyTree& tree, std::span<const std::size_t> observed);

std::size_t step_ahead_design(const GridDistribution& prior, const ModelContext& ctx,
                              const HorizonSpec& horizon, const BellmanOptions& options = {});

}  // namespace myopia

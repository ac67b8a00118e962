#include "strategy.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "errors.hpp"

namespace myopia {

namespace {

using Eigen::Index;

Index idx(std::size_t i) { return static_cast<Index>(i); }

void require_aligned(const GridDistribution& prior, const ModelContext& ctx) {
    if (prior.size() != ctx.n_theta())
        throw ContractViolation("prior has " + std::to_string(prior.size()) +
                                " weights, model grid has " + std::to_string(ctx.n_theta()));
}

void require_design(std::size_t design, const ModelContext& ctx) {
    if (design >= ctx.n_design())
        throw ContractViolation("design index " + std::to_string(design) + " out of range");
}

Eigen::Map<const Eigen::VectorXd> as_vector(const GridDistribution& prior) {
    return {prior.weights().data(), idx(prior.size())};
}

// Mutual information for each design from B^T p, where the first |D||Y|
// entries are the predictive masses and the last |D| are sum_theta p sum_y L ln L.
// `mass` rescales an unnormalized p.
void utilities_from_moments(const Eigen::Ref<const Eigen::VectorXd>& moments, double mass,
                            std::size_t n_design, std::size_t n_response, double* out) {
    const std::size_t n_cols = n_design * n_response;
    const double inv = 1.0 / mass;
    for (std::size_t d = 0; d < n_design; ++d) {
        double marginal = 0.0;
        for (std::size_t y = 0; y < n_response; ++y)
            marginal += xlogx(moments(idx(d * n_response + y)) * inv);
        out[d] = std::max(0.0, moments(idx(n_cols + d)) * inv - marginal);
    }
}

// Rows of the basis restricted to the support of `prior`; empty when the
// prior has full support.
std::vector<Index> support_of(const GridDistribution& prior) {
    std::vector<Index> rows;
    std::size_t zeros = 0;
    for (std::size_t i = 0; i < prior.size(); ++i)
        if (prior[i] == 0.0) ++zeros;
    if (zeros == 0) return rows;
    rows.reserve(prior.size() - zeros);
    for (std::size_t i = 0; i < prior.size(); ++i)
        if (prior[i] != 0.0) rows.push_back(idx(i));
    return rows;
}

bool is_point_mass(const GridDistribution& prior) {
    std::size_t nonzero = 0;
    for (std::size_t i = 0; i < prior.size() && nonzero < 2; ++i)
        if (prior[i] != 0.0) ++nonzero;
    return nonzero <= 1;
}

}  // namespace

ModelContext::ModelContext(LikelihoodTable table) : table_(std::move(table)) {
    const std::size_t n_cols = table_.n_design() * table_.n_response();
    basis_.resize(idx(table_.n_theta()), idx(n_cols + table_.n_design()));
    basis_.leftCols(idx(n_cols)) = table_.columns();
    for (std::size_t i = 0; i < table_.n_theta(); ++i)
        for (std::size_t d = 0; d < table_.n_design(); ++d) {
            double h = 0.0;
            for (std::size_t y = 0; y < table_.n_response(); ++y) h += xlogx(table_(i, d, y));
            basis_(idx(i), idx(n_cols + d)) = h;
        }
}

void HorizonSpec::validate() const {
    if (steps < 1) throw ConfigError("horizon: steps must be >= 1");
    if (!(discount > 0.0 && discount <= 1.0)) throw ConfigError("horizon: discount must lie in (0, 1]");
}

int PolicyTree::depth() const {
    int deepest = 0;
    for (const auto& c : children) deepest = std::max(deepest, c.depth());
    return 1 + deepest;
}

std::size_t PolicyTree::node_count() const {
    std::size_t n = 1;
    for (const auto& c : children) n += c.node_count();
    return n;
}

std::vector<double> predictive_pmf(const GridDistribution& prior, std::size_t design,
                                   const ModelContext& ctx) {
    require_aligned(prior, ctx);
    require_design(design, ctx);
    std::vector<double> pmf(ctx.n_response());
    for (std::size_t y = 0; y < pmf.size(); ++y) {
        CompensatedSum s;
        for (std::size_t i = 0; i < prior.size(); ++i) s.add(prior[i] * ctx.table()(i, design, y));
        pmf[y] = s.value();
    }
    return pmf;
}

double mutual_information(const GridDistribution& prior, std::size_t design,
                          const ModelContext& ctx) {
    const auto marginal = predictive_pmf(prior, design, ctx);
    CompensatedSum mi;
    for (std::size_t i = 0; i < prior.size(); ++i) {
        if (prior[i] == 0.0) continue;
        for (std::size_t y = 0; y < marginal.size(); ++y) {
            const double l = ctx.table()(i, design, y);
            if (l == 0.0) continue;
            mi.add(l * prior[i] * std::log(l / marginal[y]));
        }
    }
    return mi.value();
}

GridDistribution bayes_update(const GridDistribution& prior, std::size_t design,
                              std::size_t response, const ModelContext& ctx) {
    require_aligned(prior, ctx);
    require_design(design, ctx);
    if (response >= ctx.n_response())
        throw ContractViolation("response " + std::to_string(response) + " outside the response space");
    std::vector<double> post(prior.size());
    CompensatedSum evidence;
    for (std::size_t i = 0; i < prior.size(); ++i) {
        post[i] = prior[i] * ctx.table()(i, design, response);
        evidence.add(post[i]);
    }
    const double z = evidence.value();
    if (!(z > 0.0))
        throw ImpossibleObservation("response " + std::to_string(response) + " at design " +
                                    std::to_string(design) + " has zero evidence under the prior");
    return GridDistribution::normalized(std::move(post));
}

std::vector<double> utility_curve(const GridDistribution& prior, const ModelContext& ctx) {
    require_aligned(prior, ctx);
    std::vector<double> curve(ctx.n_design(), 0.0);
    // A point mass carries no uncertainty; skip the rounding of the moment route.
    if (is_point_mass(prior)) return curve;
    const Eigen::VectorXd moments = ctx.basis().transpose() * as_vector(prior);
    utilities_from_moments(moments, 1.0, ctx.n_design(), ctx.n_response(), curve.data());
    return curve;
}

std::size_t argmax_lowest(std::span<const double> values) {
    if (values.empty()) throw ContractViolation("argmax of an empty sequence");
    std::size_t best = 0;
    for (std::size_t j = 1; j < values.size(); ++j)
        if (values[j] > values[best]) best = j;
    return best;
}

std::size_t myopic_design(const GridDistribution& prior, const ModelContext& ctx) {
    return argmax_lowest(utility_curve(prior, ctx));
}

TwoStepTable two_step_table(const GridDistribution& prior, const ModelContext& ctx) {
    require_aligned(prior, ctx);
    const std::size_t n_design = ctx.n_design();
    const std::size_t n_resp = ctx.n_response();
    const std::size_t n_cols = n_design * n_resp;

    // Restricting to the prior's support leaves every sum unchanged.
    const auto rows = support_of(prior);
    Eigen::MatrixXd basis_support;
    Eigen::VectorXd p_support;
    if (!rows.empty()) {
        basis_support = ctx.basis()(rows, Eigen::all);
        p_support = as_vector(prior)(rows);
    }
    const Eigen::MatrixXd& basis = rows.empty() ? ctx.basis() : basis_support;
    const Eigen::Ref<const Eigen::VectorXd> p =
        rows.empty() ? Eigen::Ref<const Eigen::VectorXd>(as_vector(prior))
                     : Eigen::Ref<const Eigen::VectorXd>(p_support);

    TwoStepTable out;
    out.n_design = n_design;
    out.n_response = n_resp;
    out.immediate.resize(n_design);
    out.expected_next.assign(n_design, 0.0);
    out.predictive.resize(n_cols);
    out.branch_value.assign(n_cols, 0.0);
    out.branch_design.assign(n_cols, 0);

    const Eigen::VectorXd moments = basis.transpose() * p;
    utilities_from_moments(moments, 1.0, n_design, n_resp, out.immediate.data());
    for (std::size_t j = 0; j < n_cols; ++j) out.predictive[j] = moments(idx(j));
    if (is_point_mass(prior)) {
        std::fill(out.immediate.begin(), out.immediate.end(), 0.0);
        return out;
    }

    // Column j of `joint` holds, for the unnormalized posterior p * L_j, the
    // same moments used above; one GEMM covers every (design, response) branch.
    const Eigen::MatrixXd weighted = basis.leftCols(idx(n_cols)).array().colwise() * p.array();
    const Eigen::MatrixXd joint = basis.transpose() * weighted;

    std::vector<double> next(n_design);
    for (std::size_t d = 0; d < n_design; ++d) {
        CompensatedSum expected;
        for (std::size_t y = 0; y < n_resp; ++y) {
            const std::size_t j = d * n_resp + y;
            const double mass = out.predictive[j];
            if (!(mass > 0.0)) continue;
            utilities_from_moments(joint.col(idx(j)), mass, n_design, n_resp, next.data());
            const std::size_t best = argmax_lowest(next);
            out.branch_design[j] = best;
            out.branch_value[j] = next[best];
            expected.add(mass * next[best]);
        }
        out.expected_next[d] = expected.value();
    }
    return out;
}

double bellman_node_estimate(const ModelContext& ctx, int steps) {
    const double branching = static_cast<double>(ctx.n_design() * ctx.n_response());
    double total = 0.0;
    double level = 1.0;
    for (int k = 0; k < steps; ++k) {
        total += level;
        level *= branching;
    }
    return total;
}

namespace {

PolicyTree placeholder(int levels, std::size_t n_response) {
    PolicyTree node;
    node.reachable = false;
    if (levels > 1) node.children.assign(n_response, placeholder(levels - 1, n_response));
    return node;
}

PolicyTree solve_node(const GridDistribution& prior, const ModelContext& ctx, int levels,
                      double discount) {
    const std::size_t n_resp = ctx.n_response();
    if (levels == 1) {
        const auto curve = utility_curve(prior, ctx);
        const std::size_t best = argmax_lowest(curve);
        return PolicyTree{best, curve[best], true, {}};
    }
    if (levels == 2) {
        const auto table = two_step_table(prior, ctx);
        std::vector<double> totals(table.n_design);
        for (std::size_t d = 0; d < totals.size(); ++d)
            totals[d] = table.immediate[d] + discount * table.expected_next[d];
        const std::size_t best = argmax_lowest(totals);
        PolicyTree node{best, totals[best], true, {}};
        node.children.reserve(n_resp);
        for (std::size_t y = 0; y < n_resp; ++y) {
            const std::size_t j = best * n_resp + y;
            if (table.predictive[j] > 0.0)
                node.children.push_back(PolicyTree{table.branch_design[j], table.branch_value[j], true, {}});
            else
                node.children.push_back(placeholder(1, n_resp));
        }
        return node;
    }

    const auto immediate = utility_curve(prior, ctx);
    PolicyTree best_node;
    bool have_best = false;
    for (std::size_t d = 0; d < ctx.n_design(); ++d) {
        const auto pmf = predictive_pmf(prior, d, ctx);
        std::vector<PolicyTree> children;
        children.reserve(n_resp);
        CompensatedSum future;
        for (std::size_t y = 0; y < n_resp; ++y) {
            if (!(pmf[y] > 0.0)) {
                children.push_back(placeholder(levels - 1, n_resp));
                continue;
            }
            children.push_back(solve_node(bayes_update(prior, d, y, ctx), ctx, levels - 1, discount));
            future.add(pmf[y] * children.back().value);
        }
        const double total = immediate[d] + discount * future.value();
        if (!have_best || total > best_node.value) {
            best_node = PolicyTree{d, total, true, std::move(children)};
            have_best = true;
        }
    }
    return best_node;
}

}  // namespace

PolicyTree bellman_solve(const GridDistribution& prior, const ModelContext& ctx,
                         const HorizonSpec& horizon, const BellmanOptions& options) {
    require_aligned(prior, ctx);
    horizon.validate();
    const double nodes = bellman_node_estimate(ctx, horizon.steps);
    if (nodes > options.node_budget)
        throw ResourceError("exact " + std::to_string(horizon.steps) + "-trial solve would visit " +
                            std::to_string(nodes) + " nodes, above the budget of " +
                            std::to_string(options.node_budget));
    return solve_node(prior, ctx, horizon.steps, horizon.discount);
}

std::vector<std::size_t> policy_walk(const PolicyTree& tree, std::span<const std::size_t> observed) {
    std::vector<std::size_t> designs{tree.design};
    const PolicyTree* node = &tree;
    for (std::size_t y : observed) {
        if (node->children.empty())
            throw ContractViolation("observation sequence is longer than the policy horizon");
        if (y >= node->children.size())
            throw ContractViolation("response " + std::to_string(y) + " outside the response space");
        node = &node->children[y];
        designs.push_back(node->design);
    }
    return designs;
}

std::size_t step_ahead_design(const GridDistribution& prior, const ModelContext& ctx,
                              const HorizonSpec& horizon, const BellmanOptions& options) {
    return bellman_solve(prior, ctx, horizon, options).design;
}

}  // namespace myopia

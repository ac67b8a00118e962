#include "response_model.hpp"

#include <cmath>
#include <sstream>

#include "errors.hpp"

namespace myopia {

std::string_view model_kind_name(ModelKind kind) {
    switch (kind) {
        case ModelKind::GapAcceptance: return "gap";
        case ModelKind::VisualPsychometric: return "psychometric";
        case ModelKind::MemoryRetention: return "memory";
    }
    return "?";
}

ModelKind parse_model_kind(std::string_view text) {
    if (text == "gap") return ModelKind::GapAcceptance;
    if (text == "psychometric") return ModelKind::VisualPsychometric;
    if (text == "memory") return ModelKind::MemoryRetention;
    throw ConfigError("model: unknown kind '" + std::string(text) +
                      "' (expected gap, psychometric or memory)");
}

std::array<std::string_view, 2> parameter_names(ModelKind kind) {
    switch (kind) {
        case ModelKind::GapAcceptance: return {"T_cr", "sigma"};
        case ModelKind::VisualPsychometric: return {"s", "b"};
        case ModelKind::MemoryRetention: return {"a", "b"};
    }
    return {"", ""};
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

std::size_t ResponseModel::response_count() const {
    if (kind == ModelKind::MemoryRetention) {
        if (word_count < 1) throw ConfigError("memory model: word_count must be positive");
        return static_cast<std::size_t>(word_count) + 1;
    }
    return 2;
}

std::vector<int> ResponseModel::response_space() const {
    std::vector<int> out(response_count());
    for (std::size_t y = 0; y < out.size(); ++y) out[y] = static_cast<int>(y);
    return out;
}

namespace {

void require_dimension(std::span<const double> theta) {
    if (theta.size() != 2) throw ContractViolation("response models take two parameters");
}

double binomial_coefficient(int n, int k) {
    double c = 1.0;
    for (int i = 1; i <= k; ++i) c = c * static_cast<double>(n - k + i) / static_cast<double>(i);
    return c;
}

}  // namespace

double success_probability(const ResponseModel& model, std::span<const double> theta,
                           double design) {
    require_dimension(theta);
    switch (model.kind) {
        case ModelKind::GapAcceptance: {
            const double critical = theta[0];
            const double sigma = theta[1];
            if (!(sigma > 0.0)) throw DomainError("gap acceptance: sigma must be > 0");
            return normal_cdf((design - critical) / sigma);
        }
        case ModelKind::VisualPsychometric: {
            const double slope = theta[0];
            const double threshold = theta[1];
            const double arg = std::pow(10.0, std::pow(10.0, slope) * (design - threshold));
            if (std::isnan(arg)) throw DomainError("visual psychometric: undefined argument");
            return normal_cdf(arg);
        }
        case ModelKind::MemoryRetention: {
            const double p = theta[0] * std::exp(-theta[1] * design);
            if (!(p >= 0.0 && p <= 1.0))
                throw DomainError("memory retention: a*exp(-b*d) outside [0,1]");
            return p;
        }
    }
    throw ContractViolation("unknown model kind");
}

double likelihood(const ResponseModel& model, std::span<const double> theta, double design,
                  int response) {
    const auto n_resp = static_cast<int>(model.response_count());
    if (response < 0 || response >= n_resp)
        throw ContractViolation("response " + std::to_string(response) +
                                " outside the response space");
    const double p = success_probability(model, theta, design);
    if (model.kind != ModelKind::MemoryRetention) return response == 1 ? p : 1.0 - p;
    const int n = model.word_count;
    return binomial_coefficient(n, response) * std::pow(p, response) *
           std::pow(1.0 - p, n - response);
}

std::vector<double> response_pmf(const ResponseModel& model, std::span<const double> theta,
                                 double design) {
    const auto n_resp = model.response_count();
    std::vector<double> pmf(n_resp);
    for (std::size_t y = 0; y < n_resp; ++y)
        pmf[y] = likelihood(model, theta, design, static_cast<int>(y));
    return pmf;
}

std::array<std::size_t, 2> axis_mapping(ModelKind kind, const ParameterGrid& grid) {
    const auto names = parameter_names(kind);
    if (grid.dimension() != names.size())
        throw ConfigError("model '" + std::string(model_kind_name(kind)) + "' needs " +
                          std::to_string(names.size()) + " parameter axes");
    std::array<std::size_t, 2> mapping{};
    for (std::size_t k = 0; k < names.size(); ++k) {
        bool found = false;
        for (std::size_t a = 0; a < grid.dimension(); ++a) {
            if (grid.axes()[a].name == names[k]) {
                if (found) throw ConfigError("parameter '" + std::string(names[k]) + "' appears twice");
                mapping[k] = a;
                found = true;
            }
        }
        if (!found)
            throw ConfigError("model '" + std::string(model_kind_name(kind)) +
                              "' needs an axis named '" + std::string(names[k]) + "'");
    }
    return mapping;
}

LikelihoodTable::LikelihoodTable(std::size_t n_theta, std::size_t n_design, std::size_t n_response)
    : n_theta_(n_theta),
      n_design_(n_design),
      n_response_(n_response),
      columns_(Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n_theta),
                                     static_cast<Eigen::Index>(n_design * n_response))) {
    if (n_theta == 0 || n_design == 0 || n_response == 0)
        throw ContractViolation("likelihood table dimensions must be positive");
}

LikelihoodTable::LikelihoodTable(Eigen::MatrixXd columns, std::size_t n_design,
                                 std::size_t n_response)
    : n_theta_(static_cast<std::size_t>(columns.rows())),
      n_design_(n_design),
      n_response_(n_response),
      columns_(std::move(columns)) {
    if (n_theta_ == 0 || n_design == 0 || n_response == 0)
        throw ContractViolation("likelihood table dimensions must be positive");
    if (static_cast<std::size_t>(columns_.cols()) != n_design * n_response)
        throw ContractViolation("likelihood table has the wrong number of columns");
    if (!(columns_.array() >= 0.0).all() || !columns_.allFinite())
        throw ContractViolation("likelihood entries must be finite and nonnegative");
    if (max_normalization_error() > 1e-12)
        throw ContractViolation("likelihood slices must each sum to one");
}

double LikelihoodTable::max_normalization_error() const {
    double worst = 0.0;
    for (std::size_t i = 0; i < n_theta_; ++i)
        for (std::size_t j = 0; j < n_design_; ++j) {
            double s = 0.0;
            for (std::size_t y = 0; y < n_response_; ++y) s += (*this)(i, j, y);
            worst = std::max(worst, std::abs(s - 1.0));
        }
    return worst;
}

LikelihoodTable likelihood_tensor(const ResponseModel& model, const ParameterGrid& grid,
                                  const DesignGrid& designs) {
    const auto mapping = axis_mapping(model.kind, grid);
    LikelihoodTable table(grid.size(), designs.size(), model.response_count());
    std::array<double, 2> theta{};
    for (std::size_t i = 0; i < grid.size(); ++i) {
        theta[0] = grid.coord(i, mapping[0]);
        theta[1] = grid.coord(i, mapping[1]);
        for (std::size_t j = 0; j < designs.size(); ++j) {
            std::vector<double> pmf;
            try {
                pmf = response_pmf(model, theta, designs.value(j));
            } catch (const DomainError& e) {
                std::ostringstream msg;
                msg << e.what() << " at grid point " << i << " (" << theta[0] << ", " << theta[1]
                    << "), design " << j << " (" << designs.value(j) << ")";
                throw DomainError(msg.str());
            }
            for (std::size_t y = 0; y < pmf.size(); ++y) table.at(i, j, y) = pmf[y];
        }
    }
    return table;
}

}  // namespace myopia

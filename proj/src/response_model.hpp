#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "grid.hpp"

namespace myopia {

enum class ModelKind { GapAcceptance, VisualPsychometric, MemoryRetention };

std::string_view model_kind_name(ModelKind kind);
/// Accepts "gap", "psychometric", "memory"; throws ConfigError otherwise.
ModelKind parse_model_kind(std::string_view text);

/// Canonical parameter names in the order success_probability expects them:
/// gap (T_cr, sigma), psychometric (s, b), memory (a, b).
std::array<std::string_view, 2> parameter_names(ModelKind kind);

/// Standard normal CDF via erfc.
double normal_cdf(double x);

struct ResponseModel {
    ModelKind kind = ModelKind::GapAcceptance;
    int word_count = 15;  // memory retention only

    std::size_t response_count() const;
    /// Outcome labels 0..response_count()-1.
    std::vector<int> response_space() const;
    bool operator==(const ResponseModel&) const = default;
};

/// Success probability for a parameter vector in canonical order.
double success_probability(const ResponseModel& model, std::span<const double> theta, double design);
double likelihood(const ResponseModel& model, std::span<const double> theta, double design, int response);
std::vector<double> response_pmf(const ResponseModel& model, std::span<const double> theta, double design);

/// Maps each canonical model parameter to a grid axis, by axis name.
/// Throws ConfigError when the axes do not name exactly the model's parameters.
std::array<std::size_t, 2> axis_mapping(ModelKind kind, const ParameterGrid& grid);

/// Tabulated p(y | theta_i, d_j) for every grid point, design and response.
/// Storage is one column per (design, response) pair, column index j*|Y| + y,
/// with theta contiguous inside a column.
class LikelihoodTable {
public:
    LikelihoodTable(std::size_t n_theta, std::size_t n_design, std::size_t n_response);
    /// Wraps a precomputed matrix of shape n_theta x (n_design * n_response).
    /// Checks that every (theta, design) slice is a pmf within 1e-12.
    LikelihoodTable(Eigen::MatrixXd columns, std::size_t n_design, std::size_t n_response);

    std::size_t n_theta() const { return n_theta_; }
    std::size_t n_design() const { return n_design_; }
    std::size_t n_response() const { return n_response_; }

    std::size_t column(std::size_t design, std::size_t response) const {
        return design * n_response_ + response;
    }
    double operator()(std::size_t theta, std::size_t design, std::size_t response) const {
        return columns_(static_cast<Eigen::Index>(theta),
                        static_cast<Eigen::Index>(column(design, response)));
    }
    double& at(std::size_t theta, std::size_t design, std::size_t response) {
        return columns_(static_cast<Eigen::Index>(theta),
                        static_cast<Eigen::Index>(column(design, response)));
    }
    const Eigen::MatrixXd& columns() const { return columns_; }

    /// Max over (theta, design) of |sum_y p(y) - 1|.
    double max_normalization_error() const;

private:
    std::size_t n_theta_;
    std::size_t n_design_;
    std::size_t n_response_;
    Eigen::MatrixXd columns_;
};

LikelihoodTable likelihood_tensor(const ResponseModel& model, const ParameterGrid& grid,
                                  const DesignGrid& designs);

}  // namespace myopia

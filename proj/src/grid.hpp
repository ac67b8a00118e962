#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace myopia {

/// One linearly spaced axis, endpoints inclusive.
struct AxisSpec {
    std::string name;
    double lo = 0.0;
    double hi = 1.0;
    std::size_t count = 2;

    /// Throws ConfigError unless lo < hi, count >= 2 and both bounds are finite.
    void validate() const;
    double point(std::size_t i) const;
    std::vector<double> points() const;

    bool operator==(const AxisSpec&) const = default;
};

/// Cartesian product of parameter axes, flattened row-major (last axis fastest).
class ParameterGrid {
public:
    explicit ParameterGrid(std::vector<AxisSpec> axes);

    std::size_t size() const { return size_; }
    std::size_t dimension() const { return axes_.size(); }
    const std::vector<AxisSpec>& axes() const { return axes_; }

    /// Coordinate of point i along axis k.
    double coord(std::size_t i, std::size_t k) const { return coords_[i * axes_.size() + k]; }
    std::vector<double> point(std::size_t i) const;

private:
    std::vector<AxisSpec> axes_;
    std::size_t size_ = 0;
    std::vector<double> coords_;
};

class DesignGrid {
public:
    explicit DesignGrid(AxisSpec axis);
    /// A grid over explicitly listed values (sorted ascending, distinct).
    DesignGrid(std::string name, std::vector<double> values);

    std::size_t size() const { return values_.size(); }
    const std::string& name() const { return name_; }
    double value(std::size_t j) const { return values_[j]; }
    const std::vector<double>& values() const { return values_; }

private:
    std::string name_;
    std::vector<double> values_;
};

/// Normalized nonnegative weights over the points of a grid.
class GridDistribution {
public:
    static constexpr double kNormTolerance = 1e-12;

    /// Validates nonnegativity and normalization; throws ContractViolation.
    explicit GridDistribution(std::vector<double> weights);
    /// Divides by the total mass. Throws ContractViolation when the mass is zero.
    static GridDistribution normalized(std::vector<double> weights);
    static GridDistribution point_mass(std::size_t n, std::size_t at);

    std::size_t size() const { return weights_.size(); }
    double operator[](std::size_t i) const { return weights_[i]; }
    std::span<const double> weights() const { return weights_; }

private:
    struct Trusted {};
    GridDistribution(std::vector<double> weights, Trusted) : weights_(std::move(weights)) {}

    std::vector<double> weights_;
};

ParameterGrid build_grid(std::vector<AxisSpec> axes);
GridDistribution uniform_prior(const ParameterGrid& grid);
GridDistribution uniform_prior(std::size_t n);

/// Shannon entropy in nats with 0 ln 0 = 0.
double entropy(const GridDistribution& dist);
/// Entropy of a raw weight vector that must sum to one within 1e-12.
double entropy(std::span<const double> weights);

std::vector<double> posterior_mean(const GridDistribution& dist, const ParameterGrid& grid);

/// max - min of a nonempty sequence.
double range_width(std::span<const double> curve);

/// x ln x with the 0 ln 0 = 0 convention.
inline double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

/// Neumaier-compensated running sum.
class CompensatedSum {
public:
    void add(double x);
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

}  // namespace myopia

#include "grid.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"

namespace myopia {

void AxisSpec::validate() const {
    if (!std::isfinite(lo) || !std::isfinite(hi))
        throw ConfigError("axis '" + name + "': bounds must be finite");
    if (!(lo < hi)) throw ConfigError("axis '" + name + "': lo must be < hi");
    if (count < 2) throw ConfigError("axis '" + name + "': count must be >= 2");
}

double AxisSpec::point(std::size_t i) const {
    // Pin the last point so the upper endpoint is exact.
    if (i + 1 == count) return hi;
    return lo + static_cast<double>(i) * (hi - lo) / static_cast<double>(count - 1);
}

std::vector<double> AxisSpec::points() const {
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) out[i] = point(i);
    return out;
}

ParameterGrid::ParameterGrid(std::vector<AxisSpec> axes) : axes_(std::move(axes)) {
    if (axes_.empty()) throw ConfigError("parameter grid needs at least one axis");
    size_ = 1;
    for (const auto& a : axes_) {
        a.validate();
        size_ *= a.count;
    }
    const std::size_t dim = axes_.size();
    coords_.resize(size_ * dim);
    for (std::size_t i = 0; i < size_; ++i) {
        std::size_t rest = i;
        for (std::size_t k = dim; k-- > 0;) {
            coords_[i * dim + k] = axes_[k].point(rest % axes_[k].count);
            rest /= axes_[k].count;
        }
    }
}

std::vector<double> ParameterGrid::point(std::size_t i) const {
    const auto dim = axes_.size();
    return {coords_.begin() + static_cast<std::ptrdiff_t>(i * dim),
            coords_.begin() + static_cast<std::ptrdiff_t>((i + 1) * dim)};
}

DesignGrid::DesignGrid(AxisSpec axis) : name_(axis.name) {
    axis.validate();
    values_ = axis.points();
}

DesignGrid::DesignGrid(std::string name, std::vector<double> values)
    : name_(std::move(name)), values_(std::move(values)) {
    if (values_.empty()) throw ConfigError("design grid '" + name_ + "' is empty");
    for (std::size_t j = 1; j < values_.size(); ++j)
        if (!(values_[j - 1] < values_[j]))
            throw ConfigError("design grid '" + name_ + "' must be strictly ascending");
}

GridDistribution::GridDistribution(std::vector<double> weights) : weights_(std::move(weights)) {
    if (weights_.empty()) throw ContractViolation("distribution over an empty grid");
    CompensatedSum total;
    for (double w : weights_) {
        if (!(w >= 0.0) || !std::isfinite(w))
            throw ContractViolation("distribution weights must be finite and nonnegative");
        total.add(w);
    }
    if (std::abs(total.value() - 1.0) > kNormTolerance)
        throw ContractViolation("distribution is not normalized");
}

GridDistribution GridDistribution::normalized(std::vector<double> weights) {
    CompensatedSum total;
    for (double w : weights) {
        if (!(w >= 0.0) || !std::isfinite(w))
            throw ContractViolation("distribution weights must be finite and nonnegative");
        total.add(w);
    }
    const double z = total.value();
    if (!(z > 0.0)) throw ContractViolation("cannot normalize a zero-mass vector");
    for (double& w : weights) w /= z;
    return GridDistribution(std::move(weights), Trusted{});
}

GridDistribution GridDistribution::point_mass(std::size_t n, std::size_t at) {
    if (at >= n) throw ContractViolation("point mass index out of range");
    std::vector<double> w(n, 0.0);
    w[at] = 1.0;
    return GridDistribution(std::move(w), Trusted{});
}

ParameterGrid build_grid(std::vector<AxisSpec> axes) { return ParameterGrid(std::move(axes)); }

GridDistribution uniform_prior(std::size_t n) {
    if (n == 0) throw ContractViolation("uniform prior over an empty grid");
    return GridDistribution(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

GridDistribution uniform_prior(const ParameterGrid& grid) { return uniform_prior(grid.size()); }

double entropy(std::span<const double> weights) {
    CompensatedSum total;
    CompensatedSum h;
    for (double w : weights) {
        if (!(w >= 0.0)) throw ContractViolation("entropy of negative weight");
        total.add(w);
        h.add(-xlogx(w));
    }
    if (std::abs(total.value() - 1.0) > GridDistribution::kNormTolerance)
        throw ContractViolation("entropy of an unnormalized vector");
    return std::max(0.0, h.value());
}

double entropy(const GridDistribution& dist) { return entropy(dist.weights()); }

std::vector<double> posterior_mean(const GridDistribution& dist, const ParameterGrid& grid) {
    if (dist.size() != grid.size())
        throw ContractViolation("posterior_mean: distribution and grid sizes differ");
    const std::size_t dim = grid.dimension();
    std::vector<CompensatedSum> acc(dim);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double w = dist[i];
        if (w == 0.0) continue;
        for (std::size_t k = 0; k < dim; ++k) acc[k].add(w * grid.coord(i, k));
    }
    std::vector<double> mean(dim);
    for (std::size_t k = 0; k < dim; ++k) {
        // Rounding can push the weighted sum a hair past the box.
        const auto& ax = grid.axes()[k];
        mean[k] = std::clamp(acc[k].value(), ax.lo, ax.hi);
    }
    return mean;
}

double range_width(std::span<const double> curve) {
    if (curve.empty()) throw ContractViolation("range_width of an empty curve");
    const auto [lo, hi] = std::minmax_element(curve.begin(), curve.end());
    return *hi - *lo;
}

void CompensatedSum::add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
        comp_ += (sum_ - t) + x;
    else
        comp_ += (x - t) + sum_;
    sum_ = t;
}

}  // namespace myopia

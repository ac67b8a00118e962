#include "response_model.hpp"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "errors.hpp"

namespace myopia {
namespace {

const ResponseModel kGap{ModelKind::GapAcceptance, 15};
const ResponseModel kVisual{ModelKind::VisualPsychometric, 15};
const ResponseModel kMemory{ModelKind::MemoryRetention, 15};

std::vector<double> theta(double a, double b) { return {a, b}; }

TEST(NormalCdf, Values) {
    EXPECT_EQ(normal_cdf(0.0), 0.5);
    EXPECT_NEAR(normal_cdf(1.0), 0.84134474606854293, 1e-15);
    EXPECT_NEAR(normal_cdf(-1.0), 1.0 - 0.84134474606854293, 1e-15);
    EXPECT_EQ(normal_cdf(INFINITY), 1.0);
}

TEST(SuccessProbability, Examples) {
    EXPECT_EQ(success_probability(kGap, theta(7, 2.004), 7.0), 0.5);
    EXPECT_DOUBLE_EQ(success_probability(kMemory, theta(0.7103, 0.0833), 0.0), 0.7103);
    // Exponent 10^s (d - b) is zero at d = b, so the argument is 10^0 = 1.
    EXPECT_NEAR(success_probability(kVisual, theta(0.6312, 2.3643), 2.3643), 0.84134474606854293, 1e-12);
}

TEST(SuccessProbability, DomainErrors) {
    EXPECT_THROW(success_probability(kGap, theta(7, 0.0), 5.0), DomainError);
    EXPECT_THROW(success_probability(kGap, theta(7, -1.0), 5.0), DomainError);
    EXPECT_THROW(success_probability(kMemory, theta(1.5, 0.0), 1.0), DomainError);
    EXPECT_THROW(success_probability(kMemory, theta(-0.1, 0.0), 1.0), DomainError);
    EXPECT_THROW(success_probability(kGap, std::vector<double>{1.0}, 1.0), ContractViolation);
}

TEST(Likelihood, Examples) {
    EXPECT_EQ(likelihood(kGap, theta(7, 2.004), 7.0, 0), 0.5);
    EXPECT_DOUBLE_EQ(likelihood(kMemory, theta(1, 0), 13.0, 15), 1.0);
    // C(15, 11) = 1365.
    EXPECT_NEAR(likelihood(kMemory, theta(0.7103, 0.0), 3.0, 11),
                1365.0 * std::pow(0.7103, 11) * std::pow(0.2897, 4), 1e-15);
    EXPECT_NEAR(likelihood(kMemory, theta(0.7103, 0.0), 3.0, 11), 0.22324749453627354, 1e-14);
    EXPECT_THROW(likelihood(kGap, theta(7, 2), 7.0, 2), ContractViolation);
    EXPECT_THROW(likelihood(kMemory, theta(0.5, 0.1), 7.0, 16), ContractViolation);
    EXPECT_THROW(likelihood(kMemory, theta(0.5, 0.1), 7.0, -1), ContractViolation);
}

TEST(ResponsePmf, Examples) {
    // Gap model with p = 0.3 at d = T_cr + sigma * Phi^{-1}(0.3) is awkward to hit
    // exactly; use the memory model with b = 0 instead for p = 0.3 and n = 1.
    const ResponseModel single{ModelKind::MemoryRetention, 1};
    const auto binary = response_pmf(single, theta(0.3, 0.0), 5.0);
    ASSERT_EQ(binary.size(), 2u);
    EXPECT_NEAR(binary[0], 0.7, 1e-15);
    EXPECT_NEAR(binary[1], 0.3, 1e-15);

    const auto zero = response_pmf(kMemory, theta(0.0, 0.5), 5.0);
    EXPECT_EQ(zero[0], 1.0);
    for (std::size_t y = 1; y < zero.size(); ++y) EXPECT_EQ(zero[y], 0.0);

    const auto pmf = response_pmf(kMemory, theta(0.7103, 0.0), 1.0);
    ASSERT_EQ(pmf.size(), 16u);
    const auto mode = std::max_element(pmf.begin(), pmf.end()) - pmf.begin();
    EXPECT_EQ(mode, 11);  // floor((n + 1) p)
}

TEST(ResponseModel, Spaces) {
    EXPECT_EQ(kGap.response_space(), (std::vector<int>{0, 1}));
    EXPECT_EQ(kVisual.response_count(), 2u);
    EXPECT_EQ(kMemory.response_count(), 16u);
}

TEST(Monotonicity, GapNondecreasingInDesign) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> crit(5, 10), sig(1, 5), des(0, 15);
    for (int rep = 0; rep < 500; ++rep) {
        const auto t = theta(crit(rng), sig(rng));
        double d1 = des(rng), d2 = des(rng);
        if (d1 > d2) std::swap(d1, d2);
        EXPECT_LE(success_probability(kGap, t, d1), success_probability(kGap, t, d2));
    }
}

TEST(Monotonicity, MemoryNonincreasingInLag) {
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> u(0, 1), lag(0, 50);
    for (int rep = 0; rep < 500; ++rep) {
        const auto t = theta(u(rng), u(rng));
        double d1 = lag(rng), d2 = lag(rng);
        if (d1 > d2) std::swap(d1, d2);
        EXPECT_GE(success_probability(kMemory, t, d1), success_probability(kMemory, t, d2));
    }
}

TEST(Bounds, VisualAtLeastHalf) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> b(0.7, 7), s(0, 10), d(0, 3);
    for (int rep = 0; rep < 2000; ++rep) {
        const double p = success_probability(kVisual, theta(s(rng), b(rng)), d(rng));
        EXPECT_GE(p, 0.5 - 1e-9);
        EXPECT_LE(p, 1.0);
    }
}

struct PresetCase {
    ResponseModel model;
    std::vector<AxisSpec> axes;
    AxisSpec design;
    std::size_t n_theta, n_design, n_response;
};

TEST(LikelihoodTensor, PresetGridsAreNormalized) {
    const std::vector<PresetCase> cases{
        {kGap, {{"T_cr", 5, 10, 20}, {"sigma", 1, 5, 20}}, {"gap", 4, 12, 25}, 400, 25, 2},
        {kVisual, {{"b", 0.7, 7, 50}, {"s", 0, 10, 50}}, {"intensity", 0, 3, 50}, 2500, 50, 2},
        {kMemory, {{"a", 0, 1, 20}, {"b", 0, 1, 20}}, {"lag", 0, 50, 50}, 400, 50, 16},
    };
    for (const auto& c : cases) {
        const auto grid = build_grid(c.axes);
        const auto table = likelihood_tensor(c.model, grid, DesignGrid(c.design));
        EXPECT_EQ(table.n_theta(), c.n_theta);
        EXPECT_EQ(table.n_design(), c.n_design);
        EXPECT_EQ(table.n_response(), c.n_response);
        EXPECT_LE(table.max_normalization_error(), 1e-12);
    }
}

TEST(LikelihoodTensor, SinglePointMatchesPmf) {
    const auto grid = build_grid({{"a", 0.6, 0.7, 2}, {"b", 0.1, 0.2, 2}});
    const DesignGrid designs("lag", {3.0});
    const auto table = likelihood_tensor(kMemory, grid, designs);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto p = grid.point(i);
        const auto pmf = response_pmf(kMemory, p, 3.0);
        for (std::size_t y = 0; y < pmf.size(); ++y) EXPECT_EQ(table(i, 0, y), pmf[y]);
    }
}

TEST(LikelihoodTensor, AxisMappingByName) {
    // Psychometric axes declared threshold-first still evaluate as (s, b).
    const auto grid = build_grid({{"b", 1, 2, 2}, {"s", 0, 1, 2}});
    const DesignGrid designs("intensity", {1.5});
    const auto table = likelihood_tensor(kVisual, grid, designs);
    // grid point 1 is (b = 1, s = 1)
    EXPECT_NEAR(table(1, 0, 1), success_probability(kVisual, theta(1.0, 1.0), 1.5), 0.0);
    EXPECT_THROW(axis_mapping(ModelKind::GapAcceptance, grid), ConfigError);
}

TEST(LikelihoodTensor, DomainErrorNamesIndices) {
    const auto grid = build_grid({{"T_cr", 5, 10, 3}, {"sigma", -1, 1, 3}});
    try {
        likelihood_tensor(kGap, grid, DesignGrid(AxisSpec{"gap", 4, 12, 3}));
        FAIL() << "expected DomainError";
    } catch (const DomainError& e) {
        EXPECT_NE(std::string(e.what()).find("grid point 0"), std::string::npos) << e.what();
    }
}

TEST(LikelihoodTable, RejectsNonPmfColumns) {
    Eigen::MatrixXd m(1, 2);
    m << 0.5, 0.6;
    EXPECT_THROW(LikelihoodTable(m, 1, 2), ContractViolation);
}

}  // namespace
}  // namespace myopia

#include <cmath>

#include <gtest/gtest.h>

#include "subreg/catalog.hpp"
#include "subreg/geneq.hpp"

using namespace subreg;

namespace {

GeneralizedEquation quadratic() {
    return {SmoothMap::polynomial({-1.0, 0.0, 1.0}), zero_map(), 1.0, "quadratic"};
}

}  // namespace

TEST(Example52, OperatorValues) {
    EXPECT_EQ(example_5_2_operator(1), 3.0);
    EXPECT_EQ(example_5_2_operator(2), 0.8);
    EXPECT_NEAR(example_5_2_operator(3), 0.03125, 1e-6);
    EXPECT_THROW(example_5_2_operator(0), std::invalid_argument);
    EXPECT_THROW(example_5_2_operator(7), std::invalid_argument);
}

TEST(Example52, FirstStepLandsOnQuarter) {
    const auto eq = example_5_2_equation();
    const auto r = subproblem_solve(eq, 0.5, 3.0, {-1.0, 1.0});
    ASSERT_TRUE(r.x_next);
    EXPECT_EQ(*r.x_next, 0.25);
    EXPECT_EQ(r.residual, 0.0);
}

TEST(Example52, TraceFollowsFactorialExponents) {
    SolveConfig cfg;
    cfg.window = {-1.0, 1.0};
    const auto t = solve(example_5_2_equation(), 0.5, example_5_2_schedule(), cfg);
    ASSERT_EQ(t.status, TraceStatus::Converged);
    ASSERT_EQ(t.iterates.size(), 5u);
    EXPECT_EQ(t.first_index, 1);
    const long fact[] = {1, 2, 6, 24, 120};
    for (std::size_t i = 0; i < 5; ++i) {
        const double expected = std::ldexp(1.0, static_cast<int>(-fact[i]));
        EXPECT_NEAR(t.iterates[i], expected, 1e-10 * expected) << i;
    }
    EXPECT_EQ(t.exponents[4], -120);
    for (double r : t.step_residuals) EXPECT_LE(r, 1e-12);
}

TEST(Subproblem, PicksRootNearestToCurrentIterate) {
    // 0 = x - 1 + |x|^{1/2}: x = ((sqrt 5 - 1) / 2)^2.
    const GeneralizedEquation eq{SmoothMap::zero(), sqrt_abs_map(), std::nullopt, "golden"};
    const auto r = subproblem_solve(eq, 1.0, 1.0, {-10.0, 10.0});
    ASSERT_TRUE(r.x_next);
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    EXPECT_NEAR(*r.x_next, phi * phi, 1e-12);
}

TEST(Subproblem, SolutionSetEdgeNearestIterate) {
    // With g = 0 and B = 0 every x >= 0 solves 0 in N(x); x_k itself is nearest.
    const GeneralizedEquation eq{SmoothMap::zero(), halfline_normal_cone_map(), std::nullopt, "cone"};
    const auto r = subproblem_solve(eq, 2.0, 0.0, {-10.0, 10.0});
    ASSERT_TRUE(r.x_next);
    EXPECT_EQ(*r.x_next, 2.0);
}

TEST(Subproblem, ReportsFailureWithScanMinimum) {
    const GeneralizedEquation eq{SmoothMap::polynomial({1.0, 0.0, 1.0}), zero_map(), std::nullopt, "no-root"};
    const auto r = subproblem_solve(eq, 0.0, 0.0, {-10.0, 10.0});
    EXPECT_FALSE(r.x_next);
    EXPECT_EQ(r.scan_minimum, 1.0);
    const auto t = solve(eq, 1.0, schedule::Newton{}, {});
    EXPECT_EQ(t.status, TraceStatus::SubproblemFailure);
    ASSERT_TRUE(t.failure_scan_minimum);
    EXPECT_NEAR(*t.failure_scan_minimum, 1.0, 1e-9);
}

TEST(Solve, NewtonFirstStepAndClosedFormAgreement) {
    const auto t = solve(quadratic(), 2.0, schedule::Newton{}, {});
    ASSERT_EQ(t.status, TraceStatus::Converged);
    EXPECT_EQ(t.iterates[1], 1.25);
    const double oracle[] = {2.0, 1.25, 1.025, 1.0003048780487804, 1.0000000464611474, 1.000000000000001};
    ASSERT_EQ(t.iterates.size(), 6u);
    for (std::size_t i = 0; i < 6; ++i) EXPECT_NEAR(t.iterates[i], oracle[i], 1e-12 * oracle[i]);
    for (std::size_t i = 0; i + 1 < t.iterates.size(); ++i) {
        const double x = t.iterates[i];
        EXPECT_NEAR(t.iterates[i + 1], x - (x * x - 1) / (2 * x), 1e-12);
        EXPECT_EQ(t.operators[i], 2 * x);
    }
}

TEST(Solve, HalflineComplementarityTakesOneNewtonStep) {
    const GeneralizedEquation eq{SmoothMap::polynomial({-2.0, 1.0}), halfline_normal_cone_map(), 2.0, "cone"};
    const auto t = solve(eq, 0.5, schedule::Newton{}, {});
    ASSERT_EQ(t.status, TraceStatus::Converged);
    ASSERT_EQ(t.iterates.size(), 2u);
    EXPECT_EQ(t.iterates[1], 2.0);
}

TEST(Solve, ChordConvergesLinearly) {
    SolveConfig cfg;
    cfg.max_iter = 100;
    const auto t = solve(quadratic(), 2.0, schedule::Chord{4.0}, cfg);
    ASSERT_EQ(t.status, TraceStatus::Converged);
    EXPECT_EQ(t.iterates.size(), 41u);
    for (double b : t.operators) EXPECT_EQ(b, 4.0);
}

TEST(Solve, BroydenUsesSecantSlopes) {
    SolveConfig cfg;
    cfg.max_iter = 100;
    const auto t = solve(quadratic(), 2.0, schedule::Broyden{4.0}, cfg);
    ASSERT_EQ(t.status, TraceStatus::Converged);
    ASSERT_GE(t.operators.size(), 2u);
    EXPECT_EQ(t.operators[0], 4.0);
    const double x0 = t.iterates[0], x1 = t.iterates[1];
    EXPECT_DOUBLE_EQ(t.operators[1], x0 + x1);
    EXPECT_LT(t.iterates.size(), 15u);
}

TEST(Solve, MaxIterAndValidation) {
    SolveConfig cfg;
    cfg.max_iter = 3;
    const auto t = solve(quadratic(), 2.0, schedule::Chord{4.0}, cfg);
    EXPECT_EQ(t.status, TraceStatus::MaxIter);
    EXPECT_EQ(t.iterates.size(), 4u);
    cfg.max_iter = -1;
    EXPECT_THROW(solve(quadratic(), 2.0, schedule::Newton{}, cfg), std::invalid_argument);
    EXPECT_EQ(schedule_name(example_5_2_schedule()), "example-5-2");
    EXPECT_EQ(schedule_name(schedule::Chord{}), "chord");
}

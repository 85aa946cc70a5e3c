#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "subreg/errors.hpp"
#include "subreg/interval_set.hpp"

using namespace subreg;

TEST(IntervalUnion, NormalizeMergesOverlappingAndTouchingParts) {
    const auto s = normalize({{3, 4}, {0, 1}, {1, 2}, {3.5, 5}, {7, 7}});
    ASSERT_EQ(s.parts().size(), 3u);
    EXPECT_EQ(s.parts()[0], (ClosedInterval{0, 2}));
    EXPECT_EQ(s.parts()[1], (ClosedInterval{3, 5}));
    EXPECT_EQ(s.parts()[2], (ClosedInterval{7, 7}));
}

TEST(IntervalUnion, NormalizeRejectsReversedAndNaN) {
    EXPECT_THROW(normalize({{2, 1}}), std::invalid_argument);
    EXPECT_THROW(normalize({{std::nan(""), 1}}), std::invalid_argument);
}

TEST(IntervalUnion, DistanceExamples) {
    const auto s = normalize({{0, 1}, {5, 6}});
    EXPECT_EQ(distance(3.0, s), 2.0);
    EXPECT_EQ(distance(0.5, s), 0.0);
    EXPECT_EQ(distance(-2.0, s), 2.0);
    EXPECT_EQ(distance(8.0, s), 2.0);
    EXPECT_EQ(distance(1.0, IntervalUnion::empty()), kInf);
    EXPECT_EQ(distance(1e300, IntervalUnion::whole_line()), 0.0);
    EXPECT_EQ(distance(-3.0, IntervalUnion::interval(-kInf, -4.0)), 1.0);
}

TEST(IntervalUnion, NearestPointTiesGoLow) {
    const auto s = normalize({{0, 1}, {5, 6}});
    EXPECT_EQ(nearest_point(3.0, s), 1.0);
    EXPECT_EQ(nearest_point(3.5, s), 5.0);
    EXPECT_EQ(nearest_point(0.25, s), 0.25);
    EXPECT_THROW(nearest_point(0.0, IntervalUnion::empty()), DomainError);
}

TEST(IntervalUnion, TransformsAndPrinting) {
    const auto s = normalize({{0, 1}, {5, 6}});
    EXPECT_EQ(s.shifted(1.0), normalize({{1, 2}, {6, 7}}));
    EXPECT_EQ(s.negated(), normalize({{-6, -5}, {-1, 0}}));
    EXPECT_EQ(s.scaled(2.0), normalize({{0, 2}, {10, 12}}));
    EXPECT_EQ(s.united(IntervalUnion::interval(1, 5)), IntervalUnion::interval(0, 6));
    EXPECT_EQ(IntervalUnion::empty().to_string(), "{}");
    EXPECT_TRUE(s.contains(5.5));
    EXPECT_FALSE(s.contains(3.0));
}

namespace {

std::vector<ClosedInterval> random_raw(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> n(0, 6);
    std::uniform_int_distribution<int> lattice(-40, 40);
    std::uniform_int_distribution<int> width(0, 12);
    std::uniform_int_distribution<int> shape(0, 11);
    std::vector<ClosedInterval> raw;
    for (int i = n(rng); i > 0; --i) {
        double a = lattice(rng) / 4.0;
        double b = a + width(rng) / 4.0;
        if (shape(rng) == 0) a = -kInf;
        if (shape(rng) == 1) b = kInf;
        raw.push_back({a, b});
    }
    return raw;
}

}  // namespace

TEST(IntervalUnionProperty, MergedDistanceMatchesRawListAndIsOneLipschitz) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> p(-15.0, 15.0);
    for (int c = 0; c < 20000; ++c) {
        const auto raw = random_raw(rng);
        const auto s = normalize(raw);
        for (std::size_t i = 1; i < s.parts().size(); ++i) ASSERT_LT(s.parts()[i - 1].hi, s.parts()[i].lo);
        EXPECT_EQ(normalize(std::vector<ClosedInterval>(s.parts())), s);
        const double a = p(rng), b = p(rng);
        ASSERT_EQ(distance(a, s), raw_distance(a, raw));
        if (s.is_empty()) continue;
        EXPECT_LE(std::abs(distance(a, s) - distance(b, s)), std::abs(a - b) * (1 + 1e-12) + 1e-12);
        const double n = nearest_point(a, s);
        EXPECT_TRUE(s.contains(n));
        EXPECT_EQ(std::abs(n - a), distance(a, s));
        for (const auto& part : raw) EXPECT_TRUE(s.contains(part.lo) || std::isinf(part.lo));
    }
}

TEST(IntervalUnionProperty, NegationReflectsDistances) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> p(-15.0, 15.0);
    for (int c = 0; c < 5000; ++c) {
        const auto s = normalize(random_raw(rng));
        const double a = p(rng);
        EXPECT_EQ(distance(a, s), distance(-a, s.negated()));
    }
}

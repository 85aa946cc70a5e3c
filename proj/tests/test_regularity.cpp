#include <algorithm>
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "subreg/catalog.hpp"
#include "subreg/regularity.hpp"

using namespace subreg;

TEST(Grid, SizeOffsetsAndSymmetry) {
    const GridSpec g{0.5, 4, 3, true};
    EXPECT_EQ(g.size(), 26u);
    const auto off = g.offsets();
    ASSERT_EQ(off.size(), 13u);
    EXPECT_EQ(off.front(), 0.5);
    EXPECT_EQ(off[4], 0.05);
    EXPECT_EQ(off.back(), 0.5 / 1000.0);
    EXPECT_TRUE(std::is_sorted(off.rbegin(), off.rend()));
    const auto pts = g.points(1.0);
    ASSERT_EQ(pts.size(), 26u);
    EXPECT_EQ(std::count(pts.begin(), pts.end(), 1.0), 0);
    EXPECT_THROW((GridSpec{-1.0, 4, 3, true}.validate()), std::invalid_argument);
}

TEST(Grid, RefinementContainsCoarsePoints) {
    const auto coarse = GridSpec{1.0, 7, 4, true}.points(0.0);
    auto fine = GridSpec{1.0, 14, 4, true}.points(0.0);
    std::sort(fine.begin(), fine.end());
    for (double x : coarse) EXPECT_TRUE(std::binary_search(fine.begin(), fine.end(), x)) << x;
}

TEST(Ratio, Conventions) {
    EXPECT_EQ(regularity_ratio(0.0, 0.0, 2.0), 0.0);
    EXPECT_EQ(regularity_ratio(1.0, 0.0, 2.0), kInf);
    EXPECT_EQ(regularity_ratio(1.0, kInf, 2.0), 0.0);
    EXPECT_EQ(regularity_ratio(2.0, 2.0, 2.0), 0.5);
}

TEST(Estimate, SqrtAbsStrongModulusMatchesClosedForm) {
    const auto m = sqrt_abs_map();
    const GridSpec grid{1.0, 1000, 5, true};
    const auto e2 = estimate_strong_subreg_modulus(m, {0, 0}, 2.0, grid);
    EXPECT_NEAR(e2.modulus, 1.0, 1e-12);
    EXPECT_EQ(e2.grid_points, 10002u);
    EXPECT_EQ(e2.excluded_points, 0u);
    // |x| / |x|^{1/2} = |x|^{1/2}, largest at |x| = 1.
    const auto e1 = estimate_strong_subreg_modulus(m, {0, 0}, 1.0, grid);
    EXPECT_NEAR(e1.modulus, 1.0, 1e-15);
    EXPECT_EQ(std::abs(e1.witness), 1.0);
    // |x|^{-1/4}, largest at the innermost point 1e-5.
    const auto e25 = estimate_strong_subreg_modulus(m, {0, 0}, 2.5, grid);
    EXPECT_NEAR(e25.modulus, std::pow(1e-5, -0.25), 1e-9);
    EXPECT_NEAR(std::abs(e25.witness), 1e-5, 1e-20);
}

TEST(Estimate, AgreesWithBruteForceOracle) {
    const auto& cat = catalog();
    for (const auto& e : cat) {
        const GridSpec grid{0.5, 25, 4, true};
        for (double q : {0.5, 1.0, 2.0, 3.0}) {
            const auto est = estimate_subreg_modulus(e.map, e.base, q, grid);
            double brute = 0.0;
            const auto target = e.map.inverse_eval(e.base.y);
            for (double x : grid.points(e.base.x)) {
                if (!e.map.in_domain(x)) continue;
                const double num = distance(x, target);
                const double den = distance(e.base.y, e.map.eval(x));
                double r = 0.0;
                if (num > 0.0) r = den == 0.0 ? kInf : (std::isinf(den) ? 0.0 : num / std::pow(den, q));
                brute = std::max(brute, r);
            }
            EXPECT_EQ(est.modulus, brute) << e.id << " q=" << q;
        }
    }
}

TEST(Estimate, SimpleMaps) {
    EXPECT_NEAR(estimate_strong_subreg_modulus(identity_map(), {0, 0}, 1.0, {}).modulus, 1.0, 1e-15);
    EXPECT_EQ(estimate_subreg_modulus(zero_map(), {0, 0}, 1.0, {}).modulus, 0.0);
    const auto strong_zero = estimate_strong_subreg_modulus(zero_map(), {0, 0}, 1.0, GridSpec{1.0, 10, 2, true});
    EXPECT_EQ(strong_zero.modulus, kInf);
    EXPECT_EQ(strong_zero.excluded_points, 42u);
    // Every x > 0 solves 0 in F(x), so the strong ratio is infinite there.
    const auto cone = estimate_strong_subreg_modulus(halfline_normal_cone_map(), {0, 0}, 1.0, {});
    EXPECT_EQ(cone.modulus, kInf);
}

TEST(Estimate, RejectsBaseOutsideGraphAndBadOrder) {
    EXPECT_THROW(estimate_strong_subreg_modulus(sqrt_abs_map(), {0, 1}, 2.0, {}), std::invalid_argument);
    EXPECT_THROW(estimate_strong_subreg_modulus(sqrt_abs_map(), {0, 0}, 0.0, {}), std::invalid_argument);
}

TEST(Estimate, WitnessReproducesModulus) {
    for (const auto& e : catalog()) {
        const auto est = estimate_strong_subreg_modulus(e.map, e.base, 2.0, GridSpec{0.5, 50, 4, true});
        EXPECT_EQ(subreg_ratio_at(e.map, e.base, 2.0, est.witness, SubregVariant::Strong), est.modulus) << e.id;
    }
}

TEST(Estimate, ThreadCountDoesNotChangeResult) {
    const auto m = s_map();
    const GridSpec grid{0.25, 300, 5, true};
    const auto a = sweep_subreg(m, {0, 0}, 2.0, grid, SubregVariant::Strong, {1, std::nullopt});
    const auto b = sweep_subreg(m, {0, 0}, 2.0, grid, SubregVariant::Strong, {4, std::nullopt});
    EXPECT_EQ(a.estimate.modulus, b.estimate.modulus);
    EXPECT_EQ(a.estimate.witness, b.estimate.witness);
    ASSERT_EQ(a.rows.size(), b.rows.size());
    for (std::size_t i = 0; i < a.rows.size(); ++i) EXPECT_EQ(a.rows[i].ratio, b.rows[i].ratio);
}

TEST(Estimate, TruncationFlagAppearsOnlyBelowCutoff) {
    const auto m = s_map();
    EXPECT_FALSE(estimate_strong_subreg_modulus(m, {0, 0}, 2.0, GridSpec{0.25, 10, 30, true}).truncation_active);
    EXPECT_TRUE(estimate_strong_subreg_modulus(m, {0, 0}, 2.0, GridSpec{0.25, 10, 40, true}).truncation_active);
}

TEST(Estimate, BracketedInverseForMapsWithoutOracle) {
    const auto m = sqrt_abs_map();
    const SetValuedMap blind("blind", m.domain(), [m](double x) { return m.eval(x); });
    const GridSpec grid{1.0, 50, 3, true};
    const auto exact = estimate_subreg_modulus(m, {0, 0}, 2.0, grid);
    const auto approx = estimate_subreg_modulus(blind, {0, 0}, 2.0, grid, {1, SearchWindow{{-2.0, 2.0}, 4096}});
    EXPECT_TRUE(approx.inverse_approximate);
    // The bracketed preimage is an outer approximation, so numerators and
    // the estimate can only shrink, by at most one cell width.
    EXPECT_LE(approx.modulus, exact.modulus);
    EXPECT_NEAR(approx.modulus, exact.modulus, 4.0 / 4096 + 1e-12);
}

TEST(EstimateProperty, OrderMonotonicityStrongDominanceAndRefinement) {
    std::mt19937_64 rng(19);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int c = 0; c < 300; ++c) {
        const auto& e = catalog()[static_cast<std::size_t>(u(rng) * catalog().size()) % catalog().size()];
        const double q = 0.25 + 3.0 * u(rng);
        const double q_bar = q + 2.0 * u(rng);
        const int ppd = 1 + static_cast<int>(20 * u(rng));
        const GridSpec grid{0.9 * u(rng) + 0.05, ppd, 3, true};
        const auto plain = sweep_subreg(e.map, e.base, q, grid, SubregVariant::Plain);
        const auto plain_bar = sweep_subreg(e.map, e.base, q_bar, grid, SubregVariant::Plain);
        const auto strong = sweep_subreg(e.map, e.base, q, grid, SubregVariant::Strong);
        bool dens_small = true;
        for (std::size_t i = 0; i < plain.rows.size(); ++i) {
            EXPECT_GE(strong.rows[i].ratio, plain.rows[i].ratio) << e.id;
            if (plain.rows[i].denominator <= 1.0)
                EXPECT_LE(plain.rows[i].ratio, plain_bar.rows[i].ratio * (1 + 1e-12)) << e.id;
            else
                dens_small = false;
        }
        EXPECT_GE(strong.estimate.modulus, plain.estimate.modulus);
        if (dens_small) {
            EXPECT_LE(plain.estimate.modulus, plain_bar.estimate.modulus * (1 + 1e-12)) << e.id;
        }
        GridSpec fine = grid;
        fine.points_per_decade *= 2;
        EXPECT_GE(estimate_subreg_modulus(e.map, e.base, q, fine).modulus, plain.estimate.modulus) << e.id;
    }
}

TEST(Classify, Rules) {
    const std::vector<double> radii{1e-1, 1e-2, 1e-3, 1e-4};
    EXPECT_EQ(classify_moduli(radii, {1, 1, 1, 1}).verdict, ScanVerdict::Bounded);
    EXPECT_EQ(classify_moduli(radii, {1, 10, 100, 1000}).verdict, ScanVerdict::BlowUp);
    EXPECT_EQ(classify_moduli(radii, {1, 1, kInf, kInf}).verdict, ScanVerdict::BlowUp);
    const auto slow = classify_moduli(radii, {1, 2, 4, 8});
    EXPECT_EQ(slow.verdict, ScanVerdict::Inconclusive);
    EXPECT_NEAR(slow.min_growth_per_decade, 2.0, 1e-12);
    EXPECT_THROW(classify_moduli({1e-1}, {1}), std::invalid_argument);
}

TEST(OrderScan, SqrtAbsOrders) {
    const std::vector<double> radii{1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
    const auto rep = order_scan(sqrt_abs_map(), {0, 0}, {1.0, 2.0, 2.5, 4.0}, radii, GridSpec{1.0, 100, 3, true});
    ASSERT_EQ(rep.verdicts.size(), 4u);
    EXPECT_EQ(rep.verdicts[0].classification.verdict, ScanVerdict::Bounded);
    EXPECT_EQ(rep.verdicts[1].classification.verdict, ScanVerdict::Bounded);
    // |x|^{1 - q/2} grows by 10^{1/4} per decade at q = 2.5: too slow for
    // the 10x blow-up rule.
    EXPECT_NEAR(rep.verdicts[2].classification.min_growth_per_decade, std::pow(10.0, 0.25), 1e-9);
    EXPECT_EQ(rep.verdicts[2].classification.verdict, ScanVerdict::Inconclusive);
    EXPECT_EQ(rep.verdicts[3].classification.verdict, ScanVerdict::BlowUp);
    ASSERT_TRUE(rep.q_star_lower && rep.q_star_upper);
    EXPECT_EQ(*rep.q_star_lower, 2.0);
    EXPECT_EQ(*rep.q_star_upper, 4.0);
    EXPECT_EQ(rep.cells.size(), 24u);
}

TEST(OrderScan, RejectsBadRadii) {
    EXPECT_THROW(order_scan(sqrt_abs_map(), {0, 0}, {1.0}, {1.0, 0.1}, {}), std::invalid_argument);
    EXPECT_THROW(order_scan(sqrt_abs_map(), {0, 0}, {}, {0.1, 0.01}, {}), std::invalid_argument);
}

TEST(OrderScan, IdentityAndSqrtSubdifferential) {
    const std::vector<double> radii{1e-1, 1e-2, 1e-3, 1e-4};
    // |x|^{1-q}: bounded at q = 1, exactly 10x per decade at q = 2.
    const auto id = order_scan(identity_map(), {0, 0}, {1.0, 2.0}, radii, GridSpec{1.0, 50, 2, true});
    EXPECT_EQ(id.verdicts[0].classification.verdict, ScanVerdict::Bounded);
    EXPECT_EQ(id.verdicts[1].classification.verdict, ScanVerdict::BlowUp);
    // 2^q |x|^{1+q/2} shrinks with the radius for every q.
    const auto sq = order_scan(subdiff_sqrt_map(), {0, 0}, {1.0, 2.0, 4.0, 8.0}, radii, GridSpec{1.0, 50, 2, true});
    for (const auto& v : sq.verdicts) EXPECT_EQ(v.classification.verdict, ScanVerdict::Bounded) << v.q;
    EXPECT_EQ(*sq.q_star_lower, 8.0);
    EXPECT_FALSE(sq.q_star_upper);
}

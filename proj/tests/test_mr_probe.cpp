#include <cmath>

#include <gtest/gtest.h>

#include "subreg/catalog.hpp"
#include "subreg/mr_probe.hpp"

using namespace subreg;

TEST(MrProbe, IdentityIsMetricallyRegular) {
    const auto rep = metric_regularity_probe(identity_map(), {0, 0}, {});
    EXPECT_EQ(rep.verdict, ScanVerdict::Bounded);
    EXPECT_NEAR(rep.kappa_hat, 1.0, 1e-12);
    EXPECT_EQ(rep.table.size(), 3u);
    EXPECT_TRUE(rep.sequence.empty());
}

TEST(MrProbe, PlateauGridQuotientsGrowJustUnderTenPerDecade) {
    // The sup is (1 + r) / (r 10^{-2}) at radius r: growth 10 (1 + r') / (1 + r)
    // per decade, below the 10x rule, so the grid alone stays inconclusive.
    const auto rep = metric_regularity_probe(subdiff_plateau_map(), {0, 0}, {});
    EXPECT_EQ(rep.verdict, ScanVerdict::Inconclusive);
    EXPECT_NEAR(rep.classification.min_growth_per_decade, 10.0 * 1.01 / 1.1, 1e-9);
    EXPECT_NEAR(rep.kappa_hat, 1.001 / 1e-5, 1e-6);
    for (std::size_t i = 1; i < rep.table.size(); ++i)
        EXPECT_GT(rep.table[i].sup_quotient, rep.table[i - 1].sup_quotient);
}

TEST(MrProbe, PlateauQuotientsAlongHarmonicPairs) {
    std::vector<std::pair<double, double>> pairs;
    for (int k = 2; k <= 25; ++k) pairs.emplace_back(1.0 / k, 1.0 / (2.0 * k));
    const auto rows = quotient_along_pairs(subdiff_plateau_map(), pairs, 2);
    ASSERT_EQ(rows.size(), 24u);
    for (const auto& r : rows) {
        EXPECT_EQ(r.numerator, 1.0 - 1.0 / r.k);
        EXPECT_EQ(r.denominator, 1.0 / (2.0 * r.k));
        EXPECT_NEAR(r.quotient, 2.0 * r.k - 2.0, 1e-12 * r.k);
    }
    EXPECT_GE(rows.back().quotient, 10.0);
}

TEST(MrProbe, StaircaseSequencesGrowLinearly) {
    const auto rows = q_map_lipschitz_sequences(q_map(), 3, 10);
    ASSERT_EQ(rows.size(), 8u);
    for (const auto& r : rows) {
        EXPECT_GE(r.quotient, r.k) << r.k;
        EXPECT_GT(r.alpha, 0.0);
        EXPECT_EQ(r.x1, r.x2);
    }
    const auto rep = metric_regularity_probe(q_map(), {0, 0}, {});
    EXPECT_TRUE(rep.sequence_unbounded);
    EXPECT_EQ(rep.verdict, ScanVerdict::BlowUp);
}

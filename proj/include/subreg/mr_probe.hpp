#pragma once

// Two-parameter (metric regularity) probes: sup of
// d(x; F^{-1}(y)) / d(y; F(x)) over shrinking neighborhoods of (x_bar, y_bar),
// plus quotients along explicit sequences.

#include <optional>
#include <vector>

#include "subreg/catalog.hpp"
#include "subreg/regularity.hpp"

namespace subreg {

/// Neighborhood sampling: for each radius r, both axes use
/// center +/- r * 10^{-j/ppd} (j = 0..decades*ppd) and the center itself.
struct XyGridSpec {
    std::vector<double> radii{1e-1, 1e-2, 1e-3};
    int points_per_decade = 4;
    int decades = 2;
};

struct MrRadiusRow {
    double radius = 0.0;
    double sup_quotient = 0.0;
    double witness_x = 0.0;
    double witness_y = 0.0;
};

struct PairQuotientRow {
    int k = 0;
    double x = 0.0;
    double y = 0.0;
    double numerator = 0.0;
    double denominator = 0.0;
    double quotient = 0.0;
};

/// One index of the two sequences (x_{1k}, y_{1k}) and (x_{2k}, y_{2k})
/// along which rho(x, y) = d(x; Q(y)) fails to be Lipschitz around (0,0).
struct LipschitzSequenceRow {
    int k = 0;
    double x1 = 0.0, y1 = 0.0;
    double x2 = 0.0, y2 = 0.0;
    double alpha = 0.0;
    double rho1 = 0.0, rho2 = 0.0;
    /// |rho1 - rho2| / ||(x1 - x2, y1 - y2)||.
    double quotient = 0.0;
};

struct MrProbeReport {
    /// BlowUp means "not metrically regular" on the sampled neighborhoods.
    ScanVerdict verdict = ScanVerdict::Inconclusive;
    ScanClassification classification;
    std::vector<MrRadiusRow> table;
    /// Largest sampled quotient at the smallest radius.
    double kappa_hat = 0.0;
    std::vector<LipschitzSequenceRow> sequence;
    /// Every sequence row has quotient >= k.
    bool sequence_unbounded = false;
};

MrProbeReport metric_regularity_probe(const SetValuedMap& map, BasePoint base, const XyGridSpec& grid,
                                      const BlowUpRule& rule = {}, const SweepOptions& options = {});

/// Sequences for the staircase map, k = k_lo..k_hi, with
/// alpha_k = min{1/(k 2^k), c^{-(k-1)} - c^{-k}} / 2 and c = 2^{1/3}.
/// `map` is the map whose values enter rho; the sequences themselves
/// always use c = 2^{1/3}.
std::vector<LipschitzSequenceRow> q_map_lipschitz_sequences(const SetValuedMap& map, int k_lo, int k_hi);

/// d(x; F^{-1}(y)) / d(y; F(x)) at each given pair, labelled k = first_k, ...
std::vector<PairQuotientRow> quotient_along_pairs(const SetValuedMap& map,
                                                  const std::vector<std::pair<double, double>>& pairs,
                                                  int first_k = 1, const SweepOptions& options = {});

}  // namespace subreg

#pragma once

// Grid estimators for (strong) metric q-subregularity moduli and the
// order scan built on them.

#include <optional>
#include <string>
#include <vector>

#include "subreg/catalog.hpp"
#include "subreg/grid.hpp"
#include "subreg/set_valued_map.hpp"

namespace subreg {

enum class SubregVariant { Plain, Strong };

struct SweepOptions {
    unsigned threads = 1;
    /// Used to bracket F^{-1}(y_bar) for maps without an inverse oracle.
    std::optional<SearchWindow> inverse_window;
};

struct RatioRow {
    double x = 0.0;
    double numerator = 0.0;
    double denominator = 0.0;
    double ratio = 0.0;
};

struct RegularityEstimate {
    SubregVariant variant = SubregVariant::Strong;
    double q = 1.0;
    /// Largest grid ratio; +inf when some x has d(y_bar; F(x)) = 0 but a
    /// positive numerator.
    double modulus = 0.0;
    double witness = 0.0;
    double radius = 0.0;
    /// Grid points with zero denominator and positive numerator.
    std::size_t excluded_points = 0;
    std::size_t grid_points = 0;
    bool truncation_active = false;
    bool inverse_approximate = false;
    GridSpec grid;
};

struct RatioSweep {
    std::vector<RatioRow> rows;
    RegularityEstimate estimate;
};

/// Ratio convention shared by every estimator: a zero numerator gives 0
/// (the point solves the inclusion), a zero denominator with a positive
/// numerator gives +inf, an empty value (infinite denominator) gives 0.
double regularity_ratio(double numerator, double denominator, double q);

/// Ratio at a single x, recomputed from scratch (used for witness checks).
double subreg_ratio_at(const SetValuedMap& map, BasePoint base, double q, double x, SubregVariant variant,
                       const SweepOptions& options = {});

RatioSweep sweep_subreg(const SetValuedMap& map, BasePoint base, double q, const GridSpec& grid,
                        SubregVariant variant, const SweepOptions& options = {});

/// max over the grid of d(x; F^{-1}(y_bar)) / d^q(y_bar; F(x)).
RegularityEstimate estimate_subreg_modulus(const SetValuedMap& map, BasePoint base, double q,
                                           const GridSpec& grid, const SweepOptions& options = {});

/// max over the grid of |x - x_bar| / d^q(y_bar; F(x)).
RegularityEstimate estimate_strong_subreg_modulus(const SetValuedMap& map, BasePoint base, double q,
                                                  const GridSpec& grid, const SweepOptions& options = {});

enum class ScanVerdict { Bounded, BlowUp, Inconclusive };
std::string to_string(ScanVerdict v);

/// Thresholds separating bounded from exploding moduli as the radius
/// shrinks.
struct BlowUpRule {
    /// Blow-up: the modulus grows at least this much per radius decade,
    /// between every pair of consecutive radii.
    double growth_per_decade = 10.0;
    /// Bounded: over the last two radius decades the modulus never exceeds
    /// (1 + window) times its value at the start of that span.
    double stability_window = 0.10;
};

struct ScanClassification {
    ScanVerdict verdict = ScanVerdict::Inconclusive;
    /// Smallest per-decade growth factor between consecutive radii.
    double min_growth_per_decade = 0.0;
    /// max eta over the last two decades divided by eta at their start.
    double tail_growth = 0.0;
};

/// radii strictly decreasing, one modulus per radius.
ScanClassification classify_moduli(const std::vector<double>& radii, const std::vector<double>& moduli,
                                   const BlowUpRule& rule = {});

struct OrderScanCell {
    double q = 0.0;
    double radius = 0.0;
    double eta_hat = 0.0;
    double witness = 0.0;
    bool truncation_active = false;
};

struct OrderVerdict {
    double q = 0.0;
    ScanClassification classification;
};

struct OrderScanReport {
    SubregVariant variant = SubregVariant::Strong;
    std::vector<OrderScanCell> cells;
    std::vector<OrderVerdict> verdicts;
    /// Largest bounded q and smallest blow-up q; the critical order lies
    /// between them.
    std::optional<double> q_star_lower;
    std::optional<double> q_star_upper;
};

/// For each q and radius, estimates the modulus on `grid` rescaled to that
/// radius. Radii must be < 1 and strictly decreasing.
OrderScanReport order_scan(const SetValuedMap& map, BasePoint base, const std::vector<double>& q_list,
                           const std::vector<double>& radii, const GridSpec& grid,
                           SubregVariant variant = SubregVariant::Strong, const BlowUpRule& rule = {},
                           const SweepOptions& options = {});

}  // namespace subreg

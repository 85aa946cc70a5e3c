#include "subreg/regularity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "parallel.hpp"

namespace subreg {

namespace {

constexpr double kGrowthSlack = 1e-9;

void check_base(const SetValuedMap& map, BasePoint base) {
    if (!map.in_domain(base.x) || !map.eval(base.x).contains(base.y))
        throw std::invalid_argument(
            fmt::format("{}: base point ({}, {}) is not in the graph", map.label(), base.x, base.y));
}

void check_order(double q) {
    if (!(q > 0.0) || !std::isfinite(q)) throw std::invalid_argument("order q must be positive");
}

// Is (ratio_a, x_a) a better witness than (ratio_b, x_b)? Larger ratio
// first, then smaller |x - x_bar|, then smaller x.
bool better_witness(double ratio_a, double x_a, double ratio_b, double x_b, double x_bar) {
    if (ratio_a != ratio_b) return ratio_a > ratio_b;
    const double da = std::abs(x_a - x_bar);
    const double db = std::abs(x_b - x_bar);
    if (da != db) return da < db;
    return x_a < x_b;
}

IntervalUnion target_preimage(const SetValuedMap& map, BasePoint base, const SweepOptions& options,
                              bool& approximate) {
    auto inv = map.inverse_eval(base.y, options.inverse_window);
    approximate = inv.approximate;
    return inv.set;
}

}  // namespace

std::string to_string(ScanVerdict v) {
    switch (v) {
        case ScanVerdict::Bounded: return "bounded";
        case ScanVerdict::BlowUp: return "blow-up";
        case ScanVerdict::Inconclusive: return "inconclusive";
    }
    return "?";
}

double regularity_ratio(double numerator, double denominator, double q) {
    if (numerator == 0.0) return 0.0;
    if (denominator == 0.0) return kInf;
    if (std::isinf(denominator)) return 0.0;
    return numerator / std::pow(denominator, q);
}

double subreg_ratio_at(const SetValuedMap& map, BasePoint base, double q, double x, SubregVariant variant,
                       const SweepOptions& options) {
    double numerator = std::abs(x - base.x);
    if (variant == SubregVariant::Plain) {
        bool approx = false;
        numerator = distance(x, target_preimage(map, base, options, approx));
    }
    return regularity_ratio(numerator, distance(base.y, map.eval(x)), q);
}

RatioSweep sweep_subreg(const SetValuedMap& map, BasePoint base, double q, const GridSpec& grid,
                        SubregVariant variant, const SweepOptions& options) {
    check_order(q);
    grid.validate();
    check_base(map, base);

    RatioSweep out;
    auto& est = out.estimate;
    est.variant = variant;
    est.q = q;
    est.radius = grid.radius;
    est.grid = grid;

    IntervalUnion preimage;
    if (variant == SubregVariant::Plain) preimage = target_preimage(map, base, options, est.inverse_approximate);

    std::vector<double> xs = grid.points(base.x);
    std::erase_if(xs, [&](double x) { return !map.in_domain(x); });
    out.rows.resize(xs.size());
    std::vector<char> truncated(xs.size(), 0);

    detail::parallel_for(xs.size(), options.threads, [&](std::size_t i) {
        const double x = xs[i];
        RatioRow row;
        row.x = x;
        row.numerator = variant == SubregVariant::Strong ? std::abs(x - base.x) : distance(x, preimage);
        row.denominator = distance(base.y, map.eval(x));
        row.ratio = regularity_ratio(row.numerator, row.denominator, q);
        out.rows[i] = row;
        truncated[i] = map.truncated_at(x) ? 1 : 0;
    });

    est.grid_points = xs.size();
    bool have = false;
    for (std::size_t i = 0; i < out.rows.size(); ++i) {
        const auto& r = out.rows[i];
        if (r.denominator == 0.0 && r.numerator > 0.0) ++est.excluded_points;
        if (truncated[i]) est.truncation_active = true;
        if (!have || better_witness(r.ratio, r.x, est.modulus, est.witness, base.x)) {
            est.modulus = r.ratio;
            est.witness = r.x;
            have = true;
        }
    }
    if (!have) throw std::invalid_argument(map.label() + ": grid has no points inside the domain");
    return out;
}

RegularityEstimate estimate_subreg_modulus(const SetValuedMap& map, BasePoint base, double q,
                                           const GridSpec& grid, const SweepOptions& options) {
    return sweep_subreg(map, base, q, grid, SubregVariant::Plain, options).estimate;
}

RegularityEstimate estimate_strong_subreg_modulus(const SetValuedMap& map, BasePoint base, double q,
                                                  const GridSpec& grid, const SweepOptions& options) {
    return sweep_subreg(map, base, q, grid, SubregVariant::Strong, options).estimate;
}

ScanClassification classify_moduli(const std::vector<double>& radii, const std::vector<double>& moduli,
                                   const BlowUpRule& rule) {
    if (radii.size() != moduli.size() || radii.size() < 2)
        throw std::invalid_argument("classify_moduli needs at least two radii with one modulus each");
    for (std::size_t i = 0; i + 1 < radii.size(); ++i)
        if (!(radii[i + 1] < radii[i])) throw std::invalid_argument("radii must be strictly decreasing");

    ScanClassification out;
    out.min_growth_per_decade = kInf;
    bool any_infinite = false;
    for (std::size_t i = 0; i + 1 < radii.size(); ++i) {
        const double a = moduli[i];
        const double b = moduli[i + 1];
        if (std::isinf(a) || std::isinf(b)) any_infinite = true;
        double growth;
        if (std::isinf(b) && !std::isinf(a))
            growth = kInf;
        else if (std::isinf(a) || (a == 0.0 && b == 0.0))
            growth = 1.0;
        else if (a == 0.0)
            growth = kInf;
        else
            growth = std::pow(b / a, 1.0 / std::log10(radii[i] / radii[i + 1]));
        out.min_growth_per_decade = std::min(out.min_growth_per_decade, growth);
    }

    // Tail: radii within two decades of the smallest one.
    const double r_min = radii.back();
    std::size_t ref = radii.size() - 1;
    while (ref > 0 && radii[ref - 1] <= 100.0 * r_min * (1.0 + kGrowthSlack)) --ref;
    const double eta_ref = moduli[ref];
    double tail_max = 0.0;
    for (std::size_t i = ref; i < radii.size(); ++i) tail_max = std::max(tail_max, moduli[i]);
    if (eta_ref == 0.0)
        out.tail_growth = tail_max == 0.0 ? 1.0 : kInf;
    else
        out.tail_growth = tail_max / eta_ref;

    if (any_infinite || out.min_growth_per_decade >= rule.growth_per_decade * (1.0 - kGrowthSlack))
        out.verdict = ScanVerdict::BlowUp;
    else if (std::isfinite(out.tail_growth) && out.tail_growth <= 1.0 + rule.stability_window)
        out.verdict = ScanVerdict::Bounded;
    else
        out.verdict = ScanVerdict::Inconclusive;
    return out;
}

OrderScanReport order_scan(const SetValuedMap& map, BasePoint base, const std::vector<double>& q_list,
                           const std::vector<double>& radii, const GridSpec& grid, SubregVariant variant,
                           const BlowUpRule& rule, const SweepOptions& options) {
    if (q_list.empty()) throw std::invalid_argument("order_scan needs at least one q");
    for (double r : radii)
        if (!(r > 0.0 && r < 1.0)) throw std::invalid_argument("order_scan radii must lie in (0, 1)");

    OrderScanReport report;
    report.variant = variant;
    for (double q : q_list) {
        std::vector<double> etas;
        for (double r : radii) {
            GridSpec g = grid;
            g.radius = r;
            const auto est = sweep_subreg(map, base, q, g, variant, options).estimate;
            report.cells.push_back({q, r, est.modulus, est.witness, est.truncation_active});
            etas.push_back(est.modulus);
        }
        report.verdicts.push_back({q, classify_moduli(radii, etas, rule)});
    }
    for (const auto& v : report.verdicts) {
        if (v.classification.verdict == ScanVerdict::Bounded &&
            (!report.q_star_lower || v.q > *report.q_star_lower))
            report.q_star_lower = v.q;
        if (v.classification.verdict == ScanVerdict::BlowUp &&
            (!report.q_star_upper || v.q < *report.q_star_upper))
            report.q_star_upper = v.q;
    }
    return report;
}

}  // namespace subreg

#include "subreg/mr_probe.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "parallel.hpp"
#include "subreg/errors.hpp"

namespace subreg {

namespace {

std::vector<double> axis_points(double center, double radius, int ppd, int decades) {
    GridSpec g{radius, ppd, decades, true};
    auto pts = g.points(center);
    pts.push_back(center);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

double two_parameter_quotient(double x, const IntervalUnion& fx, double y, const IntervalUnion& inv_y) {
    return regularity_ratio(distance(x, inv_y), distance(y, fx), 1.0);
}

}  // namespace

MrProbeReport metric_regularity_probe(const SetValuedMap& map, BasePoint base, const XyGridSpec& grid,
                                      const BlowUpRule& rule, const SweepOptions& options) {
    if (grid.radii.size() < 2) throw std::invalid_argument("metric_regularity_probe needs at least two radii");
    if (!map.has_inverse() && !options.inverse_window)
        throw CapabilityError(map.label() + ": metric regularity probe needs inverse access");

    MrProbeReport report;
    std::vector<double> sups;
    for (double r : grid.radii) {
        auto xs = axis_points(base.x, r, grid.points_per_decade, grid.decades);
        std::erase_if(xs, [&](double x) { return !map.in_domain(x); });
        const auto ys = axis_points(base.y, r, grid.points_per_decade, grid.decades);

        std::vector<IntervalUnion> fx(xs.size());
        detail::parallel_for(xs.size(), options.threads, [&](std::size_t i) { fx[i] = map.eval(xs[i]); });

        std::vector<MrRadiusRow> per_y(ys.size());
        detail::parallel_for(ys.size(), options.threads, [&](std::size_t j) {
            const auto inv = map.inverse_eval(ys[j], options.inverse_window).set;
            MrRadiusRow best{r, -1.0, 0.0, ys[j]};
            for (std::size_t i = 0; i < xs.size(); ++i) {
                const double qv = two_parameter_quotient(xs[i], fx[i], ys[j], inv);
                if (qv > best.sup_quotient) best = {r, qv, xs[i], ys[j]};
            }
            per_y[j] = best;
        });
        MrRadiusRow best{r, -1.0, base.x, base.y};
        for (const auto& row : per_y)
            if (row.sup_quotient > best.sup_quotient) best = row;
        report.table.push_back(best);
        sups.push_back(best.sup_quotient);
    }
    report.kappa_hat = sups.back();
    report.classification = classify_moduli(grid.radii, sups, rule);
    report.verdict = report.classification.verdict;

    if (map.label() == "Q-map") {
        report.sequence = q_map_lipschitz_sequences(map, 3, 10);
        report.sequence_unbounded = std::all_of(report.sequence.begin(), report.sequence.end(),
                                                [](const auto& s) { return s.quotient >= s.k; });
        if (report.sequence_unbounded) report.verdict = ScanVerdict::BlowUp;
    }
    return report;
}

std::vector<LipschitzSequenceRow> q_map_lipschitz_sequences(const SetValuedMap& map, int k_lo, int k_hi) {
    const double c = std::cbrt(2.0);
    std::vector<LipschitzSequenceRow> out;
    for (int k = k_lo; k <= k_hi; ++k) {
        LipschitzSequenceRow row;
        row.k = k;
        const double top = std::pow(c, -(k - 1));
        const double gap = top - std::pow(c, -k);
        const double bound = std::min(1.0 / (k * std::ldexp(1.0, k)), gap);
        row.alpha = 0.5 * bound;
        row.x1 = std::ldexp(1.0, -(k - 1));
        row.y1 = top - row.alpha;
        row.x2 = row.x1;
        row.y2 = top;
        row.rho1 = distance(row.x1, map.eval(row.y1));
        row.rho2 = distance(row.x2, map.eval(row.y2));
        row.quotient = std::abs(row.rho1 - row.rho2) / std::hypot(row.x1 - row.x2, row.y1 - row.y2);
        out.push_back(row);
    }
    return out;
}

std::vector<PairQuotientRow> quotient_along_pairs(const SetValuedMap& map,
                                                  const std::vector<std::pair<double, double>>& pairs,
                                                  int first_k, const SweepOptions& options) {
    std::vector<PairQuotientRow> out;
    int k = first_k;
    for (const auto& [x, y] : pairs) {
        PairQuotientRow row;
        row.k = k++;
        row.x = x;
        row.y = y;
        row.numerator = distance(x, map.inverse_eval(y, options.inverse_window).set);
        row.denominator = distance(y, map.eval(x));
        row.quotient = regularity_ratio(row.numerator, row.denominator, 1.0);
        out.push_back(row);
    }
    return out;
}

}  // namespace subreg

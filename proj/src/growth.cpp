#include "subreg/growth.hpp"

#include <cmath>
#include <stdexcept>

namespace subreg {

namespace {

constexpr std::size_t kMaxStoredRows = 1000;

double growth_term(double coefficient, double q, double dist) {
    if (dist == 0.0) return 0.0;
    return coefficient * q / (1.0 + q) * std::pow(dist, (1.0 + q) / q);
}

void check_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument(std::string(name) + " must be positive");
}

std::vector<double> subgradient_samples(const IntervalUnion& values, double x_bar_star, double reach) {
    std::vector<double> out;
    for (const auto& part : values.parts()) {
        const bool lo_finite = std::isfinite(part.lo);
        const bool hi_finite = std::isfinite(part.hi);
        if (lo_finite && hi_finite) {
            out.push_back(part.lo);
            if (part.hi != part.lo) {
                out.push_back(0.5 * (part.lo + part.hi));
                out.push_back(part.hi);
            }
        } else if (lo_finite) {
            out.push_back(part.lo);
            out.push_back(part.lo + reach);
        } else if (hi_finite) {
            out.push_back(part.hi - reach);
            out.push_back(part.hi);
        } else {
            out.push_back(x_bar_star - reach);
            out.push_back(x_bar_star);
            out.push_back(x_bar_star + reach);
        }
    }
    return out;
}

}  // namespace

GrowthLowerReport growth_check_lower(const ScalarFunction& f, const IntervalUnion& target_preimage,
                                     const GrowthLowerParams& p, GridSpec grid) {
    check_positive(p.alpha, "alpha");
    check_positive(p.eta, "eta");
    check_positive(p.q, "q");
    grid.radius = p.eta;

    GrowthLowerReport report;
    const double f_bar = f(p.x_bar);
    for (double x : grid.points(p.x_bar)) {
        GrowthRow row;
        row.x = x;
        row.x_star = p.x_bar_star;
        row.lhs = f(x);
        row.rhs = f_bar + p.x_bar_star * (x - p.x_bar) + growth_term(p.alpha, p.q, distance(x, target_preimage));
        row.margin = row.lhs - row.rhs;
        // Strict '<' keeps the first (outermost) point among equal margins.
        if (row.margin < report.margin) {
            report.margin = row.margin;
            report.witness = x;
        }
        report.rows.push_back(row);
    }
    report.pass = report.margin >= -kGrowthTolerance;
    return report;
}

double pairwise_ball_radius(double q, double eta) { return eta + std::pow(q * eta / (1.0 + q), 1.0 / q); }

std::vector<GraphPair> sample_graph_pairs(const SetValuedMap& subdiff, const IntervalUnion& target_preimage,
                                          double x_bar, double x_bar_star, double ball_radius,
                                          const GridSpec& grid, PairBall ball) {
    GridSpec g = grid;
    g.radius = ball_radius;
    std::vector<double> xs = g.points(x_bar);
    xs.insert(xs.begin(), x_bar);

    std::vector<double> us;
    for (const auto& part : target_preimage.parts()) {
        if (std::isfinite(part.lo)) us.push_back(part.lo);
        if (std::isfinite(part.hi) && part.hi != part.lo) us.push_back(part.hi);
    }
    for (double x : xs)
        if (target_preimage.contains(x)) us.push_back(x);
    std::erase_if(us, [&](double u) { return std::abs(u - x_bar) > ball_radius; });

    std::vector<GraphPair> out;
    for (double x : xs) {
        if (!subdiff.in_domain(x)) continue;
        for (double xs_star : subgradient_samples(subdiff.eval(x), x_bar_star, ball_radius)) {
            const bool inside = ball == PairBall::Primal
                                    ? std::abs(x - x_bar) <= ball_radius
                                    : std::hypot(x - x_bar, xs_star - x_bar_star) <= ball_radius;
            if (!inside) continue;
            for (double u : us) out.push_back({u, x, xs_star});
        }
    }
    return out;
}

GrowthPairwiseReport growth_check_pairwise(const ScalarFunction& f, const SetValuedMap& subdiff,
                                           const GrowthPairwiseParams& p, GridSpec grid) {
    check_positive(p.beta, "beta");
    check_positive(p.eta, "eta");
    check_positive(p.q, "q");

    GrowthPairwiseReport report;
    report.ball_radius = pairwise_ball_radius(p.q, p.eta);
    const IntervalUnion target = subdiff.inverse_eval(p.x_bar_star);
    const auto pairs = sample_graph_pairs(subdiff, target, p.x_bar, p.x_bar_star, report.ball_radius, grid, p.ball);
    report.pairs_checked = pairs.size();

    for (const auto& pr : pairs) {
        GrowthRow row;
        row.u = pr.u;
        row.x = pr.x;
        row.x_star = pr.x_star;
        row.lhs = f(pr.u);
        row.rhs = f(pr.x) + pr.x_star * (pr.u - pr.x) - growth_term(p.beta, p.q, distance(pr.x, target));
        row.margin = row.lhs - row.rhs;
        report.worst_margin = std::min(report.worst_margin, row.margin);
        if (row.margin < -kGrowthTolerance) {
            if (!report.first_violation) report.first_violation = row;
            if (report.rows.size() < kMaxStoredRows) report.rows.push_back(row);
        }
    }
    report.pass = !report.first_violation.has_value();
    return report;
}

}  // namespace subreg

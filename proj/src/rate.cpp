#include "subreg/rate.hpp"

#include <cmath>

#include "subreg/errors.hpp"

namespace subreg {

namespace {

bool usable(double e) { return e > 0.0 && e < 1.0; }

}  // namespace

const RateRow* RateReport::row(int k) const {
    for (const auto& r : rows)
        if (r.k == k) return &r;
    return nullptr;
}

double exact_log2(double v) {
    int e = 0;
    if (v > 0.0 && std::isfinite(v) && std::frexp(v, &e) == 0.5) return static_cast<double>(e - 1);
    return std::log2(v);
}

RateReport rate_analysis(const IterationTrace& trace, double x_bar, double g_prime_at_solution,
                         const std::vector<double>& q_list, const RateOptions& options) {
    const auto& xs = trace.iterates;
    std::vector<double> errors;
    errors.reserve(xs.size());
    for (double x : xs) errors.push_back(std::abs(x - x_bar));

    RateReport report;
    report.q_list = q_list;
    std::size_t n_usable = 0;
    for (std::size_t i = 0; i < errors.size(); ++i) {
        if (errors[i] == 0.0) report.exact_hits.push_back(trace.label(i));
        if (usable(errors[i])) ++n_usable;
    }
    if (xs.size() < 3 || n_usable < 3)
        throw AnalysisError("rate analysis needs at least three iterates with errors in (0, 1)");

    std::vector<std::pair<double, double>> log_pairs;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        RateRow row;
        row.k = trace.label(i);
        row.error = errors[i];
        const bool has_next = i + 1 < xs.size();
        if (has_next && usable(errors[i]) && usable(errors[i + 1])) {
            const double l0 = exact_log2(errors[i]);
            const double l1 = exact_log2(errors[i + 1]);
            row.pointwise_order = l1 / l0;
            log_pairs.emplace_back(l0, l1);
        }
        for (double q : q_list) {
            if (has_next && usable(errors[i]) && errors[i + 1] > 0.0) {
                // e_{k+1} / e_k^q evaluated in log space to survive deep tails.
                row.super_ratios.push_back(std::exp2(exact_log2(errors[i + 1]) - q * exact_log2(errors[i])));
            } else {
                row.super_ratios.emplace_back();
            }
        }
        if (has_next && i < trace.operators.size()) {
            const double step = xs[i + 1] - xs[i];
            if (step != 0.0)
                row.dennis_more = std::abs((trace.operators[i] - g_prime_at_solution) * step) / std::abs(step);
        }
        report.rows.push_back(row);
    }

    // Regression over the tail: the last `window` usable errors give
    // window - 1 consecutive pairs.
    const std::size_t want = options.regression_window > 1 ? options.regression_window - 1 : 1;
    const std::size_t take = std::min(want, log_pairs.size());
    if (take < 2) throw AnalysisError("rate analysis needs at least two consecutive usable error pairs");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = log_pairs.size() - take; i < log_pairs.size(); ++i) {
        const auto [a, b] = log_pairs[i];
        sx += a;
        sy += b;
        sxx += a * a;
        sxy += a * b;
    }
    const double m = static_cast<double>(take);
    const double denom = m * sxx - sx * sx;
    if (denom == 0.0) throw AnalysisError("degenerate regression: all usable errors coincide");
    report.regression_order = (m * sxy - sx * sy) / denom;
    return report;
}

}  // namespace subreg

#pragma once

#include <optional>
#include <vector>

#include "subreg/geneq.hpp"

namespace subreg {

struct RateRow {
    int k = 0;
    double error = 0.0;
    /// ln e_{k+1} / ln e_k, when both errors are usable.
    std::optional<double> pointwise_order;
    /// e_{k+1} / e_k^q, one per requested q.
    std::vector<std::optional<double>> super_ratios;
    /// |(B_k - g'(x_bar))(x_{k+1} - x_k)| / |x_{k+1} - x_k|.
    std::optional<double> dennis_more;
};

struct RateReport {
    std::vector<double> q_list;
    std::vector<RateRow> rows;
    /// Least-squares slope of ln e_{k+1} against ln e_k over the last
    /// `regression_window` usable errors.
    double regression_order = 0.0;
    /// Labels of iterates that hit x_bar exactly and were dropped.
    std::vector<int> exact_hits;

    const RateRow* row(int k) const;
};

struct RateOptions {
    int regression_window = 5;
};

/// Base-2 logarithm, exact for powers of two.
double exact_log2(double v);

/// Errors e_k = |x_k - x_bar|; only e_k in (0, 1) enter the orders.
/// Throws AnalysisError when fewer than three errors are usable.
RateReport rate_analysis(const IterationTrace& trace, double x_bar, double g_prime_at_solution,
                         const std::vector<double>& q_list, const RateOptions& options = {});

}  // namespace subreg

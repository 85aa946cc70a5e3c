#pragma once

// Growth conditions characterizing q-subregularity of a subdifferential
// map at (x_bar, x_bar*):
//
//   lower:    f(x) >= f(x_bar) + x_bar*(x - x_bar) + (q a/(1+q)) d^{(1+q)/q}(x; T)
//   pairwise: f(u) >= f(x) + x*(u - x) - (q b/(1+q)) d^{(1+q)/q}(x; T)
//
// with T = (df)^{-1}(x_bar*), checked on sampled points of the graph.

#include <functional>
#include <optional>
#include <vector>

#include "subreg/grid.hpp"
#include "subreg/set_valued_map.hpp"

namespace subreg {

using ScalarFunction = std::function<double(double)>;

inline constexpr double kGrowthTolerance = 1e-12;

struct GrowthRow {
    double x = 0.0;
    double u = 0.0;
    double x_star = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;
};

struct GrowthLowerReport {
    bool pass = false;
    double margin = kInf;
    double witness = 0.0;
    std::vector<GrowthRow> rows;
};

struct GrowthLowerParams {
    double x_bar = 0.0;
    double x_bar_star = 0.0;
    double q = 1.0;
    double alpha = 1.0;
    double eta = 1.0;
};

/// Checks the lower estimate on the log grid of `grid` rescaled to radius
/// eta. Passes iff min(LHS - RHS) >= -1e-12.
GrowthLowerReport growth_check_lower(const ScalarFunction& f, const IntervalUnion& target_preimage,
                                     const GrowthLowerParams& params, GridSpec grid);

/// Which coordinates the ball B((x_bar, x_bar*), R) constrains.
enum class PairBall {
    /// |x - x_bar| <= R and |u - x_bar| <= R; subgradients unrestricted.
    Primal,
    /// Euclidean ball in the (x, x*) plane.
    Product,
};

struct GraphPair {
    double u = 0.0;
    double x = 0.0;
    double x_star = 0.0;
};

/// Sample pairs (u, x_bar*), (x, x*) from the graph of df: x on the log
/// grid, x* at the finite endpoints and midpoints of the parts of df(x),
/// u at the finite endpoints of T = (df)^{-1}(x_bar*) and at grid points in T.
std::vector<GraphPair> sample_graph_pairs(const SetValuedMap& subdiff, const IntervalUnion& target_preimage,
                                          double x_bar, double x_bar_star, double ball_radius,
                                          const GridSpec& grid, PairBall ball);

struct GrowthPairwiseParams {
    double x_bar = 0.0;
    double x_bar_star = 0.0;
    double q = 1.0;
    double beta = 0.5;
    double eta = 1.0;
    PairBall ball = PairBall::Primal;
};

struct GrowthPairwiseReport {
    bool pass = false;
    double ball_radius = 0.0;
    std::size_t pairs_checked = 0;
    double worst_margin = kInf;
    std::optional<GrowthRow> first_violation;
    std::vector<GrowthRow> rows;
};

/// Ball radius eta + (q eta / (1 + q))^{1/q}.
double pairwise_ball_radius(double q, double eta);

GrowthPairwiseReport growth_check_pairwise(const ScalarFunction& f, const SetValuedMap& subdiff,
                                           const GrowthPairwiseParams& params, GridSpec grid);

}  // namespace subreg

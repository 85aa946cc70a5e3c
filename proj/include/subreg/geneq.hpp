#pragma once

// Quasi-Newton iteration for generalized equations 0 in g(x) + F(x):
//
//   0 in g(x_k) + B_k (x_{k+1} - x_k) + F(x_{k+1}),
//
// with scalar operators B_k drawn from a schedule.

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "subreg/set_valued_map.hpp"

namespace subreg {

struct GeneralizedEquation {
    SmoothMap g;
    SetValuedMap F;
    std::optional<double> solution_hint;
    std::string label;
};

/// d(0; g(x) + F(x)).
double equation_residual(const GeneralizedEquation& eq, double x);

namespace schedule {
struct Newton {};
struct Chord {
    double b0 = 1.0;
};
struct Broyden {
    double b0 = 1.0;
};
struct Explicit {
    std::function<double(int)> operator_at;
    /// Index attached to the starting point (the trace labels x_0 with it).
    int first_index = 0;
    std::string label;
};
}  // namespace schedule

using OperatorSchedule = std::variant<schedule::Newton, schedule::Chord, schedule::Broyden, schedule::Explicit>;

std::string schedule_name(const OperatorSchedule& s);

/// B_k = ((2^{(k+1)!/2})^{-1} + (2^{2 k!})^{-1}) / ((2^{k!})^{-1} - (2^{(k+1)!})^{-1}), k >= 1.
double example_5_2_operator(int k);
/// Explicit schedule built from example_5_2_operator, starting at k = 1.
schedule::Explicit example_5_2_schedule();

/// g(x) = x^2, F = |x|^{1/2}, solution 0.
GeneralizedEquation example_5_2_equation();

enum class TraceStatus { Converged, MaxIter, SubproblemFailure };
std::string to_string(TraceStatus s);

struct IterationTrace {
    int first_index = 0;
    std::vector<double> iterates;
    /// d(0; g(x_k) + F(x_k)) per iterate.
    std::vector<double> residuals;
    /// B_k used to leave x_k (one fewer than iterates).
    std::vector<double> operators;
    /// Subproblem residual certified at each accepted x_{k+1}.
    std::vector<double> step_residuals;
    /// Exact base-2 exponent of x_k when x_k is a power of two.
    std::vector<std::optional<int>> exponents;
    TraceStatus status = TraceStatus::MaxIter;
    /// Smallest scan value of the failing subproblem.
    std::optional<double> failure_scan_minimum;

    int label(std::size_t i) const { return first_index + static_cast<int>(i); }
};

struct SubproblemOptions {
    /// Uniform coarse-scan cells over the window.
    int scan_cells = 1024;
    /// Extra scan points x_k +/- h 2^{-j}, j = 0..geometric_levels, with h
    /// the cell width.
    int geometric_levels = 80;
    double tol = 1e-12;
};

struct SubproblemResult {
    std::optional<double> x_next;
    double residual = kInf;
    /// min over scan points of phi, reported on failure.
    double scan_minimum = kInf;
    double scan_minimum_at = 0.0;
};

/// phi(x) = d(0; g(x_k) + B_k (x - x_k) + F(x)).
double subproblem_residual(const GeneralizedEquation& eq, double x_k, double b_k, double x);

/// Finds the solution of the linearized inclusion nearest x_k (ties to the
/// smaller value) inside `window`, by a coarse scan of the signed residual
/// followed by bisection on every bracketing cell.
SubproblemResult subproblem_solve(const GeneralizedEquation& eq, double x_k, double b_k,
                                  const ClosedInterval& window, const SubproblemOptions& options = {});

struct SolveConfig {
    int max_iter = 50;
    double tol = 1e-12;
    ClosedInterval window{-10.0, 10.0};
    SubproblemOptions subproblem;
};

IterationTrace solve(const GeneralizedEquation& eq, double x0, const OperatorSchedule& schedule,
                     const SolveConfig& config);

}  // namespace subreg

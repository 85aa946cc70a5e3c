#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "subreg/interval_set.hpp"

namespace subreg {

/// Bracketing window for numerically inverting a map that has no
/// analytic inverse oracle.
struct SearchWindow {
    ClosedInterval range{-1.0, 1.0};
    int cells = 4096;
};

struct InverseValue {
    IntervalUnion set;
    /// True for grid-bracketed outer approximations.
    bool approximate = false;
};

/// F : R =>> R given by an evaluation oracle, with an optional analytic
/// inverse oracle y -> F^{-1}(y). Oracles must be pure; a map may be
/// evaluated concurrently from any number of threads.
class SetValuedMap {
public:
    using Oracle = std::function<IntervalUnion(double)>;
    using Predicate = std::function<bool(double)>;

    SetValuedMap(std::string label, ClosedInterval domain, Oracle eval,
                 std::optional<Oracle> inverse = std::nullopt);

    const std::string& label() const { return label_; }
    const ClosedInterval& domain() const { return domain_; }
    bool in_domain(double x) const { return domain_.contains(x); }
    bool has_inverse() const { return inverse_.has_value(); }

    /// F(x). Throws DomainError outside the domain.
    IntervalUnion eval(double x) const;

    /// F^{-1}(y) from the analytic oracle. Throws CapabilityError when the
    /// map has none.
    IntervalUnion inverse_eval(double y) const;

    /// F^{-1}(y): analytic when available, otherwise an outer approximation
    /// bracketed on `window`. Without an oracle and without a window this
    /// throws CapabilityError.
    InverseValue inverse_eval(double y, const std::optional<SearchWindow>& window) const;

    /// True when evaluation at x hits a truncated branch of an infinite
    /// construction (see the Q-map).
    bool truncated_at(double x) const { return truncation_ && truncation_(x); }

    SetValuedMap with_truncation(Predicate p) const;
    SetValuedMap with_label(std::string label) const;

private:
    std::string label_;
    ClosedInterval domain_;
    Oracle eval_;
    std::optional<Oracle> inverse_;
    Predicate truncation_;
};

/// Outer approximation of F^{-1}(y) on a window: keeps cell [a, b] when y
/// lies in the convex hull of F(a) u F(b), and singletons {a} when y is in
/// F(a).
IntervalUnion bracketed_inverse(const SetValuedMap& map, double y, const SearchWindow& window);

/// x -> F(x) + shift(x). The inverse oracle is dropped.
SetValuedMap shifted_map(const SetValuedMap& map, std::function<double(double)> shift,
                         std::string label);

/// Smooth single-valued g with its derivative.
struct SmoothMap {
    std::function<double(double)> value;
    std::function<double(double)> derivative;
    double lip_estimate_radius = 1.0;
    std::string label;

    double operator()(double x) const { return value(x); }

    /// Coefficients c0 + c1 x + c2 x^2 + ...
    static SmoothMap polynomial(std::vector<double> coefficients, std::string label = "poly");
    static SmoothMap linear(double slope, std::string label = "linear");
    static SmoothMap zero() { return linear(0.0, "zero"); }
};

/// Largest difference quotient of g over consecutive points of a symmetric
/// log grid around x_bar (and against x_bar itself).
double lipschitz_estimate(const std::function<double(double)>& g, double x_bar, double radius,
                          int points_per_decade = 50, int decades = 6);

}  // namespace subreg

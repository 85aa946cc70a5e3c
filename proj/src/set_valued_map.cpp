#include "subreg/set_valued_map.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "subreg/errors.hpp"
#include "subreg/grid.hpp"

namespace subreg {

SetValuedMap::SetValuedMap(std::string label, ClosedInterval domain, Oracle eval,
                           std::optional<Oracle> inverse)
    : label_(std::move(label)), domain_(domain), eval_(std::move(eval)), inverse_(std::move(inverse)) {}

IntervalUnion SetValuedMap::eval(double x) const {
    if (!in_domain(x))
        throw DomainError(fmt::format("{}: x = {} outside domain [{}, {}]", label_, x, domain_.lo, domain_.hi));
    return eval_(x);
}

IntervalUnion SetValuedMap::inverse_eval(double y) const {
    if (!inverse_) throw CapabilityError(label_ + ": no inverse oracle");
    return (*inverse_)(y);
}

InverseValue SetValuedMap::inverse_eval(double y, const std::optional<SearchWindow>& window) const {
    if (inverse_) return {(*inverse_)(y), false};
    if (!window) throw CapabilityError(label_ + ": no inverse oracle and no search window");
    return {bracketed_inverse(*this, y, *window), true};
}

SetValuedMap SetValuedMap::with_truncation(Predicate p) const {
    SetValuedMap copy = *this;
    copy.truncation_ = std::move(p);
    return copy;
}

SetValuedMap SetValuedMap::with_label(std::string label) const {
    SetValuedMap copy = *this;
    copy.label_ = std::move(label);
    return copy;
}

IntervalUnion bracketed_inverse(const SetValuedMap& map, double y, const SearchWindow& window) {
    const double lo = std::max(window.range.lo, map.domain().lo);
    const double hi = std::min(window.range.hi, map.domain().hi);
    if (!(lo <= hi) || !std::isfinite(lo) || !std::isfinite(hi) || window.cells < 1)
        throw CapabilityError(map.label() + ": search window must be finite and meet the domain");

    const int n = window.cells;
    std::vector<double> xs(n + 1);
    for (int i = 0; i <= n; ++i) xs[i] = lo + (hi - lo) * (static_cast<double>(i) / n);
    xs[n] = hi;

    std::vector<IntervalUnion> values;
    values.reserve(xs.size());
    for (double x : xs) values.push_back(map.eval(x));

    std::vector<ClosedInterval> raw;
    for (int i = 0; i <= n; ++i) {
        if (values[i].contains(y)) raw.push_back(ClosedInterval::point(xs[i]));
        if (i == n) continue;
        const auto& a = values[i];
        const auto& b = values[i + 1];
        if (a.is_empty() || b.is_empty()) continue;
        const double h_lo = std::min(a.lower(), b.lower());
        const double h_hi = std::max(a.upper(), b.upper());
        if (h_lo <= y && y <= h_hi) raw.push_back({xs[i], xs[i + 1]});
    }
    return normalize(std::move(raw));
}

SetValuedMap shifted_map(const SetValuedMap& map, std::function<double(double)> shift, std::string label) {
    auto base = map;
    SetValuedMap out(std::move(label), map.domain(),
                     [base, shift = std::move(shift)](double x) { return base.eval(x).shifted(shift(x)); });
    return out.with_truncation([base](double x) { return base.truncated_at(x); });
}

SmoothMap SmoothMap::polynomial(std::vector<double> c, std::string label) {
    SmoothMap g;
    g.label = std::move(label);
    g.value = [c](double x) {
        double acc = 0.0;
        for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
        return acc;
    };
    g.derivative = [c](double x) {
        double acc = 0.0;
        for (std::size_t i = c.size(); i-- > 1;) acc = acc * x + static_cast<double>(i) * c[i];
        return acc;
    };
    return g;
}

SmoothMap SmoothMap::linear(double slope, std::string label) {
    return polynomial({0.0, slope}, std::move(label));
}

double lipschitz_estimate(const std::function<double(double)>& g, double x_bar, double radius,
                          int points_per_decade, int decades) {
    const GridSpec grid{radius, points_per_decade, decades, true};
    auto xs = grid.points(x_bar);
    xs.push_back(x_bar);
    std::sort(xs.begin(), xs.end());
    double lip = 0.0;
    const double g_bar = g(x_bar);
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
        const double dx = xs[i + 1] - xs[i];
        if (dx > 0.0) lip = std::max(lip, std::abs(g(xs[i + 1]) - g(xs[i])) / dx);
        if (xs[i] != x_bar) lip = std::max(lip, std::abs(g(xs[i]) - g_bar) / std::abs(xs[i] - x_bar));
    }
    return lip;
}

}  // namespace subreg

#include "subreg/interval_set.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "subreg/errors.hpp"

namespace subreg {

double ClosedInterval::distance(double p) const {
    if (p < lo) return lo - p;
    if (p > hi) return p - hi;
    return 0.0;
}

IntervalUnion IntervalUnion::point(double x) { return normalize({ClosedInterval::point(x)}); }

IntervalUnion IntervalUnion::interval(double lo, double hi) { return normalize({{lo, hi}}); }

IntervalUnion IntervalUnion::whole_line() { return normalize({ClosedInterval::whole_line()}); }

bool IntervalUnion::contains(double p) const {
    // parts_ is sorted; find the last part with lo <= p.
    auto it = std::upper_bound(parts_.begin(), parts_.end(), p,
                               [](double v, const ClosedInterval& c) { return v < c.lo; });
    if (it == parts_.begin()) return false;
    return std::prev(it)->contains(p);
}

IntervalUnion IntervalUnion::shifted(double offset) const {
    std::vector<ClosedInterval> out;
    out.reserve(parts_.size());
    for (const auto& c : parts_) out.push_back({c.lo + offset, c.hi + offset});
    // Rounding can make two parts touch after the shift.
    return normalize(std::move(out));
}

IntervalUnion IntervalUnion::negated() const {
    std::vector<ClosedInterval> out;
    out.reserve(parts_.size());
    for (auto it = parts_.rbegin(); it != parts_.rend(); ++it) out.push_back({-it->hi, -it->lo});
    return IntervalUnion(std::move(out));
}

IntervalUnion IntervalUnion::scaled(double factor) const {
    if (!(factor > 0.0)) throw std::invalid_argument("IntervalUnion::scaled needs a positive factor");
    std::vector<ClosedInterval> out;
    out.reserve(parts_.size());
    for (const auto& c : parts_) out.push_back({c.lo * factor, c.hi * factor});
    return normalize(std::move(out));
}

IntervalUnion IntervalUnion::united(const IntervalUnion& other) const {
    std::vector<ClosedInterval> raw = parts_;
    raw.insert(raw.end(), other.parts_.begin(), other.parts_.end());
    return normalize(std::move(raw));
}

std::string IntervalUnion::to_string() const {
    if (parts_.empty()) return "{}";
    std::string s;
    for (const auto& c : parts_) {
        if (!s.empty()) s += " u ";
        if (c.is_singleton())
            s += fmt::format("{{{}}}", c.lo);
        else
            s += fmt::format("[{}, {}]", c.lo, c.hi);
    }
    return s;
}

IntervalUnion normalize(std::vector<ClosedInterval> raw) {
    for (const auto& c : raw) {
        if (std::isnan(c.lo) || std::isnan(c.hi))
            throw std::invalid_argument("interval endpoint is NaN");
        if (c.lo > c.hi)
            throw std::invalid_argument(fmt::format("interval [{}, {}] has lo > hi", c.lo, c.hi));
    }
    std::sort(raw.begin(), raw.end(), [](const ClosedInterval& a, const ClosedInterval& b) {
        return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi);
    });
    std::vector<ClosedInterval> merged;
    merged.reserve(raw.size());
    for (const auto& c : raw) {
        if (!merged.empty() && c.lo <= merged.back().hi)
            merged.back().hi = std::max(merged.back().hi, c.hi);
        else
            merged.push_back(c);
    }
    return IntervalUnion(std::move(merged));
}

double distance(double p, const IntervalUnion& s) {
    const auto& parts = s.parts();
    if (parts.empty()) return kInf;
    // Only the part at or left of p and the one right of it can be closest.
    auto it = std::upper_bound(parts.begin(), parts.end(), p,
                               [](double v, const ClosedInterval& c) { return v < c.lo; });
    double best = kInf;
    if (it != parts.end()) best = it->lo - p;
    if (it != parts.begin()) best = std::min(best, std::prev(it)->distance(p));
    return best;
}

double nearest_point(double p, const IntervalUnion& s) {
    const auto& parts = s.parts();
    if (parts.empty()) throw DomainError("nearest_point on the empty set");
    auto it = std::upper_bound(parts.begin(), parts.end(), p,
                               [](double v, const ClosedInterval& c) { return v < c.lo; });
    if (it == parts.begin()) return it->lo;
    const auto& left = *std::prev(it);
    if (left.contains(p)) return p;
    if (it == parts.end()) return left.hi;
    const double dl = p - left.hi;
    const double dr = it->lo - p;
    return dl <= dr ? left.hi : it->lo;
}

double raw_distance(double p, std::span<const ClosedInterval> raw) {
    double best = kInf;
    for (const auto& c : raw) best = std::min(best, c.distance(p));
    return best;
}

}  // namespace subreg

#pragma once

// Finite unions of closed real intervals. Every set value produced by a
// set-valued map in this library is an IntervalUnion, and the distance
// function d(p; S) is computed exactly on this representation.

#include <limits>
#include <span>
#include <string>
#include <vector>

namespace subreg {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Closed interval [lo, hi]. Infinite endpoints stand for unbounded sides.
struct ClosedInterval {
    double lo = 0.0;
    double hi = 0.0;

    static ClosedInterval point(double x) { return {x, x}; }
    static ClosedInterval whole_line() { return {-kInf, kInf}; }

    bool contains(double p) const { return lo <= p && p <= hi; }
    bool is_singleton() const { return lo == hi; }
    double distance(double p) const;

    bool operator==(const ClosedInterval&) const = default;
};

/// Canonical union of closed intervals: parts sorted by lo, pairwise
/// disjoint with strict gaps. Touching or overlapping parts are merged.
/// The empty list is the empty set.
class IntervalUnion {
public:
    IntervalUnion() = default;

    static IntervalUnion empty() { return {}; }
    static IntervalUnion point(double x);
    static IntervalUnion interval(double lo, double hi);
    static IntervalUnion whole_line();

    const std::vector<ClosedInterval>& parts() const { return parts_; }
    bool is_empty() const { return parts_.empty(); }
    bool contains(double p) const;

    /// Smallest and largest elements (possibly infinite). Undefined when empty.
    double lower() const { return parts_.front().lo; }
    double upper() const { return parts_.back().hi; }

    /// { s + offset : s in this }.
    IntervalUnion shifted(double offset) const;
    /// { -s : s in this }.
    IntervalUnion negated() const;
    /// { factor * s : s in this }, factor > 0.
    IntervalUnion scaled(double factor) const;
    IntervalUnion united(const IntervalUnion& other) const;

    std::string to_string() const;

    bool operator==(const IntervalUnion&) const = default;

private:
    friend IntervalUnion normalize(std::vector<ClosedInterval> raw);
    explicit IntervalUnion(std::vector<ClosedInterval> parts) : parts_(std::move(parts)) {}

    std::vector<ClosedInterval> parts_;
};

/// Sorts and merges raw intervals. Throws std::invalid_argument when some
/// interval has lo > hi or a NaN endpoint.
IntervalUnion normalize(std::vector<ClosedInterval> raw);

/// d(p; s). +infinity for the empty set, 0 exactly on members.
double distance(double p, const IntervalUnion& s);

/// A point of s attaining distance(p, s); ties go to the smaller value.
/// Throws DomainError when s is empty.
double nearest_point(double p, const IntervalUnion& s);

/// Minimum pointwise distance over an unmerged list. Used as an oracle
/// for the merged representation.
double raw_distance(double p, std::span<const ClosedInterval> raw);

}  // namespace subreg

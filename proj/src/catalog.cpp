#include "subreg/catalog.hpp"

#include <cmath>
#include <stdexcept>

namespace subreg {

namespace {

constexpr double kBreakpointSnap = 1e-12;

IntervalUnion signed_interval(double sign, double a, double b) {
    return sign > 0 ? IntervalUnion::interval(a, b) : IntervalUnion::interval(-b, -a);
}

// Q(y) for y >= 0 is built from the nonnegative branch; the negative side
// mirrors it, so Q is odd.
IntervalUnion q_eval(double y, const QMapParams& p) {
    if (y == 0.0) return IntervalUnion::point(0.0);
    const double sign = y > 0 ? 1.0 : -1.0;
    const QBranch br = q_branch(y, p.branch_base);
    if (br.k >= p.k_max) return IntervalUnion::point(0.0);
    const double upper = std::ldexp(1.0, static_cast<int>(-br.k));
    const double lower = std::ldexp(1.0, static_cast<int>(-br.k - 1));
    if (br.at_breakpoint) return signed_interval(sign, lower, upper);
    return IntervalUnion::point(sign * lower);
}

bool q_truncated(double y, const QMapParams& p) {
    if (y == 0.0) return false;
    return q_branch(y, p.branch_base).k >= p.k_max;
}

// Q^{-1}(x) = { y : x in Q(y) }.
IntervalUnion q_inverse(double x, const QMapParams& p) {
    const double cut = std::pow(p.branch_base, -p.k_max);
    if (x == 0.0) return IntervalUnion::interval(-cut, cut);
    if (x < 0.0) return q_inverse(-x, p).negated();
    if (x > 1.0) return {};
    int e = 0;
    const double mant = std::frexp(x, &e);
    if (mant == 0.5) {
        // x = 2^{-m}: interior value of branch m-1 and endpoint of the
        // breakpoint intervals at c^{-(m-1)} and c^{-m}.
        const long m = 1 - e;
        if (m == 0) return IntervalUnion::point(1.0);
        if (m - 1 >= p.k_max) return {};
        return IntervalUnion::interval(std::pow(p.branch_base, -m), std::pow(p.branch_base, -(m - 1)));
    }
    // 2^{-(m+1)} < x < 2^{-m}: only the breakpoint interval at c^{-m} reaches x.
    const long m = -e;
    if (m >= p.k_max) return {};
    return IntervalUnion::point(std::pow(p.branch_base, -m));
}

std::vector<CatalogEntry> build_catalog(const QMapParams& qp) {
    std::vector<CatalogEntry> out;

    out.push_back({"sqrt-abs", sqrt_abs_map(), {0.0, 0.0}, 2.0, ModulusBound{1.0, 1.0}, true,
                   nullptr, "f(x) = |x|^{1/2}; |x| <= (|x|^{1/2})^q on B(0,1) for q in (0,2]."});

    out.push_back({"Q-map", q_map(qp), {0.0, 0.0}, std::nullopt, std::nullopt, false, nullptr,
                   "Odd staircase: [2^{-(k+1)}, 2^{-k}] at y = c^{-k}, 2^{-(k+1)} between "
                   "breakpoints, c = 2^{1/3}; not Lipschitz-like around (0,0). Truncated after k_max "
                   "branches."});

    out.push_back({"S-map", s_map(qp), {0.0, 0.0}, 2.0, ModulusBound{1.0, 1.0}, true, nullptr,
                   "Solution map S(x) = Q^{-1}(-x) of 0 in x + Q(y); strongly 2-subregular at (0,0), "
                   "not metrically regular around it."});

    out.push_back({"subdiff-plateau", subdiff_plateau_map(), {0.0, 0.0}, 2.0, std::nullopt, false,
                   plateau_function,
                   "Subdifferential of f = max(|x|, 1); 2-subregular at (0,0), not metrically "
                   "regular. (df)^{-1}(0) stored as the closed interval [-1, 1]."});

    out.push_back({"subdiff-sqrt", subdiff_sqrt_map(), {0.0, 0.0}, std::nullopt, std::nullopt, false,
                   sqrt_abs_function,
                   "Subdifferential of f = |x|^{1/2}; the whole line at 0. q-subregular at (0,0) "
                   "for every q > 0 with radius 2^{-2q/(q+2)}, modulus 1."});

    out.push_back({"identity", identity_map(), {0.0, 0.0}, 1.0, ModulusBound{1.0, kInf}, true, nullptr,
                   "F(x) = {x}."});

    out.push_back({"zero-map", zero_map(), {0.0, 0.0}, std::nullopt, std::nullopt, false, nullptr,
                   "F(x) = {0}; F^{-1}(0) is the whole line."});

    out.push_back({"halfline-normal-cone", halfline_normal_cone_map(), {0.0, 0.0}, std::nullopt,
                   std::nullopt, false, nullptr,
                   "Normal cone to [0, inf): {0} for x > 0, (-inf, 0] at 0, empty for x < 0."});
    return out;
}

}  // namespace

QBranch q_branch(double y, double branch_base) {
    const double t = -std::log2(std::abs(y)) / std::log2(branch_base);
    const double r = std::round(t);
    if (std::abs(t - r) <= kBreakpointSnap) return {static_cast<long>(r), true};
    return {static_cast<long>(std::floor(t)), false};
}

double plateau_function(double x) {
    if (x < -1.0) return -x;
    if (x > 1.0) return x;
    return 1.0;
}

double sqrt_abs_function(double x) { return std::sqrt(std::abs(x)); }

SetValuedMap sqrt_abs_map() {
    return SetValuedMap(
        "sqrt-abs", ClosedInterval::whole_line(),
        [](double x) { return IntervalUnion::point(std::sqrt(std::abs(x))); },
        [](double y) -> IntervalUnion {
            if (y < 0.0) return {};
            if (y == 0.0) return IntervalUnion::point(0.0);
            const double x = y * y;
            return normalize({ClosedInterval::point(-x), ClosedInterval::point(x)});
        });
}

SetValuedMap q_map(const QMapParams& params) {
    SetValuedMap m(
        "Q-map", {-1.0, 1.0}, [params](double y) { return q_eval(y, params); },
        [params](double x) { return q_inverse(x, params); });
    return m.with_truncation([params](double y) { return q_truncated(y, params); });
}

SetValuedMap s_map(const QMapParams& params) {
    SetValuedMap m(
        "S-map", {-1.0, 1.0}, [params](double x) { return q_inverse(-x, params); },
        // S^{-1}(y) = { x : -x in Q(y) } = -Q(y).
        [params](double y) -> IntervalUnion {
            if (y < -1.0 || y > 1.0) return {};
            return q_eval(y, params).negated();
        });
    // S(x) is empty once |x| drops below the last retained Q value.
    const double smallest = std::ldexp(1.0, -params.k_max);
    return m.with_truncation([smallest](double x) { return x != 0.0 && std::abs(x) < smallest; });
}

SetValuedMap subdiff_plateau_map() {
    return SetValuedMap(
        "subdiff-plateau", ClosedInterval::whole_line(),
        [](double x) -> IntervalUnion {
            if (x < -1.0) return IntervalUnion::point(-1.0);
            if (x == -1.0) return IntervalUnion::interval(-1.0, 0.0);
            if (x < 1.0) return IntervalUnion::point(0.0);
            if (x == 1.0) return IntervalUnion::interval(0.0, 1.0);
            return IntervalUnion::point(1.0);
        },
        [](double y) -> IntervalUnion {
            if (y < -1.0 || y > 1.0) return {};
            if (y == -1.0) return IntervalUnion::interval(-kInf, -1.0);
            if (y < 0.0) return IntervalUnion::point(-1.0);
            if (y == 0.0) return IntervalUnion::interval(-1.0, 1.0);
            if (y < 1.0) return IntervalUnion::point(1.0);
            return IntervalUnion::interval(1.0, kInf);
        });
}

SetValuedMap subdiff_sqrt_map() {
    return SetValuedMap(
        "subdiff-sqrt", ClosedInterval::whole_line(),
        [](double x) -> IntervalUnion {
            if (x == 0.0) return IntervalUnion::whole_line();
            // 1/(2 sqrt|x|) written as sqrt(1/(4|x|)): a single rounding on dyadic x.
            const double v = std::sqrt(0.25 / std::abs(x));
            return IntervalUnion::point(x > 0 ? v : -v);
        },
        [](double y) -> IntervalUnion {
            if (y == 0.0) return IntervalUnion::point(0.0);
            const double x = 0.25 / (y * y);
            return normalize({ClosedInterval::point(0.0), ClosedInterval::point(y > 0 ? x : -x)});
        });
}

SetValuedMap identity_map() {
    return SetValuedMap(
        "identity", ClosedInterval::whole_line(), [](double x) { return IntervalUnion::point(x); },
        [](double y) { return IntervalUnion::point(y); });
}

SetValuedMap zero_map() {
    return SetValuedMap(
        "zero-map", ClosedInterval::whole_line(), [](double) { return IntervalUnion::point(0.0); },
        [](double y) { return y == 0.0 ? IntervalUnion::whole_line() : IntervalUnion{}; });
}

SetValuedMap halfline_normal_cone_map() {
    return SetValuedMap(
        "halfline-normal-cone", ClosedInterval::whole_line(),
        [](double x) -> IntervalUnion {
            if (x < 0.0) return {};
            if (x == 0.0) return IntervalUnion::interval(-kInf, 0.0);
            return IntervalUnion::point(0.0);
        },
        [](double y) -> IntervalUnion {
            if (y > 0.0) return {};
            if (y == 0.0) return IntervalUnion::interval(0.0, kInf);
            return IntervalUnion::point(0.0);
        });
}

std::vector<CatalogEntry> make_catalog(const QMapParams& q_params) { return build_catalog(q_params); }

const std::vector<CatalogEntry>& catalog() {
    static const std::vector<CatalogEntry> entries = build_catalog({});
    return entries;
}

const CatalogEntry* find_catalog_entry(const std::vector<CatalogEntry>& entries, const std::string& id) {
    for (const auto& e : entries)
        if (e.id == id) return &e;
    return nullptr;
}

const CatalogEntry& catalog_entry(const std::string& id) {
    if (const auto* e = find_catalog_entry(catalog(), id)) return *e;
    throw std::out_of_range("unknown catalog id: " + id);
}

}  // namespace subreg

#include "subreg/geneq.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cmath>
#include <stdexcept>

#include "subreg/catalog.hpp"
#include "subreg/errors.hpp"

namespace subreg {

namespace {

constexpr int kMaxBisections = 2200;
constexpr int kPolishUlps = 8;

// Signed subproblem residual: c + v with v the point of F(x) nearest -c,
// so |r| = phi(x) and r = 0 exactly when 0 is in c + F(x). NaN when F(x)
// is empty or x is outside the domain.
double signed_residual(const GeneralizedEquation& eq, double x_k, double b_k, double g_k, double x) {
    if (!eq.F.in_domain(x)) return std::nan("");
    const IntervalUnion fx = eq.F.eval(x);
    if (fx.is_empty()) return std::nan("");
    const double c = g_k + b_k * (x - x_k);
    const double v = nearest_point(-c, fx);
    return c + v;
}

std::optional<int> power_of_two_exponent(double x) {
    if (x <= 0.0 || !std::isfinite(x)) return std::nullopt;
    int e = 0;
    if (std::frexp(x, &e) != 0.5) return std::nullopt;
    return e - 1;
}

double nearest_power_of_two(double x) {
    if (x == 0.0 || !std::isfinite(x)) return x;
    const double p = std::exp2(std::round(std::log2(std::abs(x))));
    return std::copysign(p, x);
}

struct Candidate {
    double x;
    double phi;
};

}  // namespace

double equation_residual(const GeneralizedEquation& eq, double x) {
    return distance(-eq.g(x), eq.F.eval(x));
}

std::string schedule_name(const OperatorSchedule& s) {
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, schedule::Newton>) return "newton";
            if constexpr (std::is_same_v<T, schedule::Chord>) return "chord";
            if constexpr (std::is_same_v<T, schedule::Broyden>) return "broyden";
            if constexpr (std::is_same_v<T, schedule::Explicit>) return v.label.empty() ? "explicit" : v.label;
        },
        s);
}

double example_5_2_operator(int k) {
    if (k < 1) throw std::invalid_argument("example-5-2 schedule starts at k = 1");
    if (k > 6) throw std::invalid_argument("example-5-2 schedule is tabulated for k <= 6 (double range)");
    long fact = 1;
    for (int i = 2; i <= k; ++i) fact *= i;
    const long next = fact * (k + 1);
    const auto inv_pow2 = [](long n) { return std::ldexp(1.0, static_cast<int>(-n)); };
    return (inv_pow2(next / 2) + inv_pow2(2 * fact)) / (inv_pow2(fact) - inv_pow2(next));
}

schedule::Explicit example_5_2_schedule() {
    return {[](int k) { return example_5_2_operator(k); }, 1, "example-5-2"};
}

GeneralizedEquation example_5_2_equation() {
    return {SmoothMap::polynomial({0.0, 0.0, 1.0}, "x^2"), sqrt_abs_map(), 0.0, "example-5-2"};
}

std::string to_string(TraceStatus s) {
    switch (s) {
        case TraceStatus::Converged: return "converged";
        case TraceStatus::MaxIter: return "max_iter";
        case TraceStatus::SubproblemFailure: return "subproblem_failure";
    }
    return "?";
}

double subproblem_residual(const GeneralizedEquation& eq, double x_k, double b_k, double x) {
    const double c = eq.g(x_k) + b_k * (x - x_k);
    return distance(-c, eq.F.eval(x));
}

SubproblemResult subproblem_solve(const GeneralizedEquation& eq, double x_k, double b_k,
                                  const ClosedInterval& window, const SubproblemOptions& opt) {
    if (!(opt.tol > 0.0)) throw std::invalid_argument("subproblem tolerance must be positive");
    if (opt.scan_cells < 1) throw std::invalid_argument("subproblem scan needs at least one cell");
    const double lo = std::max(window.lo, eq.F.domain().lo);
    const double hi = std::min(window.hi, eq.F.domain().hi);
    if (!(lo <= hi) || !std::isfinite(lo) || !std::isfinite(hi))
        throw std::invalid_argument("subproblem window must be finite and meet the domain of F");

    const double g_k = eq.g(x_k);
    const auto r = [&](double x) { return signed_residual(eq, x_k, b_k, g_k, x); };
    const auto phi = [&](double x) { return subproblem_residual(eq, x_k, b_k, x); };

    // Coarse scan: uniform cells plus a geometric cluster around x_k.
    std::vector<double> xs;
    const int n = opt.scan_cells;
    const double h = (hi - lo) / n;
    for (int i = 0; i <= n; ++i) xs.push_back(i == n ? hi : lo + (hi - lo) * (static_cast<double>(i) / n));
    if (lo <= x_k && x_k <= hi) {
        xs.push_back(x_k);
        for (int j = 0; j <= opt.geometric_levels; ++j) {
            const double step = std::ldexp(h, -j);
            for (double x : {x_k - step, x_k + step})
                if (lo <= x && x <= hi) xs.push_back(x);
        }
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

    std::vector<double> rs(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) rs[i] = r(xs[i]);

    SubproblemResult result;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (std::isnan(rs[i])) continue;
        if (std::abs(rs[i]) < result.scan_minimum) {
            result.scan_minimum = std::abs(rs[i]);
            result.scan_minimum_at = xs[i];
        }
    }

    std::vector<Candidate> roots;
    const auto polish = [&](double a, double b) {
        // Best residual among the final bracket, a few neighbouring floats
        // and a nearby power of two.
        std::vector<double> trial{a, b};
        for (double base : {a, b}) {
            double up = base, down = base;
            for (int i = 0; i < kPolishUlps; ++i) {
                up = std::nextafter(up, kInf);
                down = std::nextafter(down, -kInf);
                trial.push_back(up);
                trial.push_back(down);
            }
            const double p = nearest_power_of_two(base);
            if (std::abs(p - base) <= kPolishUlps * std::abs(std::nextafter(base, kInf) - base)) trial.push_back(p);
        }
        Candidate best{a, kInf};
        for (double t : trial) {
            if (t < lo || t > hi || !eq.F.in_domain(t)) continue;
            const double v = phi(t);
            if (v < best.phi || (v == best.phi && std::abs(t - x_k) < std::abs(best.x - x_k))) best = {t, v};
        }
        if (best.phi <= opt.tol) roots.push_back(best);
    };

    // r(a) and r(b) have opposite signs.
    const auto bisect = [&](double a, double ra, double b) {
        for (int it = 0; it < kMaxBisections; ++it) {
            const double m = a + 0.5 * (b - a);
            if (m <= std::min(a, b) || m >= std::max(a, b)) break;
            const double rm = r(m);
            if (std::isnan(rm)) break;
            if (rm == 0.0) {
                roots.push_back({m, 0.0});
                return;
            }
            if ((rm < 0) == (ra < 0)) {
                a = m;
                ra = rm;
            } else {
                b = m;
            }
        }
        polish(a, b);
    };

    // Walks from a zero point toward a nonzero neighbour to find the edge
    // of the solution set.
    const auto edge = [&](double zero_x, double other_x) {
        double a = zero_x, b = other_x;
        for (int it = 0; it < kMaxBisections; ++it) {
            const double m = a + 0.5 * (b - a);
            if (m == a || m == b) break;
            const double rm = r(m);
            if (!std::isnan(rm) && rm == 0.0)
                a = m;
            else
                b = m;
        }
        roots.push_back({a, 0.0});
    };

    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (std::isnan(rs[i])) continue;
        if (rs[i] == 0.0) {
            roots.push_back({xs[i], 0.0});
            if (i > 0 && !std::isnan(rs[i - 1]) && rs[i - 1] != 0.0) edge(xs[i], xs[i - 1]);
            if (i + 1 < xs.size() && !std::isnan(rs[i + 1]) && rs[i + 1] != 0.0) edge(xs[i], xs[i + 1]);
            continue;
        }
        if (i + 1 < xs.size() && !std::isnan(rs[i + 1]) && rs[i + 1] != 0.0 && (rs[i] < 0) != (rs[i + 1] < 0))
            bisect(xs[i], rs[i], xs[i + 1]);
    }
    // Tangential roots never change sign; fall back to scan points.
    if (roots.empty()) {
        for (std::size_t i = 0; i < xs.size(); ++i)
            if (!std::isnan(rs[i]) && std::abs(rs[i]) <= opt.tol) roots.push_back({xs[i], std::abs(rs[i])});
    }
    if (roots.empty()) return result;

    // Nearest to x_k. When the rounded distances agree, two candidates on
    // the same side of x_k are still ordered by value.
    const auto closer = [x_k](double a, double b) {
        const double da = std::abs(a - x_k);
        const double db = std::abs(b - x_k);
        if (da != db) return da < db;
        if (a < x_k && b < x_k) return a > b;
        if (a > x_k && b > x_k) return a < b;
        return a < b;
    };
    const Candidate* best = &roots.front();
    for (const auto& c : roots)
        if (closer(c.x, best->x)) best = &c;
    // Among floats a few ulps away that solve the subproblem no worse, take
    // the one with the shortest mantissa.
    double chosen = best->x;
    double chosen_phi = phi(chosen);
    const auto bits = [](double x) {
        if (x == 0.0) return 0;
        int e = 0;
        const auto m = static_cast<std::uint64_t>(std::ldexp(std::abs(std::frexp(x, &e)), 53));
        return 53 - std::countr_zero(m);
    };
    if (chosen_phi == 0.0) {
        std::vector<double> near{nearest_power_of_two(chosen)};
        double up = chosen, down = chosen;
        for (int i = 0; i < kPolishUlps; ++i) {
            up = std::nextafter(up, kInf);
            down = std::nextafter(down, -kInf);
            near.push_back(up);
            near.push_back(down);
        }
        const double ulp = std::abs(std::nextafter(chosen, kInf) - chosen);
        const double start = chosen;
        for (double t : near) {
            if (t < lo || t > hi || !eq.F.in_domain(t) || std::abs(t - start) > kPolishUlps * ulp) continue;
            if (phi(t) != 0.0) continue;
            const int bt = bits(t), bc = bits(chosen);
            if (bt < bc || (bt == bc && std::abs(t - start) < std::abs(chosen - start))) chosen = t;
        }
        chosen_phi = phi(chosen);
    }
    result.x_next = chosen;
    result.residual = chosen_phi;
    return result;
}

IterationTrace solve(const GeneralizedEquation& eq, double x0, const OperatorSchedule& sched,
                     const SolveConfig& config) {
    if (config.max_iter < 0) throw std::invalid_argument("max_iter must be nonnegative");
    IterationTrace trace;
    if (const auto* ex = std::get_if<schedule::Explicit>(&sched)) trace.first_index = ex->first_index;

    double broyden_b = 0.0;
    if (const auto* br = std::get_if<schedule::Broyden>(&sched)) broyden_b = br->b0;

    double x = x0;
    for (int step = 0;; ++step) {
        trace.iterates.push_back(x);
        trace.exponents.push_back(power_of_two_exponent(x));
        const double res = equation_residual(eq, x);
        trace.residuals.push_back(res);
        if (res <= config.tol) {
            trace.status = TraceStatus::Converged;
            break;
        }
        if (step == config.max_iter) {
            trace.status = TraceStatus::MaxIter;
            break;
        }
        const int k = trace.first_index + step;
        const double b = std::visit(
            [&](const auto& s) -> double {
                using T = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<T, schedule::Newton>) return eq.g.derivative(x);
                if constexpr (std::is_same_v<T, schedule::Chord>) return s.b0;
                if constexpr (std::is_same_v<T, schedule::Broyden>) return broyden_b;
                if constexpr (std::is_same_v<T, schedule::Explicit>) return s.operator_at(k);
            },
            sched);

        const auto sub = subproblem_solve(eq, x, b, config.window, config.subproblem);
        if (!sub.x_next) {
            trace.status = TraceStatus::SubproblemFailure;
            trace.failure_scan_minimum = sub.scan_minimum;
            break;
        }
        trace.operators.push_back(b);
        trace.step_residuals.push_back(sub.residual);
        const double x_next = *sub.x_next;
        if (std::holds_alternative<schedule::Broyden>(sched) && x_next != x)
            broyden_b = (eq.g(x_next) - eq.g(x)) / (x_next - x);
        x = x_next;
    }
    return trace;
}

}  // namespace subreg

#include "subreg/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <ostream>
#include <regex>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "subreg/catalog.hpp"
#include "subreg/errors.hpp"
#include "subreg/geneq.hpp"
#include "subreg/growth.hpp"
#include "subreg/mr_probe.hpp"
#include "subreg/perturbation.hpp"
#include "subreg/rate.hpp"
#include "subreg/regularity.hpp"

namespace subreg {

using nlohmann::json;

bool RunResult::passed() const {
    return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.pass; });
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return fmt::format("{:.17g}", v);
}

namespace {

std::string cell_text(const Cell& c) {
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::monostate>) return "";
            if constexpr (std::is_same_v<T, double>) return format_double(v);
            if constexpr (std::is_same_v<T, std::int64_t>) return std::to_string(v);
            if constexpr (std::is_same_v<T, std::string>) return v;
        },
        c);
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

json cell_json(const Cell& c) {
    return std::visit(
        [](const auto& v) -> json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::monostate>) return nullptr;
            if constexpr (std::is_same_v<T, double>) {
                if (std::isfinite(v)) return v;
                return format_double(v);
            }
            if constexpr (std::is_same_v<T, std::int64_t>) return v;
            if constexpr (std::is_same_v<T, std::string>) return v;
        },
        c);
}

Cell opt_cell(const std::optional<double>& v) { return v ? Cell{*v} : Cell{}; }

json number_json(double v) { return std::isfinite(v) ? json(v) : json(format_double(v)); }

json grid_json(const GridSpec& g) {
    return {{"radius", g.radius},
            {"points_per_decade", g.points_per_decade},
            {"decades", g.decades},
            {"symmetric", g.symmetric},
            {"points", g.size()}};
}

// ---------------------------------------------------------------------------
// Spec reading

class Reader {
public:
    Reader(const json& node, std::string pointer) : node_(node), pointer_(std::move(pointer)) {}

    const json& node() const { return node_; }
    std::string at(const std::string& key) const { return pointer_ + "/" + key; }
    bool has(const std::string& key) const { return node_.contains(key); }

    [[noreturn]] void fail(const std::string& key, const std::string& what) const { throw SpecError(at(key), what); }

    void allow_only(std::initializer_list<const char*> keys) const {
        const std::set<std::string> allowed(keys.begin(), keys.end());
        for (const auto& [k, v] : node_.items())
            if (!allowed.count(k)) throw SpecError(at(k), "unknown field");
    }

    static double as_number(const json& v, const std::string& where) {
        if (v.is_number()) return v.get<double>();
        if (v.is_string()) {
            const auto s = v.get<std::string>();
            if (s == "inf" || s == "+inf") return kInf;
            if (s == "-inf") return -kInf;
        }
        throw SpecError(where, "expected a number");
    }

    double number(const std::string& key) const {
        if (!has(key)) fail(key, "required field is missing");
        return as_number(node_.at(key), at(key));
    }
    double number(const std::string& key, double fallback) const { return has(key) ? number(key) : fallback; }

    double positive(const std::string& key) const {
        const double v = number(key);
        if (!(v > 0.0) || !std::isfinite(v)) fail(key, "must be a finite positive number");
        return v;
    }
    double positive(const std::string& key, double fallback) const { return has(key) ? positive(key) : fallback; }

    double finite(const std::string& key) const {
        const double v = number(key);
        if (!std::isfinite(v)) fail(key, "must be finite");
        return v;
    }
    double finite(const std::string& key, double fallback) const { return has(key) ? finite(key) : fallback; }

    int integer(const std::string& key, int fallback, int min_value) const {
        if (!has(key)) return fallback;
        const auto& v = node_.at(key);
        if (!v.is_number_integer()) fail(key, "expected an integer");
        const auto i = v.get<long long>();
        if (i < min_value || i > 1'000'000'000) fail(key, fmt::format("must be an integer >= {}", min_value));
        return static_cast<int>(i);
    }

    bool boolean(const std::string& key, bool fallback) const {
        if (!has(key)) return fallback;
        if (!node_.at(key).is_boolean()) fail(key, "expected true or false");
        return node_.at(key).get<bool>();
    }

    std::string string(const std::string& key) const {
        if (!has(key)) fail(key, "required field is missing");
        if (!node_.at(key).is_string()) fail(key, "expected a string");
        return node_.at(key).get<std::string>();
    }
    std::string string(const std::string& key, const std::string& fallback) const {
        return has(key) ? string(key) : fallback;
    }

    std::string choice(const std::string& key, const std::string& fallback,
                       std::initializer_list<const char*> options) const {
        const auto s = string(key, fallback);
        for (const char* o : options)
            if (s == o) return s;
        std::string list;
        for (const char* o : options) list += (list.empty() ? "" : ", ") + std::string(o);
        fail(key, "must be one of: " + list);
    }

    std::vector<double> numbers(const std::string& key) const {
        if (!has(key)) fail(key, "required field is missing");
        const auto& v = node_.at(key);
        if (!v.is_array() || v.empty()) fail(key, "expected a nonempty array of numbers");
        std::vector<double> out;
        for (std::size_t i = 0; i < v.size(); ++i) out.push_back(as_number(v[i], at(key) + "/" + std::to_string(i)));
        return out;
    }

    std::pair<double, double> pair(const std::string& key) const {
        const auto v = numbers(key);
        if (v.size() != 2) fail(key, "expected two numbers");
        return {v[0], v[1]};
    }

    Reader child(const std::string& key) const {
        if (!has(key)) fail(key, "required field is missing");
        if (!node_.at(key).is_object()) fail(key, "expected an object");
        return {node_.at(key), at(key)};
    }

private:
    const json& node_;
    std::string pointer_;
};

GridSpec read_grid(const Reader& r, const std::string& key, GridSpec fallback) {
    if (!r.has(key)) return fallback;
    const Reader g = r.child(key);
    g.allow_only({"radius", "points_per_decade", "decades", "symmetric"});
    GridSpec grid = fallback;
    grid.radius = g.positive("radius", fallback.radius);
    grid.points_per_decade = g.integer("points_per_decade", fallback.points_per_decade, 1);
    grid.decades = g.integer("decades", fallback.decades, 1);
    grid.symmetric = g.boolean("symmetric", fallback.symmetric);
    if (grid.size() > 20'000'000) g.fail("points_per_decade", "grid is too large");
    return grid;
}

SmoothMap read_smooth(const Reader& r, const std::string& key) {
    const Reader g = r.child(key);
    g.allow_only({"poly", "linear", "label"});
    const std::string label = g.string("label", "");
    if (g.has("poly") == g.has("linear")) g.fail("poly", "give exactly one of poly or linear");
    if (g.has("poly")) {
        auto coeffs = g.numbers("poly");
        for (std::size_t i = 0; i < coeffs.size(); ++i)
            if (!std::isfinite(coeffs[i])) throw SpecError(g.at("poly") + "/" + std::to_string(i), "must be finite");
        return SmoothMap::polynomial(std::move(coeffs), label.empty() ? "poly" : label);
    }
    return SmoothMap::linear(g.finite("linear"), label.empty() ? "linear" : label);
}

struct ResolvedMap {
    SetValuedMap map;
    BasePoint base;
    std::function<double(double)> primal;
    std::optional<SearchWindow> window;
    std::string id;
};

struct AffinePiece {
    double from, to;
    double l0, l1, u0, u1;
};

SetValuedMap piecewise_map(std::string label, std::vector<AffinePiece> pieces) {
    ClosedInterval domain{pieces.front().from, pieces.front().to};
    for (const auto& p : pieces) {
        domain.lo = std::min(domain.lo, p.from);
        domain.hi = std::max(domain.hi, p.to);
    }
    auto eval = [pieces = std::move(pieces)](double x) {
        std::vector<ClosedInterval> parts;
        for (const auto& p : pieces) {
            if (x < p.from || x > p.to) continue;
            parts.push_back({p.l0 + p.l1 * x, p.u0 + p.u1 * x});
        }
        return normalize(std::move(parts));
    };
    return SetValuedMap(std::move(label), domain, std::move(eval));
}

ResolvedMap read_map(const Reader& r, const std::string& key) {
    if (!r.has(key)) r.fail(key, "required field is missing");
    const json& v = r.node().at(key);
    ResolvedMap out{identity_map(), {}, {}, std::nullopt, ""};
    if (v.is_string()) {
        const auto id = v.get<std::string>();
        const CatalogEntry* e = find_catalog_entry(catalog(), id);
        if (!e) r.fail(key, "unknown catalog map '" + id + "'");
        out.map = e->map;
        out.base = e->base;
        out.primal = e->primal;
        out.id = id;
    } else if (v.is_object()) {
        const Reader m(v, r.at(key));
        m.allow_only({"label", "pieces", "search_window", "cells"});
        const auto& pieces_json = m.node().contains("pieces") ? m.node().at("pieces") : json();
        if (!pieces_json.is_array() || pieces_json.empty()) m.fail("pieces", "expected a nonempty array of pieces");
        std::vector<AffinePiece> pieces;
        for (std::size_t i = 0; i < pieces_json.size(); ++i) {
            const std::string where = m.at("pieces") + "/" + std::to_string(i);
            if (!pieces_json[i].is_object()) throw SpecError(where, "expected an object");
            const Reader p(pieces_json[i], where);
            p.allow_only({"from", "to", "lower", "upper"});
            AffinePiece a{};
            a.from = p.finite("from");
            a.to = p.finite("to");
            if (a.from > a.to) p.fail("to", "piece must satisfy from <= to");
            std::tie(a.l0, a.l1) = p.pair("lower");
            std::tie(a.u0, a.u1) = p.pair("upper");
            for (double c : {a.l0, a.l1, a.u0, a.u1})
                if (!std::isfinite(c)) p.fail("lower", "coefficients must be finite");
            for (double x : {a.from, a.to})
                if (a.l0 + a.l1 * x > a.u0 + a.u1 * x) p.fail("upper", "lower bound exceeds upper bound on the piece");
            pieces.push_back(a);
        }
        out.map = piecewise_map(m.string("label", "inline"), std::move(pieces));
        out.id = out.map.label();
        SearchWindow w;
        w.range = out.map.domain();
        if (m.has("search_window")) {
            const auto [lo, hi] = m.pair("search_window");
            if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) m.fail("search_window", "expected lo < hi, both finite");
            w.range = {lo, hi};
        }
        w.cells = m.integer("cells", w.cells, 1);
        out.window = w;
        if (!r.has("base")) r.fail("base", "inline maps need a base point [x, y]");
    } else {
        r.fail(key, "expected a catalog id or an inline piecewise map");
    }
    if (r.has("base")) {
        const auto [x, y] = r.pair("base");
        if (!std::isfinite(x) || !std::isfinite(y)) r.fail("base", "base point must be finite");
        out.base = {x, y};
    }
    if (!out.map.in_domain(out.base.x) || !out.map.eval(out.base.x).contains(out.base.y))
        r.fail("base", fmt::format("({}, {}) is not in the graph of {}", format_double(out.base.x),
                                   format_double(out.base.y), out.map.label()));
    return out;
}

SubregVariant read_variant(const Reader& r, const std::string& fallback) {
    return r.choice("variant", fallback, {"plain", "strong"}) == "strong" ? SubregVariant::Strong
                                                                          : SubregVariant::Plain;
}

const char* variant_name(SubregVariant v) { return v == SubregVariant::Strong ? "strong" : "plain"; }

Table ratio_table(const std::vector<RatioRow>& rows) {
    Table t{"ratios", {"x", "numerator", "denominator", "ratio"}, {}};
    for (const auto& row : rows) t.rows.push_back({row.x, row.numerator, row.denominator, row.ratio});
    return t;
}

// ---------------------------------------------------------------------------
// Equations

struct NamedEquation {
    const char* id;
    const char* description;
    std::function<GeneralizedEquation()> make;
};

const std::vector<NamedEquation>& named_equations() {
    static const std::vector<NamedEquation> eqs{
        {"example-5-2", "0 in x^2 + |x|^{1/2}; solution 0", [] { return example_5_2_equation(); }},
        {"quadratic-root", "0 = x^2 - 1 (F = 0); solution 1",
         [] {
             return GeneralizedEquation{SmoothMap::polynomial({-1.0, 0.0, 1.0}, "x^2 - 1"), zero_map(), 1.0,
                                        "quadratic-root"};
         }},
        {"halfline-complementarity", "0 in x - 2 + N_[0,inf)(x); solution 2",
         [] {
             return GeneralizedEquation{SmoothMap::polynomial({-2.0, 1.0}, "x - 2"), halfline_normal_cone_map(), 2.0,
                                        "halfline-complementarity"};
         }},
    };
    return eqs;
}

GeneralizedEquation read_equation(const Reader& r) {
    if (!r.has("equation")) r.fail("equation", "required field is missing");
    const json& v = r.node().at("equation");
    if (v.is_string()) {
        const auto id = v.get<std::string>();
        for (const auto& e : named_equations())
            if (id == e.id) return e.make();
        r.fail("equation", "unknown equation '" + id + "'");
    }
    if (!v.is_object()) r.fail("equation", "expected an equation id or {g, F, solution}");
    const Reader e(v, r.at("equation"));
    e.allow_only({"g", "F", "solution", "label", "base"});
    GeneralizedEquation eq{read_smooth(e, "g"), identity_map(), std::nullopt, e.string("label", "inline")};
    if (!e.has("F")) e.fail("F", "required field is missing");
    if (e.node().at("F").is_string()) {
        const auto id = e.node().at("F").get<std::string>();
        const CatalogEntry* c = find_catalog_entry(catalog(), id);
        if (!c) e.fail("F", "unknown catalog map '" + id + "'");
        eq.F = c->map;
    } else {
        eq.F = read_map(e, "F").map;
    }
    if (e.has("solution")) eq.solution_hint = e.finite("solution");
    return eq;
}

OperatorSchedule read_schedule(const Reader& r) {
    if (!r.has("schedule")) r.fail("schedule", "required field is missing");
    const json& v = r.node().at("schedule");
    if (v.is_string()) {
        const auto s = v.get<std::string>();
        if (s == "newton") return schedule::Newton{};
        if (s == "example-5-2") return example_5_2_schedule();
        r.fail("schedule", "unknown schedule '" + s + "' (newton, example-5-2, or an object)");
    }
    if (!v.is_object()) r.fail("schedule", "expected a schedule name or object");
    const Reader s(v, r.at("schedule"));
    s.allow_only({"chord", "broyden", "explicit", "first_index"});
    const int kinds = int(s.has("chord")) + int(s.has("broyden")) + int(s.has("explicit"));
    if (kinds != 1) s.fail("chord", "give exactly one of chord, broyden, explicit");
    if (s.has("chord")) return schedule::Chord{s.finite("chord")};
    if (s.has("broyden")) return schedule::Broyden{s.finite("broyden")};
    auto ops = s.numbers("explicit");
    for (std::size_t i = 0; i < ops.size(); ++i)
        if (!std::isfinite(ops[i])) throw SpecError(s.at("explicit") + "/" + std::to_string(i), "must be finite");
    const int first = s.integer("first_index", 0, -1'000'000);
    return schedule::Explicit{[ops, first](int k) {
                                  const long i = std::clamp<long>(k - first, 0, static_cast<long>(ops.size()) - 1);
                                  return ops[static_cast<std::size_t>(i)];
                              },
                              first, "explicit"};
}

// ---------------------------------------------------------------------------
// Validation: parse every field once without running anything heavy.

using Runner = std::function<RunResult(const Reader&, const RunOptions&)>;

RunResult run_estimate(const Reader& r, const RunOptions& opt) {
    r.allow_only({"kind", "name", "map", "base", "q", "variant", "radius", "grid", "expect"});
    const auto m = read_map(r, "map");
    const double q = r.positive("q");
    const auto variant = read_variant(r, "plain");
    GridSpec grid = read_grid(r, "grid", GridSpec{1.0, 1000, 5, true});
    if (r.has("radius")) {
        if (r.has("grid") && r.child("grid").has("radius")) r.fail("radius", "radius is also given in grid");
        grid.radius = r.positive("radius");
    }
    std::optional<double> expect_max;
    if (r.has("expect")) {
        const Reader e = r.child("expect");
        e.allow_only({"max_modulus"});
        expect_max = e.number("max_modulus");
    }
    if (variant == SubregVariant::Plain && !m.map.has_inverse() && !m.window)
        r.fail("map", "the plain estimate needs an inverse oracle or a search window");

    const auto sweep = sweep_subreg(m.map, m.base, q, grid, variant, {opt.threads, m.window});
    const auto& est = sweep.estimate;
    RunResult res;
    res.tables.push_back(ratio_table(sweep.rows));
    res.metadata = {{"map", m.map.label()},
                    {"variant", variant_name(variant)},
                    {"q", q},
                    {"modulus", number_json(est.modulus)},
                    {"witness", est.witness},
                    {"excluded_points", est.excluded_points},
                    {"grid_points", est.grid_points},
                    {"truncation_active", est.truncation_active},
                    {"inverse_approximate", est.inverse_approximate},
                    {"grid", grid_json(grid)}};
    res.verdicts.push_back({"modulus-finite", std::isfinite(est.modulus),
                            fmt::format("eta_hat = {} at x = {}", format_double(est.modulus),
                                        format_double(est.witness))});
    if (expect_max)
        res.verdicts.push_back({"modulus-at-most", est.modulus <= *expect_max,
                                fmt::format("eta_hat = {} vs {}", format_double(est.modulus),
                                            format_double(*expect_max))});
    return res;
}

RunResult run_order_scan(const Reader& r, const RunOptions& opt) {
    r.allow_only({"kind", "name", "map", "base", "q", "radii", "variant", "grid", "rule", "expect"});
    const auto m = read_map(r, "map");
    const auto qs = r.numbers("q");
    for (std::size_t i = 0; i < qs.size(); ++i)
        if (!(qs[i] > 0.0) || !std::isfinite(qs[i])) throw SpecError(r.at("q") + "/" + std::to_string(i), "must be positive");
    const auto radii = r.numbers("radii");
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (!(radii[i] > 0.0 && radii[i] < 1.0)) throw SpecError(r.at("radii") + "/" + std::to_string(i), "must lie in (0, 1)");
        if (i > 0 && !(radii[i] < radii[i - 1])) throw SpecError(r.at("radii") + "/" + std::to_string(i), "radii must decrease");
    }
    if (radii.size() < 2) r.fail("radii", "need at least two radii");
    const auto variant = read_variant(r, "strong");
    const GridSpec grid = read_grid(r, "grid", GridSpec{1.0, 100, 3, true});
    BlowUpRule rule;
    if (r.has("rule")) {
        const Reader u = r.child("rule");
        u.allow_only({"growth_per_decade", "stability_window"});
        rule.growth_per_decade = u.positive("growth_per_decade", rule.growth_per_decade);
        rule.stability_window = u.positive("stability_window", rule.stability_window);
    }
    std::vector<std::pair<double, std::string>> expected;
    if (r.has("expect")) {
        const json& e = r.node().at("expect");
        if (!e.is_array()) r.fail("expect", "expected an array of {q, verdict}");
        for (std::size_t i = 0; i < e.size(); ++i) {
            const std::string where = r.at("expect") + "/" + std::to_string(i);
            if (!e[i].is_object()) throw SpecError(where, "expected an object");
            const Reader x(e[i], where);
            x.allow_only({"q", "verdict"});
            const double q = x.number("q");
            if (std::find(qs.begin(), qs.end(), q) == qs.end()) x.fail("q", "not among the scanned orders");
            expected.emplace_back(q, x.choice("verdict", "", {"bounded", "blow-up", "inconclusive"}));
        }
    }
    if (variant == SubregVariant::Plain && !m.map.has_inverse() && !m.window)
        r.fail("map", "the plain estimate needs an inverse oracle or a search window");

    const auto rep = order_scan(m.map, m.base, qs, radii, grid, variant, rule, {opt.threads, m.window});
    RunResult res;
    Table scan{"scan", {"q", "radius", "eta_hat", "verdict"}, {}};
    Table verdicts{"verdicts", {"q", "verdict", "min_growth_per_decade", "tail_growth"}, {}};
    const auto verdict_of = [&](double q) {
        for (const auto& v : rep.verdicts)
            if (v.q == q) return v.classification;
        return ScanClassification{};
    };
    bool truncation = false;
    for (const auto& c : rep.cells) {
        scan.rows.push_back({c.q, c.radius, c.eta_hat, to_string(verdict_of(c.q).verdict)});
        truncation = truncation || c.truncation_active;
    }
    for (const auto& v : rep.verdicts)
        verdicts.rows.push_back(
            {v.q, to_string(v.classification.verdict), v.classification.min_growth_per_decade, v.classification.tail_growth});
    res.tables = {scan, verdicts};
    res.metadata = {{"map", m.map.label()},
                    {"variant", variant_name(variant)},
                    {"grid", grid_json(grid)},
                    {"truncation_active", truncation},
                    {"q_star_lower", rep.q_star_lower ? json(*rep.q_star_lower) : json(nullptr)},
                    {"q_star_upper", rep.q_star_upper ? json(*rep.q_star_upper) : json(nullptr)}};
    if (expected.empty()) res.verdicts.push_back({"scan-completed", true, fmt::format("{} cells", rep.cells.size())});
    for (const auto& [q, want] : expected) {
        const auto got = verdict_of(q);
        res.verdicts.push_back({fmt::format("order-{}", format_double(q)), to_string(got.verdict) == want,
                                fmt::format("expected {}, got {} (min growth/decade {})", want,
                                            to_string(got.verdict), format_double(got.min_growth_per_decade))});
    }
    return res;
}

RunResult run_growth(const Reader& r, const RunOptions&) {
    r.allow_only({"kind", "name", "map", "base", "f", "variant", "q", "alpha", "beta", "eta", "x_bar", "x_bar_star",
                  "grid", "ball", "expect"});
    const auto m = read_map(r, "map");
    ScalarFunction f = m.primal;
    if (r.has("f")) {
        f = read_smooth(r, "f").value;
    } else if (!f) {
        r.fail("f", "map has no known primal function; give f");
    }
    const std::string variant = r.choice("variant", "", {"lower", "pairwise"});
    const double q = r.positive("q", 2.0);
    const double eta = r.positive("eta");
    const double x_bar = r.finite("x_bar", m.base.x);
    const double x_bar_star = r.finite("x_bar_star", m.base.y);
    const GridSpec grid = read_grid(r, "grid", GridSpec{1.0, 100, 6, true});
    const std::string expect = r.choice("expect", "pass", {"pass", "violation"});
    if (!m.map.has_inverse() && !m.window) r.fail("map", "growth checks need an inverse oracle or a search window");

    RunResult res;
    Table t{"growth", {"x", "u", "x_star", "lhs", "rhs", "margin"}, {}};
    const auto add_rows = [&t](const std::vector<GrowthRow>& rows) {
        for (const auto& g : rows) t.rows.push_back({g.x, g.u, g.x_star, g.lhs, g.rhs, g.margin});
    };
    bool pass = false;
    std::string detail;
    if (variant == "lower") {
        const double alpha = r.positive("alpha");
        const auto target = m.map.inverse_eval(x_bar_star, m.window).set;
        const auto rep = growth_check_lower(f, target, {x_bar, x_bar_star, q, alpha, eta}, grid);
        add_rows(rep.rows);
        pass = rep.pass;
        detail = fmt::format("min margin {} at x = {}", format_double(rep.margin), format_double(rep.witness));
        res.metadata = {{"margin", number_json(rep.margin)}, {"target", target.to_string()}};
    } else {
        if (m.window && !m.map.has_inverse())
            r.fail("map", "pairwise checks need a map with an inverse oracle");
        const double beta = r.positive("beta");
        const PairBall ball = r.choice("ball", "primal", {"primal", "product"}) == "product" ? PairBall::Product
                                                                                            : PairBall::Primal;
        const auto rep = growth_check_pairwise(f, m.map, {x_bar, x_bar_star, q, beta, eta, ball}, grid);
        add_rows(rep.rows);
        pass = rep.pass;
        detail = rep.first_violation
                     ? fmt::format("violation at x = {}, u = {}, x* = {} (margin {})",
                                   format_double(rep.first_violation->x), format_double(rep.first_violation->u),
                                   format_double(rep.first_violation->x_star),
                                   format_double(rep.first_violation->margin))
                     : fmt::format("{} pairs, worst margin {}", rep.pairs_checked, format_double(rep.worst_margin));
        res.metadata = {{"ball_radius", rep.ball_radius},
                        {"pairs_checked", rep.pairs_checked},
                        {"worst_margin", number_json(rep.worst_margin)}};
    }
    res.metadata["map"] = m.map.label();
    res.metadata["variant"] = variant;
    res.metadata["grid"] = grid_json(grid);
    res.tables.push_back(std::move(t));
    res.verdicts.push_back({"growth-" + expect, (expect == "pass") == pass,
                            std::string(pass ? "condition holds; " : "condition violated; ") + detail});
    return res;
}

RunResult run_mr_probe(const Reader& r, const RunOptions& opt) {
    r.allow_only({"kind", "name", "map", "base", "radii", "points_per_decade", "decades", "pairs", "harmonic_pairs",
                  "first_k", "expect"});
    const auto m = read_map(r, "map");
    XyGridSpec grid;
    if (r.has("radii")) {
        grid.radii = r.numbers("radii");
        for (std::size_t i = 0; i < grid.radii.size(); ++i)
            if (!(grid.radii[i] > 0.0 && std::isfinite(grid.radii[i])) || (i > 0 && !(grid.radii[i] < grid.radii[i - 1])))
                throw SpecError(r.at("radii") + "/" + std::to_string(i), "radii must be positive and decreasing");
    }
    grid.points_per_decade = r.integer("points_per_decade", grid.points_per_decade, 1);
    grid.decades = r.integer("decades", grid.decades, 1);
    std::vector<std::pair<double, double>> pairs;
    if (r.has("pairs")) {
        const json& p = r.node().at("pairs");
        if (!p.is_array()) r.fail("pairs", "expected an array of [x, y] pairs");
        for (std::size_t i = 0; i < p.size(); ++i) {
            const std::string where = r.at("pairs") + "/" + std::to_string(i);
            if (!p[i].is_array() || p[i].size() != 2) throw SpecError(where, "expected [x, y]");
            pairs.emplace_back(Reader::as_number(p[i][0], where + "/0"), Reader::as_number(p[i][1], where + "/1"));
        }
    }
    int first_k = r.integer("first_k", 1, -1'000'000);
    if (r.has("harmonic_pairs")) {
        // (x_bar + x_scale / k, y_bar + y_scale / k) for k = k_from..k_to.
        if (r.has("pairs")) r.fail("harmonic_pairs", "give pairs or harmonic_pairs, not both");
        const Reader h = r.child("harmonic_pairs");
        h.allow_only({"k_from", "k_to", "x_scale", "y_scale"});
        const int k_from = h.integer("k_from", 1, 1);
        const int k_to = h.integer("k_to", 10, 1);
        if (k_to < k_from || k_to - k_from > 100000) h.fail("k_to", "need k_from <= k_to within 100000 steps");
        const double xs = h.finite("x_scale", 1.0);
        const double ys = h.finite("y_scale", 1.0);
        for (int k = k_from; k <= k_to; ++k) pairs.emplace_back(m.base.x + xs / k, m.base.y + ys / k);
        first_k = k_from;
    }
    const std::string expect = r.choice("expect", "regular", {"regular", "not-regular"});
    if (!m.map.has_inverse() && !m.window) r.fail("map", "probes need an inverse oracle or a search window");

    const SweepOptions sopt{opt.threads, m.window};
    const auto rep = metric_regularity_probe(m.map, m.base, grid, {}, sopt);
    RunResult res;
    Table radii{"radii", {"radius", "sup_quotient", "witness_x", "witness_y"}, {}};
    for (const auto& row : rep.table) radii.rows.push_back({row.radius, row.sup_quotient, row.witness_x, row.witness_y});
    res.tables.push_back(std::move(radii));
    if (!rep.sequence.empty()) {
        Table seq{"sequence", {"k", "x1", "y1", "x2", "y2", "alpha", "rho1", "rho2", "quotient"}, {}};
        for (const auto& s : rep.sequence)
            seq.rows.push_back({std::int64_t{s.k}, s.x1, s.y1, s.x2, s.y2, s.alpha, s.rho1, s.rho2, s.quotient});
        res.tables.push_back(std::move(seq));
    }
    bool pairs_unbounded = false;
    if (!pairs.empty()) {
        const auto rows = quotient_along_pairs(m.map, pairs, first_k, sopt);
        Table pt{"pairs", {"k", "x", "y", "numerator", "denominator", "quotient"}, {}};
        for (const auto& p : rows) pt.rows.push_back({std::int64_t{p.k}, p.x, p.y, p.numerator, p.denominator, p.quotient});
        res.tables.push_back(std::move(pt));
        // Evidence of unboundedness: quotients increase strictly along the
        // sequence and end above 10.
        pairs_unbounded = rows.size() >= 2 && rows.back().quotient >= 10.0;
        for (std::size_t i = 1; i < rows.size(); ++i)
            if (!(rows[i].quotient > rows[i - 1].quotient)) pairs_unbounded = false;
    }
    const bool regular = rep.verdict != ScanVerdict::BlowUp && !pairs_unbounded;
    res.metadata = {{"map", m.map.label()},
                    {"verdict", to_string(rep.verdict)},
                    {"kappa_hat", number_json(rep.kappa_hat)},
                    {"min_growth_per_decade", number_json(rep.classification.min_growth_per_decade)},
                    {"sequence_unbounded", rep.sequence_unbounded},
                    {"pair_quotients_grow", pairs_unbounded}};
    res.verdicts.push_back({"metric-regularity-" + expect, regular == (expect == "regular"),
                            fmt::format("grid verdict {} (kappa_hat {}), pair quotients {}", to_string(rep.verdict),
                                        format_double(rep.kappa_hat), pairs_unbounded ? "unbounded" : "bounded")});
    return res;
}

RunResult run_perturb(const Reader& r, const RunOptions& opt) {
    r.allow_only({"kind", "name", "map", "base", "g", "q", "kappa", "lambda", "grid"});
    const auto m = read_map(r, "map");
    const SmoothMap g = read_smooth(r, "g");
    const double q = r.positive("q");
    const double kappa = r.positive("kappa");
    const double lambda = r.number("lambda");
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) r.fail("lambda", "must be a finite nonnegative number");
    const GridSpec grid = read_grid(r, "grid", GridSpec{1.0, 1000, 5, true});

    const auto rep = perturbation_bound_check(m.map, g.value, m.base, q, kappa, lambda, grid, {opt.threads, m.window});
    RunResult res;
    res.tables.push_back(ratio_table(rep.rows));
    res.metadata = {{"map", m.map.label()},
                    {"eta_hat_unperturbed", number_json(rep.eta_hat_unperturbed)},
                    {"eta_hat_perturbed", number_json(rep.eta_hat_perturbed)},
                    {"witness", rep.witness},
                    {"bound", number_json(rep.bound)},
                    {"lipschitz_estimate", rep.lipschitz_estimate},
                    {"radius", number_json(rep.radius)},
                    {"grid", grid_json(grid)}};
    res.verdicts.push_back({"kappa-dominates-estimate", rep.kappa_ok,
                            fmt::format("kappa {} vs eta_hat {}", format_double(kappa),
                                        format_double(rep.eta_hat_unperturbed))});
    res.verdicts.push_back({"lambda-dominates-lipschitz", rep.lambda_ok,
                            fmt::format("lambda {} vs lip(g) {}", format_double(lambda),
                                        format_double(rep.lipschitz_estimate))});
    res.verdicts.push_back({"perturbed-bound", rep.satisfied,
                            fmt::format("eta_hat {} <= bound {}", format_double(rep.eta_hat_perturbed),
                                        format_double(rep.bound))});
    return res;
}

RunResult run_param(const Reader& r, const RunOptions& opt) {
    r.allow_only({"kind", "name", "map", "base", "g", "q", "lambda_target", "u_radius", "u_count", "grid",
                  "equivalence_radius", "equivalence_tolerance"});
    const auto m = read_map(r, "map");
    const SmoothMap g = read_smooth(r, "g");
    ParameterizedParams p;
    p.q = r.positive("q", p.q);
    p.lambda_target = r.positive("lambda_target", p.lambda_target);
    p.u_radius = r.positive("u_radius", p.u_radius);
    p.u_count = r.integer("u_count", p.u_count, 1);
    p.grid = read_grid(r, "grid", p.grid);
    p.equivalence_radius = r.positive("equivalence_radius", p.equivalence_radius);
    if (!(p.equivalence_radius * 100.0 < 1.0)) r.fail("equivalence_radius", "must be below 0.01");
    p.equivalence_tolerance = r.positive("equivalence_tolerance", p.equivalence_tolerance);

    const auto rep = parameterized_check(m.map, g, m.base, p, {opt.threads, m.window});
    RunResult res;
    Table t{"parameters", {"u", "modulus", "witness", "within_target"}, {}};
    for (const auto& row : rep.rows)
        t.rows.push_back({row.u, row.modulus, row.witness, std::string(row.within_target ? "true" : "false")});
    res.tables.push_back(std::move(t));
    res.metadata = {{"map", m.map.label()},
                    {"linearization_modulus", number_json(rep.linearization_modulus)},
                    {"sum_modulus", number_json(rep.sum_modulus)},
                    {"linearized_modulus_at_check_radius", number_json(rep.linearized_modulus_at_check_radius)},
                    {"sum_verdict", to_string(rep.sum_verdict)},
                    {"linearized_verdict", to_string(rep.linearized_verdict)},
                    {"relative_gap", number_json(rep.relative_gap)},
                    {"grid", grid_json(p.grid)}};
    res.verdicts.push_back({"linearization-modulus", rep.linearization_ok,
                            fmt::format("{} < {}", format_double(rep.linearization_modulus),
                                        format_double(p.lambda_target))});
    res.verdicts.push_back({"uniform-in-parameter", rep.all_within_target,
                            fmt::format("worst u = {}", format_double(rep.worst_u))});
    res.verdicts.push_back({"smooth-perturbation-equivalence", rep.equivalence_ok,
                            fmt::format("{} vs {}, relative gap {}", to_string(rep.sum_verdict),
                                        to_string(rep.linearized_verdict), format_double(rep.relative_gap))});
    return res;
}

RunResult run_solve(const Reader& r, const RunOptions&) {
    r.allow_only({"kind", "name", "equation", "schedule", "x0", "max_iter", "tol", "window", "scan_cells",
                  "q_list", "regression_window", "expect"});
    const auto eq = read_equation(r);
    const auto sched = read_schedule(r);
    const double x0 = r.finite("x0");
    SolveConfig cfg;
    cfg.max_iter = r.integer("max_iter", cfg.max_iter, 0);
    cfg.tol = r.positive("tol", cfg.tol);
    cfg.subproblem.tol = cfg.tol;
    if (r.has("window")) {
        const auto [lo, hi] = r.pair("window");
        if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) r.fail("window", "expected lo < hi, both finite");
        cfg.window = {lo, hi};
    }
    cfg.subproblem.scan_cells = r.integer("scan_cells", cfg.subproblem.scan_cells, 1);
    const std::vector<double> q_list = r.has("q_list") ? r.numbers("q_list") : std::vector<double>{1.0, 2.0};
    RateOptions ropt;
    ropt.regression_window = r.integer("regression_window", ropt.regression_window, 3);
    std::optional<double> order_min, order_max;
    if (r.has("expect")) {
        const Reader e = r.child("expect");
        e.allow_only({"order_min", "order_max"});
        if (e.has("order_min")) order_min = e.finite("order_min");
        if (e.has("order_max")) order_max = e.finite("order_max");
    }
    if (!eq.F.in_domain(x0)) r.fail("x0", "starting point lies outside the domain of F");

    const auto trace = solve(eq, x0, sched, cfg);
    RunResult res;
    std::optional<RateReport> rates;
    std::string rate_note;
    if (eq.solution_hint) {
        try {
            rates = rate_analysis(trace, *eq.solution_hint, eq.g.derivative(*eq.solution_hint), q_list, ropt);
        } catch (const AnalysisError& ex) {
            rate_note = ex.what();
        }
    } else {
        rate_note = "no solution given; rates skipped";
    }

    Table t{"trace", {"k", "x_k", "residual", "B_k", "q_k", "dm_ratio"}, {}};
    for (std::size_t i = 0; i < trace.iterates.size(); ++i) {
        const int k = trace.label(i);
        const RateRow* row = rates ? rates->row(k) : nullptr;
        t.rows.push_back({std::int64_t{k}, trace.iterates[i], trace.residuals[i],
                          i < trace.operators.size() ? Cell{trace.operators[i]} : Cell{},
                          row ? opt_cell(row->pointwise_order) : Cell{},
                          row ? opt_cell(row->dennis_more) : Cell{}});
    }
    res.tables.push_back(std::move(t));
    if (rates) {
        Table s{"super_ratios", {"k"}, {}};
        for (double q : q_list) s.columns.push_back("ratio_q_" + format_double(q));
        for (const auto& row : rates->rows) {
            std::vector<Cell> cells{std::int64_t{row.k}};
            for (const auto& v : row.super_ratios) cells.push_back(opt_cell(v));
            s.rows.push_back(std::move(cells));
        }
        res.tables.push_back(std::move(s));
    }
    json exponents = json::array();
    for (const auto& e : trace.exponents) exponents.push_back(e ? json(*e) : json(nullptr));
    res.metadata = {{"equation", eq.label},
                    {"schedule", schedule_name(sched)},
                    {"status", to_string(trace.status)},
                    {"first_index", trace.first_index},
                    {"power_of_two_exponents", exponents},
                    {"regression_order", rates ? json(rates->regression_order) : json(nullptr)},
                    {"rate_note", rate_note}};
    if (trace.failure_scan_minimum) res.metadata["failure_scan_minimum"] = number_json(*trace.failure_scan_minimum);
    res.verdicts.push_back({"converged", trace.status == TraceStatus::Converged,
                            fmt::format("{} after {} iterates, final residual {}", to_string(trace.status),
                                        trace.iterates.size(), format_double(trace.residuals.back()))});
    if (order_min || order_max) {
        const bool have = rates.has_value();
        const double o = have ? rates->regression_order : std::nan("");
        const bool ok = have && (!order_min || o >= *order_min) && (!order_max || o <= *order_max);
        res.verdicts.push_back({"regression-order", ok,
                                have ? fmt::format("order {}", format_double(o)) : "no rate analysis: " + rate_note});
    }
    return res;
}

const std::vector<std::pair<std::string, Runner>>& runners() {
    static const std::vector<std::pair<std::string, Runner>> table{
        {"estimate", run_estimate},       {"order-scan", run_order_scan}, {"growth-check", run_growth},
        {"mr-probe", run_mr_probe},       {"perturb-check", run_perturb}, {"param-check", run_param},
        {"solve", run_solve},
    };
    return table;
}

const Runner& runner_for(const std::string& kind) {
    for (const auto& [k, fn] : runners())
        if (k == kind) return fn;
    throw SpecError("/kind", "unknown kind '" + kind + "'");
}

}  // namespace

std::string to_csv(const Table& table) {
    std::string out;
    for (std::size_t i = 0; i < table.columns.size(); ++i) out += (i ? "," : "") + csv_escape(table.columns[i]);
    out += '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + csv_escape(cell_text(row[i]));
        out += '\n';
    }
    return out;
}

json to_json(const RunResult& result) {
    json tables = json::object();
    for (const auto& t : result.tables) {
        json rows = json::array();
        for (const auto& row : t.rows) {
            json r = json::array();
            for (const auto& c : row) r.push_back(cell_json(c));
            rows.push_back(std::move(r));
        }
        tables[t.name] = {{"columns", t.columns}, {"rows", std::move(rows)}};
    }
    json verdicts = json::array();
    for (const auto& v : result.verdicts) verdicts.push_back({{"name", v.name}, {"pass", v.pass}, {"detail", v.detail}});
    return {{"name", result.name},         {"kind", result.kind},         {"tool_version", result.tool_version},
            {"spec", result.spec_echo},    {"passed", result.passed()},   {"verdicts", std::move(verdicts)},
            {"metadata", result.metadata}, {"tables", std::move(tables)}};
}

void write_file_atomically(const std::filesystem::path& path, const std::string& contents) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        f << contents;
        f.flush();
        if (!f) throw std::runtime_error("failed writing " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

std::vector<std::filesystem::path> write_outputs(const RunResult& result, const std::filesystem::path& out_dir,
                                                 OutputFormat format) {
    std::vector<std::filesystem::path> written;
    if (format == OutputFormat::Json) {
        const auto p = out_dir / (result.name + ".json");
        write_file_atomically(p, to_json(result).dump(2) + "\n");
        written.push_back(p);
        return written;
    }
    for (const auto& t : result.tables) {
        const auto p = out_dir / (result.name + "_" + t.name + ".csv");
        write_file_atomically(p, to_csv(t));
        written.push_back(p);
    }
    Table v{"verdicts", {"verdict", "pass", "detail"}, {}};
    for (const auto& x : result.verdicts) v.rows.push_back({x.name, std::string(x.pass ? "true" : "false"), x.detail});
    const auto p = out_dir / (result.name + "_verdicts.csv");
    write_file_atomically(p, to_csv(v));
    written.push_back(p);
    return written;
}

ExperimentSpec parse_experiment_spec(const json& doc, const std::string& default_name) {
    if (!doc.is_object()) throw SpecError("", "experiment document must be a JSON object");
    const Reader r(doc, "");
    ExperimentSpec spec;
    spec.kind = r.string("kind");
    runner_for(spec.kind);
    spec.name = r.string("name", default_name);
    static const std::regex name_re("[A-Za-z0-9_.-]+");
    if (!std::regex_match(spec.name, name_re) || spec.name == "." || spec.name == "..")
        r.fail("name", "names may use letters, digits, '_', '-', '.'");
    spec.doc = doc;
    return spec;
}

RunResult run_experiment(const ExperimentSpec& spec, const RunOptions& options) {
    const auto start = std::chrono::steady_clock::now();
    RunResult res = runner_for(spec.kind)(Reader(spec.doc, ""), options);
    res.name = spec.name;
    res.kind = spec.kind;
    res.spec_echo = spec.doc;
    res.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return res;
}

int run_spec_text(const std::string& text, const std::string& default_name,
                  const std::optional<std::filesystem::path>& out_dir, std::optional<OutputFormat> format,
                  const RunOptions& options, std::ostream& out, std::ostream& err) {
    try {
        json doc;
        try {
            doc = json::parse(text);
        } catch (const json::parse_error& e) {
            throw SpecError("", std::string("invalid JSON: ") + e.what());
        }
        const auto spec = parse_experiment_spec(doc, default_name);
        const auto res = run_experiment(spec, options);
        out << fmt::format("{} ({}) v{}\n", res.name, res.kind, res.tool_version);
        for (const auto& v : res.verdicts)
            out << fmt::format("  {} {}: {}\n", v.pass ? "PASS" : "FAIL", v.name, v.detail);
        out << fmt::format("  wall-clock {:.3f} s\n", res.wall_seconds);
        if (out_dir)
            for (const auto& p : write_outputs(res, *out_dir, format.value_or(OutputFormat::Csv)))
                out << "  wrote " << p.string() << "\n";
        return res.exit_code();
    } catch (const SpecError& e) {
        err << "spec error at " << (e.where().empty() ? "/" : e.where()) << ": " << e.what() << "\n";
    } catch (const DomainError& e) {
        err << "domain error: " << e.what() << "\n";
    } catch (const CapabilityError& e) {
        err << "capability error: " << e.what() << "\n";
    } catch (const ApplicabilityError& e) {
        err << "applicability error: " << e.what() << "\n";
    } catch (const AnalysisError& e) {
        err << "analysis error: " << e.what() << "\n";
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
    }
    return 2;
}

int run_spec_file(const std::filesystem::path& path, const std::optional<std::filesystem::path>& out_dir,
                  std::optional<OutputFormat> format, const RunOptions& options, std::ostream& out,
                  std::ostream& err) {
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        err << "error: cannot read " << path.string() << "\n";
        return 2;
    }
    std::stringstream ss;
    ss << f.rdbuf();
    return run_spec_text(ss.str(), path.stem().string(), out_dir, format, options, out, err);
}

std::vector<std::string> catalog_ids() {
    std::vector<std::string> ids;
    for (const auto& e : catalog()) ids.push_back(e.id);
    return ids;
}

std::vector<std::string> equation_ids() {
    std::vector<std::string> ids;
    for (const auto& e : named_equations()) ids.push_back(e.id);
    return ids;
}

std::string describe_catalog_entry(const std::string& id) {
    const CatalogEntry& e = catalog_entry(id);
    std::string s = fmt::format("id: {}\nlabel: {}\ndomain: [{}, {}]\nbase point: ({}, {})\n", e.id, e.map.label(),
                                format_double(e.map.domain().lo), format_double(e.map.domain().hi),
                                format_double(e.base.x), format_double(e.base.y));
    s += fmt::format("inverse oracle: {}\n", e.map.has_inverse() ? "analytic" : "none (bracketed on a window)");
    if (e.known_order)
        s += fmt::format("known order: {} ({} subregular)\n", format_double(*e.known_order),
                         e.strong ? "strongly" : "metrically");
    if (e.known_modulus_bound)
        s += fmt::format("known modulus bound: eta <= {} on radius {}\n", format_double(e.known_modulus_bound->eta),
                         format_double(e.known_modulus_bound->radius));
    s += fmt::format("primal function: {}\n", e.primal ? "yes" : "no");
    if (!e.notes.empty()) s += "notes: " + e.notes + "\n";
    s += "sample values:\n";
    for (double x : {-1.0, -0.5, -0.25, 0.0, 0.25, 0.5, 1.0}) {
        const double xx = e.base.x + x;
        if (!e.map.in_domain(xx)) continue;
        s += fmt::format("  F({}) = {}\n", format_double(xx), e.map.eval(xx).to_string());
    }
    return s;
}

}  // namespace subreg

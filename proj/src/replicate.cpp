#include "subreg/replicate.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>
#include <random>

#include <fmt/format.h>

#include "subreg/geneq.hpp"
#include "subreg/growth.hpp"
#include "subreg/mr_probe.hpp"
#include "subreg/perturbation.hpp"
#include "subreg/rate.hpp"
#include "subreg/regularity.hpp"

namespace subreg {

namespace {

using Clock = std::chrono::steady_clock;

std::string f17(double v) { return format_double(v); }

bool close_rel(double a, double b, double rel) { return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b)); }

Table ratios_table(std::string name, const std::vector<RatioRow>& rows) {
    Table t{std::move(name), {"x", "numerator", "denominator", "ratio"}, {}};
    for (const auto& r : rows) t.rows.push_back({r.x, r.numerator, r.denominator, r.ratio});
    return t;
}

Table trace_table(std::string name, const IterationTrace& trace, const RateReport* rates) {
    Table t{std::move(name), {"k", "x_k", "residual", "B_k", "q_k", "dm_ratio"}, {}};
    for (std::size_t i = 0; i < trace.iterates.size(); ++i) {
        const int k = trace.label(i);
        const RateRow* row = rates ? rates->row(k) : nullptr;
        const auto opt = [](const std::optional<double>& v) { return v ? Cell{*v} : Cell{}; };
        t.rows.push_back({std::int64_t{k}, trace.iterates[i], trace.residuals[i],
                          i < trace.operators.size() ? Cell{trace.operators[i]} : Cell{},
                          row ? opt(row->pointwise_order) : Cell{}, row ? opt(row->dennis_more) : Cell{}});
    }
    return t;
}

const CatalogEntry& entry(const std::vector<CatalogEntry>& cat, const std::string& id) {
    const CatalogEntry* e = find_catalog_entry(cat, id);
    if (!e) throw std::out_of_range("no catalog entry " + id);
    return *e;
}

// --- 1: square-root map --------------------------------------------------

void criterion_1(const ReplicateOptions& o, std::vector<CheckRow>& rows, std::vector<Table>* tables) {
    const auto& cat = make_catalog(o.q_params);
    const auto& e = entry(cat, "sqrt-abs");
    const GridSpec grid{1.0, 1000, 5, true};
    const auto sweep = sweep_subreg(e.map, e.base, 2.0, grid, SubregVariant::Strong, {o.threads, std::nullopt});
    const auto& est = sweep.estimate;
    rows.push_back({1, "Ex3.2-strong-modulus", std::abs(est.modulus - 1.0) <= 1e-9 && est.grid_points >= 10000,
                    fmt::format("eta_hat {} on {} points (expected 1)", f17(est.modulus), est.grid_points)});
    if (tables) tables->push_back(ratios_table("sqrt_abs_strong_q2", sweep.rows));

    const std::vector<double> radii{1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
    const auto scan = order_scan(e.map, e.base, {1.0, 2.0, 2.5}, radii, GridSpec{1.0, 100, 3, true},
                                 SubregVariant::Strong, {}, {o.threads, std::nullopt});
    const auto verdict = [&](double q) {
        for (const auto& v : scan.verdicts)
            if (v.q == q) return v.classification;
        return ScanClassification{};
    };
    const auto c1 = verdict(1.0), c2 = verdict(2.0), c25 = verdict(2.5);
    const bool ok = c1.verdict == ScanVerdict::Bounded && c2.verdict == ScanVerdict::Bounded &&
                    c25.verdict == ScanVerdict::BlowUp;
    rows.push_back({1, "Ex3.2-order-scan", ok,
                    fmt::format("q=1 {}, q=2 {}, q=2.5 {} (min growth/decade {}, required 10)", to_string(c1.verdict),
                                to_string(c2.verdict), to_string(c25.verdict), f17(c25.min_growth_per_decade))});
    if (tables) {
        Table t{"sqrt_abs_order_scan", {"q", "radius", "eta_hat", "verdict"}, {}};
        for (const auto& c : scan.cells) t.rows.push_back({c.q, c.radius, c.eta_hat, to_string(verdict(c.q).verdict)});
        tables->push_back(std::move(t));
    }
}

// --- 2: staircase map and its solution map --------------------------------

void criterion_2(const ReplicateOptions& o, std::vector<CheckRow>& rows, std::vector<Table>* tables) {
    const auto cat = make_catalog(o.q_params);
    const auto& s = entry(cat, "S-map");
    const GridSpec grid{0.25, 1000, 5, true};
    const auto sweep = sweep_subreg(s.map, s.base, 2.0, grid, SubregVariant::Strong, {o.threads, std::nullopt});
    rows.push_back({2, "Ex3.3-strong-2-subreg", sweep.estimate.modulus <= 1.0 + 1e-9,
                    fmt::format("eta_hat {} (bound 1), witness {}, truncation {}", f17(sweep.estimate.modulus),
                                f17(sweep.estimate.witness), sweep.estimate.truncation_active ? "active" : "inactive")});
    if (tables) tables->push_back(ratios_table("s_map_strong_q2", sweep.rows));

    const auto& q = entry(cat, "Q-map");
    const auto seq = q_map_lipschitz_sequences(q.map, 3, 10);
    bool unbounded = !seq.empty();
    double worst = kInf;
    for (const auto& r : seq) {
        unbounded = unbounded && r.quotient >= r.k;
        worst = std::min(worst, r.quotient / r.k);
    }
    rows.push_back({2, "Ex3.3-not-metrically-regular", unbounded,
                    fmt::format("k = 3..10, min quotient/k {} (needs >= 1)", f17(worst))});
    if (tables) {
        Table t{"q_map_lipschitz_sequences", {"k", "x1", "y1", "x2", "y2", "alpha", "rho1", "rho2", "quotient"}, {}};
        for (const auto& r : seq) t.rows.push_back({std::int64_t{r.k}, r.x1, r.y1, r.x2, r.y2, r.alpha, r.rho1, r.rho2, r.quotient});
        tables->push_back(std::move(t));
    }
}

// --- 3: plateau function --------------------------------------------------

void criterion_3(const ReplicateOptions& o, std::vector<CheckRow>& rows, std::vector<Table>* tables) {
    const auto& cat = make_catalog(o.q_params);
    const auto& e = entry(cat, "subdiff-plateau");
    const GridSpec grid{1.0, 100, 6, true};
    const auto target = e.map.inverse_eval(0.0);
    const auto lower = growth_check_lower(e.primal, target, {0.0, 0.0, 2.0, 1.0, 0.5}, grid);
    rows.push_back({3, "Ex3.5-growth-lower", lower.pass && lower.margin >= 0.0,
                    fmt::format("min margin {} (needs >= 0), T = {}", f17(lower.margin), target.to_string())});
    const auto pair = growth_check_pairwise(e.primal, e.map, {0.0, 0.0, 2.0, 0.5, 0.5, PairBall::Primal}, grid);
    rows.push_back({3, "Ex3.5-growth-pairwise", pair.pass,
                    fmt::format("{} pairs, worst margin {}", pair.pairs_checked, f17(pair.worst_margin))});

    std::vector<std::pair<double, double>> pairs;
    for (int k = 2; k <= 25; ++k) pairs.emplace_back(1.0 / k, 1.0 / (2.0 * k));
    const auto q = quotient_along_pairs(e.map, pairs, 2, {o.threads, std::nullopt});
    bool increasing = true, formula = true;
    for (std::size_t i = 0; i < q.size(); ++i) {
        if (i > 0 && !(q[i].quotient > q[i - 1].quotient)) increasing = false;
        // d(1/k; {1}) / d(1/(2k); {0}) = 2k - 2.
        if (!close_rel(q[i].quotient, 2.0 * q[i].k - 2.0, 1e-12)) formula = false;
    }
    const double last = q.empty() ? 0.0 : q.back().quotient;
    rows.push_back({3, "Ex3.5-not-metrically-regular", increasing && formula && last >= 10.0,
                    fmt::format("quotient at k = 25 is {} (needs >= 10), increasing {}, matches 2k-2 {}", f17(last),
                                increasing, formula)});
    if (tables) {
        Table t{"plateau_pair_quotients", {"k", "x", "y", "numerator", "denominator", "quotient"}, {}};
        for (const auto& r : q) t.rows.push_back({std::int64_t{r.k}, r.x, r.y, r.numerator, r.denominator, r.quotient});
        tables->push_back(std::move(t));
        Table g{"plateau_growth_lower", {"x", "u", "x_star", "lhs", "rhs", "margin"}, {}};
        for (const auto& r : lower.rows) g.rows.push_back({r.x, r.u, r.x_star, r.lhs, r.rhs, r.margin});
        tables->push_back(std::move(g));
    }
}

// --- 4: square-root function ----------------------------------------------

void criterion_4(const ReplicateOptions& o, std::vector<CheckRow>& rows, std::vector<Table>* tables) {
    const auto& cat = make_catalog(o.q_params);
    const auto& e = entry(cat, "subdiff-sqrt");
    Table mt{"sqrt_subdiff_strong", {"q", "radius", "eta_hat", "witness"}, {}};
    for (double q : {1.0, 2.0, 4.0}) {
        const double gamma = std::pow(2.0, -2.0 * q / (q + 2.0));
        const auto est = estimate_strong_subreg_modulus(e.map, e.base, q, GridSpec{gamma, 1000, 5, true},
                                                        {o.threads, std::nullopt});
        rows.push_back({4, fmt::format("Ex3.6-strong-q{}", f17(q)), est.modulus <= 1.0 + 1e-9,
                        fmt::format("radius {}, eta_hat {} (bound 1)", f17(gamma), f17(est.modulus))});
        mt.rows.push_back({q, gamma, est.modulus, est.witness});
    }
    if (tables) tables->push_back(std::move(mt));

    Table vt{"sqrt_pairwise_violations", {"beta", "eta", "x", "u", "x_star", "margin"}, {}};
    int violated = 0, total = 0;
    std::string missing;
    for (double beta : {0.1, 1.0, 10.0}) {
        for (double eta : {0.1, 1.0, 10.0}) {
            ++total;
            const auto rep = growth_check_pairwise(e.primal, e.map, {0.0, 0.0, 2.0, beta, eta, PairBall::Primal},
                                                   GridSpec{1.0, 100, 6, true});
            if (rep.first_violation) {
                ++violated;
                const auto& v = *rep.first_violation;
                vt.rows.push_back({beta, eta, v.x, v.u, v.x_star, v.margin});
            } else {
                missing += fmt::format(" ({}, {})", f17(beta), f17(eta));
            }
        }
    }
    rows.push_back({4, "Ex3.6-pairwise-violation", violated == total,
                    fmt::format("violations for {}/{} (beta, eta) pairs{}", violated, total,
                                missing.empty() ? "" : "; none at" + missing)});
    if (tables) tables->push_back(std::move(vt));
}

// --- 5: Lipschitz perturbations -------------------------------------------

void criterion_5(const ReplicateOptions& o, std::vector<CheckRow>& rows, std::vector<Table>* tables) {
    const auto& cat = make_catalog(o.q_params);
    const auto& e = entry(cat, "sqrt-abs");
    const GridSpec grid{1.0, 1000, 5, true};
    const double kappa =
        1.05 * estimate_strong_subreg_modulus(e.map, e.base, 2.0, grid, {o.threads, std::nullopt}).modulus;
    Table t{"perturbation_bound", {"lambda", "kappa", "eta_hat_perturbed", "bound", "witness"}, {}};
    bool all = true;
    std::string detail;
    for (double lambda : {0.1, 0.3}) {
        const auto rep = perturbation_bound_check(
            e.map, [lambda](double x) { return lambda * x; }, e.base, 2.0, kappa, lambda, grid,
            {o.threads, std::nullopt});
        all = all && rep.satisfied && rep.kappa_ok && rep.lambda_ok;
        detail += fmt::format("{}lambda {}: {} <= {}", detail.empty() ? "" : "; ", f17(lambda),
                              f17(rep.eta_hat_perturbed), f17(rep.bound));
        t.rows.push_back({lambda, kappa, rep.eta_hat_perturbed, rep.bound, rep.witness});
    }
    rows.push_back({5, "Thm4.1-bound", all, detail});
    if (tables) tables->push_back(std::move(t));

    const double r = perturbation_radius(kappa, 2.0);
    const double oracle = std::pow(kappa, -0.5);
    rows.push_back({5, "Cor4.3-radius", std::abs(r - oracle) <= 1e-12 && perturbation_radius(1.0, 2.0) == 1.0,
                    fmt::format("radius {} vs kappa^(-1/2) {}", f17(r), f17(oracle))});
}

// --- 6: smooth perturbations and parameterized maps -----------------------

void criterion_6(const ReplicateOptions& o, std::vector<CheckRow>& rows, std::vector<Table>* tables) {
    const auto& cat = make_catalog(o.q_params);
    const auto& e = entry(cat, "sqrt-abs");
    const auto g = SmoothMap::polynomial({0.0, 0.0, 1.0}, "x^2");
    const ParameterizedParams p;
    const auto rep = parameterized_check(e.map, g, e.base, p, {o.threads, std::nullopt});
    double worst = 0.0;
    for (const auto& r : rep.rows) worst = std::max(worst, r.modulus);
    rows.push_back({6, "Thm4.4-uniform-modulus", rep.all_within_target && rep.rows.size() == 21,
                    fmt::format("{} parameters, max modulus {} (target {}) at u = {}", rep.rows.size(), f17(worst),
                                f17(p.lambda_target), f17(rep.worst_u))});
    rows.push_back({6, "Cor4.2-equivalence", rep.equivalence_ok,
                    fmt::format("F+g {} vs linearization {}, relative gap {} (tolerance {})",
                                to_string(rep.sum_verdict), to_string(rep.linearized_verdict),
                                f17(rep.relative_gap), f17(p.equivalence_tolerance))});
    if (tables) {
        Table t{"parameterized_moduli", {"u", "modulus", "witness", "within_target"}, {}};
        for (const auto& r : rep.rows)
            t.rows.push_back({r.u, r.modulus, r.witness, std::string(r.within_target ? "true" : "false")});
        tables->push_back(std::move(t));
    }
}

// --- 7: superlinear quasi-Newton example ----------------------------------

void criterion_7(const ReplicateOptions&, std::vector<CheckRow>& rows, std::vector<Table>* tables) {
    SolveConfig cfg;
    cfg.max_iter = 10;
    cfg.window = {-1.0, 1.0};
    const auto trace = solve(example_5_2_equation(), 0.5, example_5_2_schedule(), cfg);

    bool iterates_ok = trace.status == TraceStatus::Converged && trace.iterates.size() == 5;
    std::string detail;
    long fact = 1;
    for (std::size_t i = 0; i < trace.iterates.size() && i < 5; ++i) {
        const int k = trace.label(i);
        fact *= k;
        const double expected = std::ldexp(1.0, static_cast<int>(-fact));
        iterates_ok = iterates_ok && close_rel(trace.iterates[i], expected, 1e-10) && trace.exponents[i] &&
                      *trace.exponents[i] == -fact;
        detail += fmt::format("{}x_{}={}", detail.empty() ? "" : " ", k,
                              trace.exponents[i] ? fmt::format("2^{}", *trace.exponents[i]) : f17(trace.iterates[i]));
    }
    for (double r : trace.step_residuals) iterates_ok = iterates_ok && r <= 1e-12;
    rows.push_back({7, "Ex5.2-iterates", iterates_ok, fmt::format("{} ({})", detail, to_string(trace.status))});

    std::optional<RateReport> rates;
    try {
        rates = rate_analysis(trace, 0.0, 0.0, {1.0, 2.0});
    } catch (const std::exception& ex) {
        rows.push_back({7, "Ex5.2-orders", false, ex.what()});
        rows.push_back({7, "Ex5.2-dennis-more", false, ex.what()});
        return;
    }
    bool orders_ok = true;
    std::string od;
    for (int k = 2; k <= 4; ++k) {
        const RateRow* r = rates->row(k);
        const bool ok = r && r->pointwise_order && std::abs(*r->pointwise_order - (k + 1)) <= 1e-9;
        orders_ok = orders_ok && ok;
        od += fmt::format("{}q_{}={}", od.empty() ? "" : " ", k,
                          r && r->pointwise_order ? f17(*r->pointwise_order) : std::string("n/a"));
    }
    rows.push_back({7, "Ex5.2-orders", orders_ok, od + " (expected k+1)"});

    // g'(0) = 0, so the Dennis-More ratio is |B_k|; it must tend to zero
    // while e_{k+1}/e_k^2 does as well.
    bool dm_ok = trace.operators.size() >= 4 && close_rel(trace.operators[0], 3.0, 1e-12) &&
                 close_rel(trace.operators[1], 0.8, 1e-12) && std::abs(trace.operators[2]) <= 0.04;
    for (std::size_t i = 0; i + 1 < trace.operators.size(); ++i)
        dm_ok = dm_ok && std::abs(trace.operators[i + 1]) < std::abs(trace.operators[i]);
    for (std::size_t i = 0; i < trace.operators.size(); ++i) {
        const RateRow* r = rates->row(trace.label(i));
        dm_ok = dm_ok && r && r->dennis_more && close_rel(*r->dennis_more, std::abs(trace.operators[i]), 1e-12);
    }
    std::optional<double> prev;
    for (const auto& r : rates->rows) {
        if (r.super_ratios.size() < 2 || !r.super_ratios[1]) continue;
        if (prev) dm_ok = dm_ok && *r.super_ratios[1] < *prev;
        prev = r.super_ratios[1];
    }
    std::string bd;
    for (std::size_t i = 0; i < trace.operators.size(); ++i)
        bd += fmt::format("{}B_{}={}", bd.empty() ? "" : " ", trace.label(i), f17(trace.operators[i]));
    rows.push_back({7, "Ex5.2-dennis-more", dm_ok, bd});
    if (tables) tables->push_back(trace_table("example_5_2_trace", trace, &*rates));
}

// --- 8: solver sanity -------------------------------------------------------

void criterion_8(const ReplicateOptions&, std::vector<CheckRow>& rows, std::vector<Table>* tables) {
    const GeneralizedEquation eq{SmoothMap::polynomial({-1.0, 0.0, 1.0}, "x^2 - 1"), zero_map(), 1.0,
                                 "quadratic-root"};
    SolveConfig cfg;
    cfg.max_iter = 100;
    cfg.window = {-4.0, 4.0};

    const auto newton = solve(eq, 2.0, schedule::Newton{}, cfg);
    bool steps_ok = newton.status == TraceStatus::Converged;
    for (std::size_t i = 0; i + 1 < newton.iterates.size(); ++i) {
        const double x = newton.iterates[i];
        steps_ok = steps_ok && close_rel(newton.iterates[i + 1], x - (x * x - 1.0) / (2.0 * x), 1e-12);
    }
    double n_order = std::nan("");
    try {
        n_order = rate_analysis(newton, 1.0, 2.0, {1.0, 2.0}).regression_order;
    } catch (const std::exception&) {
    }
    rows.push_back({8, "Solver-newton", steps_ok && n_order >= 1.8 && n_order <= 2.2,
                    fmt::format("{} iterates, steps match closed form {}, regression order {}", newton.iterates.size(),
                                steps_ok, f17(n_order))});

    const auto chord = solve(eq, 2.0, schedule::Chord{4.0}, cfg);
    double c_order = std::nan("");
    try {
        c_order = rate_analysis(chord, 1.0, 2.0, {1.0, 2.0}).regression_order;
    } catch (const std::exception&) {
    }
    rows.push_back({8, "Solver-chord", chord.status == TraceStatus::Converged && c_order >= 0.9 && c_order <= 1.1,
                    fmt::format("{} iterates, regression order {}", chord.iterates.size(), f17(c_order))});
    if (tables) {
        tables->push_back(trace_table("newton_trace", newton, nullptr));
        tables->push_back(trace_table("chord_trace", chord, nullptr));
    }
}

// --- 9: properties ----------------------------------------------------------

std::vector<ClosedInterval> random_raw(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> count(0, 5);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    std::uniform_int_distribution<int> shape(0, 9);
    std::vector<ClosedInterval> raw;
    const int n = count(rng);
    for (int i = 0; i < n; ++i) {
        double a = std::round(u(rng) * 4.0) / 4.0;  // coarse lattice so parts touch and repeat
        double b = a + std::round(std::abs(u(rng)) * 2.0) / 4.0;
        switch (shape(rng)) {
            case 0: b = a; break;
            case 1: a = -kInf; break;
            case 2: b = kInf; break;
            default: break;
        }
        raw.push_back({a, b});
    }
    return raw;
}

void criterion_9(const ReplicateOptions& o, std::vector<CheckRow>& rows, std::vector<Table>*) {
    std::mt19937_64 rng(o.seed);
    std::uniform_real_distribution<double> p(-15.0, 15.0);
    int bad_lip = 0, bad_oracle = 0, bad_canon = 0, bad_nearest = 0;
    for (int c = 0; c < o.property_cases; ++c) {
        const auto raw = random_raw(rng);
        const auto s = normalize(raw);
        const auto& parts = s.parts();
        for (std::size_t i = 0; i < parts.size(); ++i) {
            if (!(parts[i].lo <= parts[i].hi)) ++bad_canon;
            if (i > 0 && !(parts[i - 1].hi < parts[i].lo)) ++bad_canon;
        }
        const double a = p(rng), b = p(rng);
        const double da = distance(a, s), db = distance(b, s);
        if (da != raw_distance(a, raw) || db != raw_distance(b, raw)) ++bad_oracle;
        if (!s.is_empty() && std::abs(da - db) > std::abs(a - b) * (1.0 + 1e-12) + 1e-12) ++bad_lip;
        if (!s.is_empty()) {
            const double n = nearest_point(a, s);
            if (!s.contains(n) || std::abs(n - a) != da) ++bad_nearest;
        }
    }
    rows.push_back({9, "Props-interval", bad_lip + bad_oracle + bad_canon + bad_nearest == 0,
                    fmt::format("{} cases: lipschitz {}, oracle {}, canonical {}, nearest {} failures",
                                o.property_cases, bad_lip, bad_oracle, bad_canon, bad_nearest)});

    const auto cat = make_catalog(o.q_params);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<std::size_t> pick(0, cat.size() - 1);
    int bad_mono = 0, bad_dom = 0, checked = 0;
    const int cases = std::max(1, o.property_cases / 10);
    for (int c = 0; c < cases; ++c) {
        const auto& e = cat[pick(rng)];
        const double q = 0.25 + 3.75 * unit(rng);
        const double q_bar = q + 2.0 * unit(rng);
        // Points within radius 0.5 of the base, log-uniform offsets.
        const double off = 0.5 * std::pow(10.0, -6.0 * unit(rng)) * (unit(rng) < 0.5 ? -1.0 : 1.0);
        const double x = e.base.x + off;
        if (!e.map.in_domain(x) || !e.map.has_inverse()) continue;
        const double den = distance(e.base.y, e.map.eval(x));
        ++checked;
        const double plain_q = subreg_ratio_at(e.map, e.base, q, x, SubregVariant::Plain);
        const double strong_q = subreg_ratio_at(e.map, e.base, q, x, SubregVariant::Strong);
        if (strong_q < plain_q) ++bad_dom;
        if (den <= 1.0) {
            const double plain_bar = subreg_ratio_at(e.map, e.base, q_bar, x, SubregVariant::Plain);
            if (plain_q > plain_bar * (1.0 + 1e-12)) ++bad_mono;
        }
    }
    rows.push_back({9, "Props-estimator", bad_mono + bad_dom == 0 && checked > 0,
                    fmt::format("{} cases over {} catalog maps: order monotonicity {}, strong dominance {} failures",
                                checked, cat.size(), bad_mono, bad_dom)});
}

}  // namespace

bool ReplicateReport::passed() const {
    return std::all_of(rows.begin(), rows.end(), [](const CheckRow& r) { return r.pass; });
}

double ReplicateReport::seconds_for(int criterion) const {
    double s = 0.0;
    for (const auto& r : rows)
        if (r.criterion == criterion) s += r.seconds;
    return s;
}

std::vector<CheckRow> run_criterion(int criterion, const ReplicateOptions& options, std::vector<Table>* tables) {
    using Fn = void (*)(const ReplicateOptions&, std::vector<CheckRow>&, std::vector<Table>*);
    static constexpr Fn fns[] = {criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
                                 criterion_6, criterion_7, criterion_8, criterion_9};
    if (criterion < 1 || criterion > 9) throw std::out_of_range("criteria are numbered 1..9");
    std::vector<CheckRow> rows;
    const auto start = Clock::now();
    fns[criterion - 1](options, rows, tables);
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    for (auto& r : rows) r.seconds = secs / static_cast<double>(rows.size());
    return rows;
}

ReplicateReport replicate_all(const ReplicateOptions& options) {
    ReplicateReport report;
    for (int c = 1; c <= 9; ++c) {
        auto rows = run_criterion(c, options, &report.tables);
        report.rows.insert(report.rows.end(), rows.begin(), rows.end());
    }
    if (options.out_dir) {
        for (const auto& t : report.tables) write_file_atomically(*options.out_dir / (t.name + ".csv"), to_csv(t));
        write_file_atomically(*options.out_dir / "matrix.csv", matrix_csv(report));
    }
    return report;
}

std::string matrix_csv(const ReplicateReport& report) {
    Table t{"matrix", {"criterion", "check", "pass", "detail"}, {}};
    for (const auto& r : report.rows)
        t.rows.push_back({std::int64_t{r.criterion}, r.id, std::string(r.pass ? "true" : "false"), r.detail});
    return to_csv(t);
}

void print_matrix(const ReplicateReport& report, std::ostream& out) {
    std::size_t width = 0;
    for (const auto& r : report.rows) width = std::max(width, r.id.size());
    for (const auto& r : report.rows)
        out << fmt::format("{} [{}] {:<{}}  {}\n", r.pass ? "PASS" : "FAIL", r.criterion, r.id, width, r.detail);
    const auto failed = std::count_if(report.rows.begin(), report.rows.end(), [](const CheckRow& r) { return !r.pass; });
    out << fmt::format("{} checks, {} failed\n", report.rows.size(), failed);
}

}  // namespace subreg

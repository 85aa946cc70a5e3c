#include "subreg/perturbation.hpp"

#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "subreg/errors.hpp"

namespace subreg {

namespace {

constexpr double kLipschitzSlack = 1e-9;

}  // namespace

double perturbed_modulus_bound(double kappa, double lambda, double q) {
    if (!(q >= 1.0)) throw ApplicabilityError(fmt::format("perturbation bounds need q >= 1 (got {})", q));
    if (!(kappa > 0.0) || !(lambda >= 0.0))
        throw ApplicabilityError("perturbation bounds need kappa > 0 and lambda >= 0");
    const double product = lambda * std::pow(kappa, 1.0 / q);
    if (!(product < 1.0))
        throw ApplicabilityError(fmt::format("lambda * kappa^(1/q) = {} is not below 1", product));
    return kappa / std::pow(1.0 - product, q);
}

double perturbation_radius(double modulus, double q) {
    if (modulus == 0.0) return kInf;
    if (std::isinf(modulus)) return 0.0;
    return 1.0 / std::pow(modulus, 1.0 / q);
}

PerturbationReport perturbation_bound_check(const SetValuedMap& map, const std::function<double(double)>& g,
                                            BasePoint base, double q, double kappa, double lambda,
                                            const GridSpec& grid, const SweepOptions& options) {
    PerturbationReport report;
    report.bound = perturbed_modulus_bound(kappa, lambda, q);
    report.radius = perturbation_radius(kappa, q);

    report.eta_hat_unperturbed = estimate_strong_subreg_modulus(map, base, q, grid, options).modulus;
    report.kappa_ok = kappa > report.eta_hat_unperturbed;
    report.lipschitz_estimate = lipschitz_estimate(g, base.x, grid.radius);
    report.lambda_ok = report.lipschitz_estimate <= lambda * (1.0 + kLipschitzSlack);

    const double g_bar = g(base.x);
    const auto perturbed = shifted_map(map, [g, g_bar](double x) { return g(x) - g_bar; },
                                       map.label() + "+perturbation");
    auto sweep = sweep_subreg(perturbed, base, q, grid, SubregVariant::Strong, options);
    report.eta_hat_perturbed = sweep.estimate.modulus;
    report.witness = sweep.estimate.witness;
    report.rows = std::move(sweep.rows);
    report.satisfied = report.eta_hat_perturbed <= report.bound;
    return report;
}

SetValuedMap parameterized_map(const SetValuedMap& map, const SmoothMap& g, double x_bar, double u) {
    const double g_bar = g(x_bar);
    const double slope = g.derivative(u);
    return shifted_map(map, [g_bar, slope, x_bar](double x) { return g_bar + slope * (x - x_bar); },
                       fmt::format("G(u={})", u));
}

ParameterizedReport parameterized_check(const SetValuedMap& map, const SmoothMap& g, BasePoint base,
                                        const ParameterizedParams& p, const SweepOptions& options) {
    if (p.u_count < 1) throw std::invalid_argument("parameterized_check needs u_count >= 1");
    ParameterizedReport report;
    const BasePoint shifted_base{base.x, base.y + g(base.x)};

    const auto linearized = parameterized_map(map, g, base.x, base.x);
    report.linearization_modulus =
        estimate_strong_subreg_modulus(linearized, shifted_base, p.q, p.grid, options).modulus;
    report.linearization_ok = report.linearization_modulus < p.lambda_target;

    report.all_within_target = true;
    double worst = -1.0;
    for (int i = 0; i < p.u_count; ++i) {
        const double u = p.u_count == 1
                             ? base.x
                             : base.x - p.u_radius + 2.0 * p.u_radius * static_cast<double>(i) / (p.u_count - 1);
        const auto est = estimate_strong_subreg_modulus(parameterized_map(map, g, base.x, u), shifted_base, p.q,
                                                        p.grid, options);
        ParameterRow row{u, est.modulus, est.witness, est.modulus <= p.lambda_target};
        if (!row.within_target) report.all_within_target = false;
        if (row.modulus > worst) {
            worst = row.modulus;
            report.worst_u = u;
        }
        report.rows.push_back(row);
    }

    // F + g against its partial linearization at x_bar.
    const auto sum = shifted_map(map, g.value, map.label() + "+g");
    GridSpec check = p.grid;
    check.radius = p.equivalence_radius;
    report.sum_modulus = estimate_strong_subreg_modulus(sum, shifted_base, p.q, check, options).modulus;
    report.linearized_modulus_at_check_radius =
        estimate_strong_subreg_modulus(linearized, shifted_base, p.q, check, options).modulus;

    const std::vector<double> radii{100.0 * p.equivalence_radius, 10.0 * p.equivalence_radius,
                                    p.equivalence_radius};
    report.sum_verdict = order_scan(sum, shifted_base, {p.q}, radii, p.grid, SubregVariant::Strong, {}, options)
                             .verdicts.front()
                             .classification.verdict;
    report.linearized_verdict =
        order_scan(linearized, shifted_base, {p.q}, radii, p.grid, SubregVariant::Strong, {}, options)
            .verdicts.front()
            .classification.verdict;

    const double a = report.sum_modulus;
    const double b = report.linearized_modulus_at_check_radius;
    report.relative_gap = std::max(a, b) > 0.0 ? std::abs(a - b) / std::max(a, b) : 0.0;
    report.equivalence_ok = report.sum_verdict == report.linearized_verdict &&
                            report.relative_gap <= p.equivalence_tolerance;
    return report;
}

}  // namespace subreg

#pragma once

// Stability of strong q-subregularity (q >= 1) under Lipschitz and smooth
// single-valued perturbations.

#include <functional>
#include <vector>

#include "subreg/catalog.hpp"
#include "subreg/regularity.hpp"

namespace subreg {

/// kappa / (1 - lambda kappa^{1/q})^q. Throws ApplicabilityError unless
/// lambda kappa^{1/q} < 1 and q >= 1.
double perturbed_modulus_bound(double kappa, double lambda, double q);

/// Lipschitz modulus below which strong q-subregularity with modulus
/// `modulus` cannot be destroyed: 1 / modulus^{1/q} (+inf for 0, 0 for +inf).
double perturbation_radius(double modulus, double q);

struct PerturbationReport {
    double eta_hat_unperturbed = 0.0;
    double eta_hat_perturbed = 0.0;
    double witness = 0.0;
    double bound = 0.0;
    double lipschitz_estimate = 0.0;
    /// kappa exceeds the unperturbed estimate.
    bool kappa_ok = false;
    /// lambda is at least the Lipschitz estimate of g near x_bar.
    bool lambda_ok = false;
    bool satisfied = false;
    /// perturbation_radius(kappa, q).
    double radius = 0.0;
    std::vector<RatioRow> rows;
};

/// Builds x -> F(x) - g(x_bar) + g(x), estimates its strong q-subregularity
/// modulus at (x_bar, y_bar) and compares it with the bound above.
PerturbationReport perturbation_bound_check(const SetValuedMap& map, const std::function<double(double)>& g,
                                            BasePoint base, double q, double kappa, double lambda,
                                            const GridSpec& grid, const SweepOptions& options = {});

struct ParameterRow {
    double u = 0.0;
    double modulus = 0.0;
    double witness = 0.0;
    bool within_target = false;
};

struct ParameterizedReport {
    /// Modulus of the partial linearization G(x_bar, .).
    double linearization_modulus = 0.0;
    bool linearization_ok = false;
    std::vector<ParameterRow> rows;
    bool all_within_target = false;
    double worst_u = 0.0;

    // Smooth-perturbation equivalence: F + g against G(x_bar, .).
    double sum_modulus = 0.0;
    double linearized_modulus_at_check_radius = 0.0;
    ScanVerdict sum_verdict = ScanVerdict::Inconclusive;
    ScanVerdict linearized_verdict = ScanVerdict::Inconclusive;
    double relative_gap = 0.0;
    bool equivalence_ok = false;
};

struct ParameterizedParams {
    double q = 2.0;
    double lambda_target = 1.3;
    /// Parameters u are spread uniformly over [x_bar - u_radius, x_bar + u_radius].
    double u_radius = 0.1;
    int u_count = 21;
    /// Sampling of x for each G(u, .).
    GridSpec grid{0.1, 200, 6, true};
    /// Radius where F + g and G(x_bar, .) are compared; their verdicts use
    /// radii {100 r, 10 r, r}.
    double equivalence_radius = 1e-3;
    double equivalence_tolerance = 0.10;
};

/// G(u, x) = g(x_bar) + g'(u)(x - x_bar) + F(x).
SetValuedMap parameterized_map(const SetValuedMap& map, const SmoothMap& g, double x_bar, double u);

ParameterizedReport parameterized_check(const SetValuedMap& map, const SmoothMap& g, BasePoint base,
                                        const ParameterizedParams& params, const SweepOptions& options = {});

}  // namespace subreg

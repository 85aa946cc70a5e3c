#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "subreg/set_valued_map.hpp"

namespace subreg {

struct BasePoint {
    double x = 0.0;
    double y = 0.0;
};

struct ModulusBound {
    double eta = 0.0;
    double radius = 0.0;
};

struct CatalogEntry {
    std::string id;
    SetValuedMap map;
    BasePoint base;
    /// Order q for which the map is known to be (strongly, if `strong`)
    /// q-subregular at the base point.
    std::optional<double> known_order;
    std::optional<ModulusBound> known_modulus_bound;
    bool strong = false;
    /// For subdifferential entries, the function f with map = df.
    std::function<double(double)> primal;
    std::string notes;
};

/// Parameters of the staircase map Q. The branch base is 2^{1/3}; the
/// construction has infinitely many pieces near 0 and is cut off after
/// `k_max` of them, below which Q(y) = {0}.
struct QMapParams {
    double branch_base = 1.2599210498948732;  // 2^{1/3}
    int k_max = 120;
};

SetValuedMap sqrt_abs_map();
SetValuedMap q_map(const QMapParams& params = {});
/// S(x) = Q^{-1}(-x), the solution map of 0 in x + Q(y).
SetValuedMap s_map(const QMapParams& params = {});
SetValuedMap subdiff_plateau_map();
SetValuedMap subdiff_sqrt_map();
SetValuedMap identity_map();
SetValuedMap zero_map();
SetValuedMap halfline_normal_cone_map();

/// f(x) = -x (x < -1), 1 (|x| <= 1), x (x > 1).
double plateau_function(double x);
/// f(x) = |x|^{1/2}.
double sqrt_abs_function(double x);

/// Branch index k of y != 0 for the Q staircase: c^{-(k+1)} < |y| <= c^{-k},
/// with `at_breakpoint` set when |y| = c^{-k} up to a 1e-12 snap in the
/// exponent.
struct QBranch {
    long k = 0;
    bool at_breakpoint = false;
};
QBranch q_branch(double y, double branch_base);

const std::vector<CatalogEntry>& catalog();
/// Catalog with a modified Q construction (negative controls).
std::vector<CatalogEntry> make_catalog(const QMapParams& q_params);
/// Throws std::out_of_range for unknown ids.
const CatalogEntry& catalog_entry(const std::string& id);
const CatalogEntry* find_catalog_entry(const std::vector<CatalogEntry>& entries, const std::string& id);

}  // namespace subreg

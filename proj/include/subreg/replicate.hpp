#pragma once

// Reproduction matrix: every worked example and quantitative claim of the
// library, recomputed and checked against its reference value.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "subreg/catalog.hpp"
#include "subreg/experiment.hpp"

namespace subreg {

struct CheckRow {
    /// Criterion number 1..9 the row belongs to.
    int criterion = 0;
    std::string id;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

struct ReplicateOptions {
    unsigned threads = 1;
    std::uint64_t seed = 42;
    /// Random cases per property family.
    int property_cases = 100000;
    /// Staircase construction; altering the branch base is a negative control.
    QMapParams q_params;
    std::optional<std::filesystem::path> out_dir;
};

struct ReplicateReport {
    std::vector<CheckRow> rows;
    std::vector<Table> tables;

    bool passed() const;
    double seconds_for(int criterion) const;
};

/// Runs the checks of one criterion (1..9).
std::vector<CheckRow> run_criterion(int criterion, const ReplicateOptions& options, std::vector<Table>* tables);

/// All criteria; writes one CSV per table and matrix.csv into out_dir.
ReplicateReport replicate_all(const ReplicateOptions& options);

void print_matrix(const ReplicateReport& report, std::ostream& out);
/// Deterministic CSV of the matrix (no timings).
std::string matrix_csv(const ReplicateReport& report);

}  // namespace subreg

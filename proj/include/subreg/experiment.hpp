#pragma once

// Declarative experiments: one JSON document describes one run of an
// estimator, checker or solver; results become named tables written as
// CSV or JSON.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace subreg {

inline constexpr const char* kToolVersion = "0.3.0";

using Cell = std::variant<std::monostate, double, std::int64_t, std::string>;

struct Table {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

struct Verdict {
    std::string name;
    bool pass = false;
    std::string detail;
};

enum class OutputFormat { Csv, Json };

struct RunResult {
    std::string name;
    std::string kind;
    nlohmann::json spec_echo;
    std::vector<Verdict> verdicts;
    std::vector<Table> tables;
    nlohmann::json metadata = nlohmann::json::object();
    double wall_seconds = 0.0;
    std::string tool_version = kToolVersion;

    bool passed() const;
    /// 0 when every verdict passes, 1 otherwise.
    int exit_code() const { return passed() ? 0 : 1; }
};

struct RunOptions {
    unsigned threads = 1;
    std::uint64_t seed = 42;
};

/// 17 significant digits; "inf", "-inf", "nan" for non-finite values.
std::string format_double(double v);
std::string to_csv(const Table& table);
nlohmann::json to_json(const RunResult& result);

/// Writes `path` through a temporary file and a rename.
void write_file_atomically(const std::filesystem::path& path, const std::string& contents);

/// Writes <name>_<table>.csv per table plus <name>_verdicts.csv, or a
/// single <name>.json.
std::vector<std::filesystem::path> write_outputs(const RunResult& result, const std::filesystem::path& out_dir,
                                                 OutputFormat format);

/// Validated experiment document.
struct ExperimentSpec {
    std::string name;
    std::string kind;
    nlohmann::json doc;
};

/// Throws SpecError (with a JSON pointer) on schema violations.
ExperimentSpec parse_experiment_spec(const nlohmann::json& doc, const std::string& default_name = "experiment");

RunResult run_experiment(const ExperimentSpec& spec, const RunOptions& options = {});

/// Full `run` verb: parse, validate, run, write. Returns the exit code
/// (0 pass, 1 fail/violation, 2 error) and reports errors on `err`.
int run_spec_text(const std::string& text, const std::string& default_name,
                  const std::optional<std::filesystem::path>& out_dir, std::optional<OutputFormat> format,
                  const RunOptions& options, std::ostream& out, std::ostream& err);

int run_spec_file(const std::filesystem::path& path, const std::optional<std::filesystem::path>& out_dir,
                  std::optional<OutputFormat> format, const RunOptions& options, std::ostream& out,
                  std::ostream& err);

std::string describe_catalog_entry(const std::string& id);
std::vector<std::string> catalog_ids();
/// Named equations accepted by `solve` specs.
std::vector<std::string> equation_ids();

}  // namespace subreg

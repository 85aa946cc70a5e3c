#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "subreg/catalog.hpp"
#include "subreg/experiment.hpp"
#include "subreg/replicate.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Metric subregularity lab: estimators, growth checks and quasi-Newton traces"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", subreg::kToolVersion);

    std::string out_dir;
    std::string format = "csv";
    unsigned threads = 1;
    std::uint64_t seed = 42;
    app.add_option("--out-dir", out_dir, "Directory for result files");
    app.add_option("--format", format, "Result format")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--threads", threads, "Worker threads for grid sweeps")->check(CLI::Range(1u, 256u));
    app.add_option("--seed", seed, "Seed for randomized property checks");

    auto* run = app.add_subcommand("run", "Run one JSON experiment spec");
    std::string spec_path;
    run->add_option("spec", spec_path, "Experiment spec file")->required();

    auto* rep = app.add_subcommand("replicate-all", "Recompute every reference example and print the matrix");
    int cases = 100000;
    double branch_base = 0.0;
    rep->add_option("--property-cases", cases, "Random cases per property family")->check(CLI::Range(1, 100000000));
    rep->add_option("--q-branch-base", branch_base, "Override the staircase branch base (negative control)");

    auto* cat = app.add_subcommand("catalog", "Inspect the built-in maps");
    cat->fallthrough();
    cat->require_subcommand(1);
    auto* list = cat->add_subcommand("list", "List catalog ids");
    auto* describe = cat->add_subcommand("describe", "Describe one catalog map");
    std::string id;
    describe->add_option("id", id, "Catalog id")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    const subreg::RunOptions options{threads, seed};
    const std::optional<std::filesystem::path> dir =
        out_dir.empty() ? std::nullopt : std::optional<std::filesystem::path>(out_dir);
    try {
        if (*run) {
            const auto fmt_opt = format == "json" ? subreg::OutputFormat::Json : subreg::OutputFormat::Csv;
            return subreg::run_spec_file(spec_path, dir.value_or("results"), fmt_opt, options, std::cout, std::cerr);
        }
        if (*rep) {
            subreg::ReplicateOptions ro;
            ro.threads = threads;
            ro.seed = seed;
            ro.property_cases = cases;
            ro.out_dir = dir;
            if (branch_base != 0.0) ro.q_params.branch_base = branch_base;
            const auto report = subreg::replicate_all(ro);
            subreg::print_matrix(report, std::cout);
            return report.passed() ? 0 : 1;
        }
        if (*list) {
            for (const auto& e : subreg::catalog())
                std::cout << fmt::format("{:<22} {}\n", e.id, e.map.label());
            std::cout << "\nequations for solve specs:";
            for (const auto& eq : subreg::equation_ids()) std::cout << " " << eq;
            std::cout << "\n";
            return 0;
        }
        if (*describe) {
            std::cout << subreg::describe_catalog_entry(id);
            return 0;
        }
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

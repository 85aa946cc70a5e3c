#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "subreg/experiment.hpp"
#include "subreg/interval_set.hpp"

using namespace subreg;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path fresh_dir(const std::string& name) {
    const auto d = fs::temp_directory_path() / ("subreg_test_" + name);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome run_text(const std::string& text, const std::optional<fs::path>& dir = std::nullopt,
                 OutputFormat format = OutputFormat::Csv) {
    std::ostringstream out, err;
    const int code = run_spec_text(text, "t", dir, format, {}, out, err);
    return {code, out.str(), err.str()};
}

json load_spec(const std::string& file) { return json::parse(slurp(fs::path(SUBREG_SPEC_DIR) / file)); }

}  // namespace

TEST(Experiment, FormatDouble) {
    EXPECT_EQ(format_double(0.1), "0.10000000000000001");
    EXPECT_EQ(format_double(1.0), "1");
    EXPECT_EQ(format_double(std::ldexp(1.0, -24)), "5.9604644775390625e-08");
    EXPECT_EQ(format_double(kInf), "inf");
    EXPECT_EQ(format_double(-kInf), "-inf");
}

TEST(Experiment, CsvQuotesFieldsWithCommas) {
    const Table t{"t", {"a", "b"}, {{std::string("x,y"), 2.5}, {std::monostate{}, std::int64_t{3}}}};
    EXPECT_EQ(to_csv(t), "a,b\n\"x,y\",2.5\n,3\n");
}

TEST(Experiment, ShippedSpecsPass) {
    for (const auto& entry : fs::directory_iterator(SUBREG_SPEC_DIR)) {
        if (entry.path().extension() != ".json") continue;
        const auto dir = fresh_dir("shipped");
        std::ostringstream out, err;
        const int code = run_spec_file(entry.path(), dir, OutputFormat::Csv, {}, out, err);
        EXPECT_EQ(code, 0) << entry.path() << "\n" << out.str() << err.str();
        for (const auto& f : fs::directory_iterator(dir)) EXPECT_NE(f.path().extension(), ".tmp");
    }
}

TEST(Experiment, EstimateCsvColumnsAndRows) {
    const auto dir = fresh_dir("estimate");
    const auto r = run_text(load_spec("sqrt_abs_estimate.json").dump(), dir);
    ASSERT_EQ(r.code, 0) << r.err;
    const auto csv = slurp(dir / "sqrt_abs_strong_q2_ratios.csv");
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "x,numerator,denominator,ratio");
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 10003);
    EXPECT_NE(csv.find("\n1,1,1,1\n"), std::string::npos);
}

TEST(Experiment, OrderScanCsvColumns) {
    const auto dir = fresh_dir("scan");
    ASSERT_EQ(run_text(load_spec("sqrt_abs_order_scan.json").dump(), dir).code, 0);
    const auto csv = slurp(dir / "sqrt_abs_orders_scan.csv");
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "q,radius,eta_hat,verdict");
    EXPECT_NE(csv.find("4,9.9999999999999995e-07,"), std::string::npos);
}

TEST(Experiment, Example52TraceCsv) {
    const auto dir = fresh_dir("trace");
    ASSERT_EQ(run_text(load_spec("example_5_2_solve.json").dump(), dir).code, 0);
    const auto csv = slurp(dir / "example_5_2_trace.csv");
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "k,x_k,residual,B_k,q_k,dm_ratio");
    EXPECT_NE(csv.find("\n1,0.5,"), std::string::npos);
    EXPECT_NE(csv.find("\n4,5.9604644775390625e-08,"), std::string::npos);
    EXPECT_NE(csv.find(",3,2,3\n"), std::string::npos);  // B_1 = 3, q_1 = 2, |B_1 - 0| = 3
}

TEST(Experiment, JsonOutputCarriesSpecVerdictsAndMetadata) {
    const auto dir = fresh_dir("json");
    ASSERT_EQ(run_text(load_spec("newton_quadratic.json").dump(), dir, OutputFormat::Json).code, 0);
    const auto doc = json::parse(slurp(dir / "newton_quadratic.json"));
    EXPECT_EQ(doc["tool_version"], kToolVersion);
    EXPECT_EQ(doc["spec"]["schedule"], "newton");
    EXPECT_TRUE(doc["passed"].get<bool>());
    EXPECT_EQ(doc["metadata"]["status"], "converged");
    EXPECT_EQ(doc["tables"]["trace"]["columns"][0], "k");
    EXPECT_FALSE(doc.contains("wall_seconds"));
}

TEST(Experiment, OutputsAreByteIdenticalAcrossRuns) {
    for (const char* file : {"sqrt_abs_order_scan.json", "example_5_2_solve.json", "plateau_mr_probe.json"}) {
        const auto a = fresh_dir("det_a"), b = fresh_dir("det_b");
        const auto text = load_spec(file).dump();
        ASSERT_EQ(run_text(text, a).code, 0);
        ASSERT_EQ(run_text(text, b).code, 0);
        for (const auto& f : fs::directory_iterator(a))
            EXPECT_EQ(slurp(f.path()), slurp(b / f.path().filename())) << f.path();
    }
}

TEST(Experiment, ViolationsExitWithOne) {
    auto est = load_spec("sqrt_abs_estimate.json");
    est["expect"]["max_modulus"] = 0.5;
    EXPECT_EQ(run_text(est.dump()).code, 1);
    auto probe = load_spec("plateau_mr_probe.json");
    probe.erase("expect");
    EXPECT_EQ(run_text(probe.dump()).code, 1);
    auto growth = load_spec("sqrt_pairwise_violation.json");
    growth.erase("expect");
    const auto r = run_text(growth.dump());
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.out.find("FAIL growth-pass"), std::string::npos);
}

TEST(Experiment, ErrorsExitWithTwoAndNameThePointer) {
    auto spec = load_spec("sqrt_abs_estimate.json");
    spec["grid"]["points_per_decade"] = "many";
    auto r = run_text(spec.dump());
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("/grid/points_per_decade"), std::string::npos) << r.err;

    auto bad_base = load_spec("sqrt_abs_estimate.json");
    bad_base["base"] = json::array({0, 1});
    r = run_text(bad_base.dump());
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("/base"), std::string::npos);

    auto perturb = load_spec("sqrt_abs_perturb.json");
    perturb["lambda"] = 0.99;
    perturb["g"] = json{{"linear", 0.99}};
    r = run_text(perturb.dump());
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("applicability"), std::string::npos) << r.err;

    EXPECT_EQ(run_text("{\"kind\": \"estimate\"").code, 2);
    EXPECT_EQ(run_text("[1, 2]").code, 2);
    EXPECT_EQ(run_text(R"({"kind": "teleport"})").code, 2);
    EXPECT_EQ(run_text(R"({"kind": "estimate", "map": "nope", "q": 2})").code, 2);
}

TEST(ExperimentProperty, MalformedSpecsAlwaysExitWithTwo) {
    const std::vector<std::pair<std::string, std::vector<std::string>>> bases{
        {"sqrt_abs_estimate.json", {"kind", "map", "q"}},
        {"sqrt_abs_order_scan.json", {"kind", "map", "q", "radii"}},
        {"plateau_growth.json", {"kind", "map", "variant", "beta", "eta"}},
        {"sqrt_abs_perturb.json", {"kind", "map", "g", "q", "kappa", "lambda"}},
        {"sqrt_abs_param.json", {"kind", "map", "g"}},
        {"example_5_2_solve.json", {"kind", "equation", "schedule", "x0"}},
        {"plateau_mr_probe.json", {"kind", "map"}},
    };
    const std::vector<json> wrong_values{json("abc"), json(nullptr), json::array(), json::object(), json(true)};
    std::mt19937_64 rng(5);
    int cases = 0;
    for (const auto& [file, required] : bases) {
        const json valid = load_spec(file);
        const std::string text = valid.dump();
        for (int trial = 0; trial < 12; ++trial) {
            json doc = valid;
            const std::string key = required[rng() % required.size()];
            std::string mutated;
            switch (trial % 4) {
                case 0: doc.erase(key); mutated = doc.dump(); break;
                case 1: doc[key] = wrong_values[rng() % wrong_values.size()]; mutated = doc.dump(); break;
                case 2: doc["unexpected_" + std::to_string(trial)] = 1; mutated = doc.dump(); break;
                default: mutated = text.substr(0, rng() % text.size()); break;
            }
            const auto r = run_text(mutated);
            EXPECT_EQ(r.code, 2) << file << " trial " << trial << ": " << mutated;
            EXPECT_FALSE(r.err.empty());
            ++cases;
        }
    }
    EXPECT_EQ(cases, 84);
}

TEST(Cli, VerbsAndExitCodes) {
    const std::string bin = SUBREG_LAB_BIN;
    const auto dir = fresh_dir("cli");
    const auto sh = [&](const std::string& args) {
        const int s = std::system((bin + " " + args + " > " + (dir / "stdout.txt").string() + " 2>&1").c_str());
        return WEXITSTATUS(s);
    };
    EXPECT_EQ(sh("catalog list"), 0);
    EXPECT_NE(slurp(dir / "stdout.txt").find("subdiff-plateau"), std::string::npos);
    EXPECT_EQ(sh("catalog describe Q-map"), 0);
    EXPECT_EQ(sh("catalog describe nope"), 2);
    EXPECT_EQ(sh("--bogus-flag catalog list"), 2);
    EXPECT_EQ(sh("run /nonexistent/spec.json"), 2);
    EXPECT_EQ(sh("--out-dir " + dir.string() + " --format json run " + std::string(SUBREG_SPEC_DIR) +
                 "/newton_quadratic.json"),
              0);
    EXPECT_TRUE(fs::exists(dir / "newton_quadratic.json"));
    EXPECT_EQ(sh("run " + std::string(SUBREG_SPEC_DIR) + "/chord_quadratic.json --out-dir " + dir.string()), 0);
    EXPECT_TRUE(fs::exists(dir / "chord_quadratic_trace.csv"));
}

TEST(Catalog, DescribeMentionsInverseAndOrder) {
    const auto s = describe_catalog_entry("sqrt-abs");
    EXPECT_NE(s.find("inverse oracle: analytic"), std::string::npos);
    EXPECT_NE(s.find("known order: 2"), std::string::npos);
    EXPECT_EQ(catalog_ids().size(), 8u);
    EXPECT_EQ(equation_ids().size(), 3u);
}

TEST(Experiment, MinimalEstimateSpecWithTopLevelRadius) {
    const auto dir = fresh_dir("minimal_estimate");
    const auto r = run_text(R"({"kind":"estimate","map":"sqrt-abs","q":2,"radius":1})", dir, OutputFormat::Json);
    ASSERT_EQ(r.code, 0) << r.err;
    const auto doc = json::parse(slurp(dir / "t.json"));
    EXPECT_NEAR(doc["metadata"]["modulus"].get<double>(), 1.0, 1e-9);
    EXPECT_EQ(run_text(R"({"kind":"estimate","map":"sqrt-abs","q":2,"radius":1,"grid":{"radius":2}})").code, 2);
    EXPECT_EQ(run_text(R"({"kind":"estimate","map":"sqrt-abs","q":2,"radius":0})").code, 2);
}

TEST(Experiment, MinimalSolveSpec) {
    const auto dir = fresh_dir("minimal_solve");
    const auto r = run_text(R"({"kind":"solve","equation":"example-5-2","schedule":"example-5-2","x0":0.5})", dir);
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(slurp(dir / "t_trace.csv").find("\n4,5.9604644775390625e-08,"), std::string::npos);
}

TEST(Experiment, MinimalPairwiseGrowthSpecReportsViolation) {
    const auto dir = fresh_dir("minimal_growth");
    const auto r =
        run_text(R"({"kind":"growth-check","map":"subdiff-sqrt","variant":"pairwise","beta":1,"eta":1})", dir);
    EXPECT_EQ(r.code, 1) << r.err;
    const auto csv = slurp(dir / "t_growth.csv");
    EXPECT_GT(std::count(csv.begin(), csv.end(), '\n'), 1);
}

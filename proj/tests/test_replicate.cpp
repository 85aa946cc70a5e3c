#include <gtest/gtest.h>

#include "subreg/replicate.hpp"

using namespace subreg;

namespace {

const CheckRow* find(const std::vector<CheckRow>& rows, const std::string& id) {
    for (const auto& r : rows)
        if (r.id == id) return &r;
    return nullptr;
}

}  // namespace

TEST(Replicate, StaircaseChecksPassWithCubeRootBase) {
    ReplicateOptions o;
    const auto rows = run_criterion(2, o, nullptr);
    ASSERT_NE(find(rows, "Ex3.3-strong-2-subreg"), nullptr);
    EXPECT_TRUE(find(rows, "Ex3.3-strong-2-subreg")->pass);
    EXPECT_TRUE(find(rows, "Ex3.3-not-metrically-regular")->pass);
}

TEST(Replicate, WrongStaircaseBaseIsCaught) {
    ReplicateOptions o;
    o.q_params.branch_base = 2.0;
    const auto rows = run_criterion(2, o, nullptr);
    const auto* row = find(rows, "Ex3.3-strong-2-subreg");
    ASSERT_NE(row, nullptr);
    EXPECT_FALSE(row->pass) << row->detail;
}

TEST(Replicate, SolverCriteriaPass) {
    ReplicateOptions o;
    for (int c : {7, 8}) {
        for (const auto& r : run_criterion(c, o, nullptr)) EXPECT_TRUE(r.pass) << r.id << ": " << r.detail;
    }
}

TEST(Replicate, TablesAndMatrixAreDeterministic) {
    ReplicateOptions o;
    o.property_cases = 2000;
    std::vector<Table> a, b;
    const auto ra = run_criterion(9, o, &a);
    const auto rb = run_criterion(9, o, &b);
    ReplicateReport x{ra, a}, y{rb, b};
    EXPECT_EQ(matrix_csv(x), matrix_csv(y));
    EXPECT_THROW(run_criterion(10, o, nullptr), std::out_of_range);
}

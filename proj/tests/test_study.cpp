#include "supmsvm/study.hpp"

#include <doctest.h>

using namespace supmsvm;

namespace {

StudyConfig small(int threads) {
    StudyConfig c;
    c.design = SimDesign::defaults(DesignKind::FourClassLinear, 9);
    c.design.n_train = 40;
    c.design.n_tune = 40;
    c.design.n_test = 400;
    c.reps = 3;
    c.methods = parse_methods("l2,supnorm,adapt-sup1,bayes");
    c.grid = LambdaGrid::range(-6, 2);
    c.bayes_mc = 2000;
    c.threads = threads;
    return c;
}

} // namespace

TEST_CASE("method lists") {
    CHECK(parse_methods("all").size() == 7);
    CHECK(parse_methods("bayes-only") == std::vector<std::string>{"bayes"});
    CHECK(parse_methods("l1,adapt-sup2") == std::vector<std::string>{"l1", "adapt-sup2"});
    CHECK_THROWS_AS(parse_methods("l1,ridge"), std::invalid_argument);
    CHECK_THROWS_AS(parse_methods("l1,l1"), std::invalid_argument);
    CHECK_THROWS_AS(parse_methods(""), std::invalid_argument);
}

TEST_CASE("study reports one row per method and Bayes last") {
    const StudyResult r = run_study(small(1));
    REQUIRE(r.reports.size() == 4);
    CHECK(r.reports[0].method == "l2");
    CHECK(r.reports[3].method == "bayes");
    CHECK(r.reports[3].cz_mean == 32.0);
    CHECK(r.runs.size() == 3);
    CHECK(r.runs[0].size() == 3);
    CHECK(r.variable_names.size() == 10);
    for (const auto& row : r.runs) {
        for (const auto& run : row) {
            CHECK(check_sum_to_zero(run.model, 1e-8));
            CHECK(run.lambda > 0.0);
        }
    }
    CHECK(r.reports[0].ms_mean == 10.0);
}

TEST_CASE("studies do not depend on the thread count") {
    const StudyResult a = run_study(small(1));
    const StudyResult b = run_study(small(4));
    for (size_t m = 0; m < a.runs.size(); ++m) {
        for (size_t rep = 0; rep < a.runs[m].size(); ++rep) {
            CHECK(a.runs[m][rep].model.w == b.runs[m][rep].model.w);
            CHECK(a.runs[m][rep].record.test_error == b.runs[m][rep].record.test_error);
        }
    }
}

TEST_CASE("Bayes-only studies fit nothing") {
    StudyConfig c = small(1);
    c.methods = {"bayes"};
    const StudyResult r = run_study(c);
    CHECK(r.runs.empty());
    REQUIRE(r.reports.size() == 1);
    CHECK(r.variable_names.size() == 10);
    CHECK(r.reports[0].test_error_se > 0.0);
}

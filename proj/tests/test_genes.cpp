#include "helpers.hpp"
#include "oracles.hpp"

#include "supmsvm/csv.hpp"
#include "supmsvm/genes.hpp"

#include <doctest.h>

#include <random>
#include <sstream>

using namespace supmsvm;

TEST_CASE("relevance matches direct summation") {
    const ExpressionMatrix e = testing_helpers::gene_hand_fixture();
    const auto scores = relevance(e);
    REQUIRE(scores.size() == 3);
    for (Eigen::Index g = 0; g < 3; ++g) {
        std::vector<double> row;
        for (Eigen::Index s = 0; s < 6; ++s) {
            row.push_back(e.values(g, s));
        }
        const double expect = oracle::relevance_direct(row, *e.sample_labels);
        CHECK(std::abs(scores[static_cast<size_t>(g)] - expect) <= 1e-12 * std::max(1.0, expect));
    }
    // gene a: class means 1.5, 4.5, 8; overall 14/3; within 0.5 + 0.5 + 2
    const double overall = 28.0 / 6.0;
    const double between = 2 * ((1.5 - overall) * (1.5 - overall) + (4.5 - overall) * (4.5 - overall) +
                                (8.0 - overall) * (8.0 - overall));
    CHECK(scores[0] == doctest::Approx(between / 3.0));
}

TEST_CASE("relevance edge cases") {
    ExpressionMatrix e = testing_helpers::gene_hand_fixture();
    e.values.row(0) << 1.0, 1.0, 2.0, 2.0, 3.0, 3.0;
    e.values.row(1).setConstant(4.0);
    const auto scores = relevance(e);
    CHECK(std::isinf(scores[0]));
    CHECK(scores[1] == 0.0);
}

TEST_CASE("standardization uses training statistics") {
    std::mt19937_64 gen(41);
    const ExpressionMatrix train = testing_helpers::expression_fixture(gen, 3, 6, 4, 5, "tr");
    const ExpressionMatrix test = testing_helpers::expression_fixture(gen, 3, 4, 4, 5, "te");
    const StandardizeResult r = standardize(train, test);
    for (Eigen::Index g = 0; g < r.train.genes(); ++g) {
        const Eigen::RowVectorXd row = r.train.values.row(g);
        const double mean = row.mean();
        const double sd = std::sqrt((row.array() - mean).square().sum() / static_cast<double>(row.size() - 1));
        CHECK(std::abs(mean) <= 1e-12);
        CHECK(std::abs(sd - 1.0) <= 1e-12);
        CHECK(r.test.values(g, 0) == doctest::Approx((test.values(g, 0) - r.means[g]) / r.sds[g]));
    }
    CHECK(r.dropped_constant.empty());
}

TEST_CASE("constant genes are dropped") {
    ExpressionMatrix train = testing_helpers::gene_hand_fixture();
    train.values.row(1).setConstant(2.0);
    const StandardizeResult r = standardize(train, train);
    CHECK(r.train.genes() == 2);
    CHECK(r.test.genes() == 2);
    CHECK(r.dropped_constant == std::vector<std::string>{"b"});
}

TEST_CASE("gene lists must agree") {
    ExpressionMatrix a = testing_helpers::gene_hand_fixture();
    ExpressionMatrix b = testing_helpers::gene_hand_fixture();
    b.gene_ids[0] = "z";
    CHECK_THROWS_AS(standardize(a, b), DimensionError);
}

TEST_CASE("ranking and screening") {
    const std::vector<double> scores = {0.5, 3.0, 0.1, 3.0, 2.0};
    CHECK(rank_by_relevance(scores) == std::vector<Eigen::Index>{1, 3, 4, 0, 2});
    const ScreenResult s = screen(scores, 2, 2);
    CHECK(s.genes == std::vector<Eigen::Index>{1, 3, 2, 0});
    CHECK(s.groups == std::vector<ScreenGroup>{ScreenGroup::Top, ScreenGroup::Top, ScreenGroup::Bottom,
                                               ScreenGroup::Bottom});
    CHECK(screen(scores, 0, 1).genes == std::vector<Eigen::Index>{2});
    CHECK_THROWS_AS(screen(scores, 3, 3), std::invalid_argument);
    CHECK_THROWS_AS(screen(scores, -1, 1), std::invalid_argument);
    CHECK(std::string(to_string(ScreenGroup::Bottom)) == "bottom");
}

TEST_CASE("expression and label files") {
    std::istringstream expr("gene,s1,s2,s3\ng1,1.5,2,3\ng2,0,-1,4e-1\n");
    ExpressionMatrix e = read_expression_csv(expr);
    CHECK(e.genes() == 2);
    CHECK(e.samples() == 3);
    CHECK(e.values(1, 2) == doctest::Approx(0.4));
    std::istringstream labels("sample,label\ns3,2\ns1,1\ns2,2\n");
    attach_labels(e, labels);
    CHECK(*e.sample_labels == std::vector<int>{1, 2, 2});
    const Dataset d = e.to_dataset();
    CHECK(d.n() == 3);
    CHECK(d.names() == std::vector<std::string>{"g1", "g2"});

    std::istringstream dup("gene,s1\ng1,1\ng1,2\n");
    CHECK_THROWS_AS(read_expression_csv(dup), CsvError);
    std::istringstream bad("gene,s1\ng1,abc\n");
    CHECK_THROWS_AS(read_expression_csv(bad), CsvError);
    std::istringstream missing("sample,label\ns1,1\n");
    CHECK_THROWS_AS(attach_labels(e, missing), std::invalid_argument);
}

TEST_CASE("pipeline reports selected genes by screening group") {
    std::mt19937_64 gen(42);
    const ExpressionMatrix train = testing_helpers::expression_fixture(gen, 3, 8, 9, 30, "tr");
    const ExpressionMatrix test = testing_helpers::expression_fixture(gen, 3, 8, 9, 30, "te");
    GenePipelineOptions opts;
    opts.top = 6;
    opts.bottom = 6;
    opts.grid = LambdaGrid::range(-6, 3);
    for (auto kind : {PenaltyKind::SupNorm, PenaltyKind::AdaptiveSupI}) {
        opts.penalty = kind;
        const GenePipelineResult r = run_gene_pipeline(train, test, opts);
        CHECK(r.screened.genes.size() == 12);
        CHECK(r.top_selected > 0);
        CHECK(r.test_error < 0.2);
        Eigen::Index bottom = 0;
        for (const auto& g : r.selected) {
            bottom += g.group == ScreenGroup::Bottom;
            CHECK(g.coefficients.size() == 3);
        }
        CHECK(r.bottom_selected == bottom);
        CHECK(r.top_selected + r.bottom_selected == static_cast<Eigen::Index>(r.selected.size()));
        if (kind == PenaltyKind::AdaptiveSupI) {
            CHECK(r.bottom_selected == 0);
        }
        std::ostringstream ranked;
        write_ranked_genes_csv(ranked, r);
        CHECK(ranked.str().rfind("rank,gene,relevance,group\n1,inf", 0) == 0);
        std::ostringstream sel;
        write_selected_genes_csv(sel, r);
        CHECK(sel.str().rfind("gene,group,relevance,w1,w2,w3\n", 0) == 0);
    }
    opts.top = 0;
    opts.bottom = 0;
    CHECK_THROWS_AS(run_gene_pipeline(train, test, opts), std::invalid_argument);
}

TEST_CASE("pipeline without test labels reports no test error") {
    std::mt19937_64 gen(43);
    const ExpressionMatrix train = testing_helpers::expression_fixture(gen, 3, 5, 4, 4, "tr");
    ExpressionMatrix test = testing_helpers::expression_fixture(gen, 3, 2, 4, 4, "te");
    test.sample_labels.reset();
    GenePipelineOptions opts;
    opts.top = 3;
    opts.bottom = 1;
    opts.penalty = PenaltyKind::L1;
    opts.grid = LambdaGrid::range(-3, 0);
    const GenePipelineResult r = run_gene_pipeline(train, test, opts);
    CHECK(std::isnan(r.test_error));
}

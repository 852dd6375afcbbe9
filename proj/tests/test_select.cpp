#include "helpers.hpp"

#include "supmsvm/select.hpp"

#include <doctest.h>

#include <random>

using namespace supmsvm;

TEST_CASE("standard grid") {
    const auto g = LambdaGrid::standard();
    REQUIRE(g.log2_values.size() == 30);
    CHECK(g.lambdas().front() == std::ldexp(1.0, -14));
    CHECK(g.lambdas().back() == 32768.0);
    const LambdaGrid descending{{3, 2}};
    const LambdaGrid empty{};
    CHECK_THROWS_AS(descending.validate(), std::invalid_argument);
    CHECK_THROWS_AS(empty.validate(), std::invalid_argument);
}

TEST_CASE("ties go to the largest lambda") {
    std::vector<LambdaError> t = {{0.5, 0.2, false, ""}, {1.0, 0.1, false, ""}, {2.0, 0.1, false, ""},
                                  {4.0, 0.3, false, ""}};
    CHECK(choose_lambda(t) == 2);
    t[3] = {4.0, 0.1, true, "boom"};
    CHECK(choose_lambda(t) == 2);
    for (auto& e : t) {
        e.failed = true;
    }
    CHECK_THROWS(choose_lambda(t));
}

TEST_CASE("holdout tuning keeps the best grid model") {
    std::mt19937_64 gen(31);
    const Dataset train = testing_helpers::random_dataset(gen, 60, 4, 3, 2, 2.0);
    const Dataset tune_set = testing_helpers::random_dataset(gen, 60, 4, 3, 2, 2.0);
    const auto grid = LambdaGrid::range(-8, 4);
    const TuneResult r = tune_on_holdout(train, tune_set, PenaltySpec::plain(PenaltyKind::SupNorm), grid);
    CHECK(r.per_lambda.size() == grid.log2_values.size());
    CHECK(r.fits == static_cast<long>(grid.log2_values.size()));
    const std::size_t pick = choose_lambda(r.per_lambda);
    CHECK(r.chosen_lambda == r.per_lambda[pick].lambda);
    CHECK(misclassification_rate(r.final_model, tune_set) == doctest::Approx(r.per_lambda[pick].error));
    for (const auto& e : r.per_lambda) {
        CHECK(e.error >= r.per_lambda[pick].error);
    }
}

TEST_CASE("leave-one-out tuning") {
    std::mt19937_64 gen(32);
    const Dataset train = testing_helpers::random_dataset(gen, 15, 3, 3, 1, 2.5);
    const auto grid = LambdaGrid::range(-4, -1);
    const TuneResult r = tune(train, std::nullopt, PenaltySpec::plain(PenaltyKind::L1), grid);
    CHECK(r.fits == 15 * 4 + 1);
    // leave-one-out error by hand at the chosen lambda
    long wrong = 0;
    for (Eigen::Index i = 0; i < train.n(); ++i) {
        std::vector<Eigen::Index> keep;
        for (Eigen::Index r2 = 0; r2 < train.n(); ++r2) {
            if (r2 != i) {
                keep.push_back(r2);
            }
        }
        const CoefModel m = fit_penalized(train.rows(keep), r.chosen_lambda, PenaltySpec::plain(PenaltyKind::L1));
        const Eigen::RowVectorXd row = train.features().row(i);
        wrong += predict(m, std::span<const double>(row.data(), static_cast<size_t>(row.size()))) !=
                 train.labels()[static_cast<size_t>(i)];
    }
    const std::size_t pick = choose_lambda(r.per_lambda);
    CHECK(r.per_lambda[pick].error == doctest::Approx(static_cast<double>(wrong) / 15.0));
}

TEST_CASE("thread count does not change the result") {
    std::mt19937_64 gen(33);
    const Dataset train = testing_helpers::random_dataset(gen, 40, 5, 3, 2);
    const Dataset tune_set = testing_helpers::random_dataset(gen, 40, 5, 3, 2);
    SelectOptions one;
    SelectOptions many;
    many.threads = 8;
    const auto grid = LambdaGrid::range(-10, 2);
    const auto a = tune(train, tune_set, PenaltySpec::plain(PenaltyKind::L2), grid, one);
    const auto b = tune(train, tune_set, PenaltySpec::plain(PenaltyKind::L2), grid, many);
    CHECK(a.chosen_lambda == b.chosen_lambda);
    CHECK(a.final_model.w == b.final_model.w);
}

TEST_CASE("adaptive pipeline drops variables the L2 stage zeroed") {
    std::mt19937_64 gen(34);
    const Dataset train = testing_helpers::random_dataset(gen, 45, 4, 3, 2, 2.0);
    const Dataset tune_set = testing_helpers::random_dataset(gen, 45, 4, 3, 2, 2.0);
    // an L2 model with the last column exactly zero
    const auto l2 = tune(train, tune_set, PenaltySpec::plain(PenaltyKind::L2), LambdaGrid::range(-6, 0));
    CoefModel w = l2.final_model;
    w.w.col(3).setZero();
    for (auto kind : {PenaltyKind::AdaptiveL1, PenaltyKind::AdaptiveSupI, PenaltyKind::AdaptiveSupII}) {
        const auto r = tune_adaptive_from_l2(train, tune_set, kind, w, LambdaGrid::range(-8, 2));
        CHECK(r.final_model.w.col(3).isZero(0.0));
        CHECK(check_sum_to_zero(r.final_model));
        CHECK(r.spec.kind == kind);
    }
    const auto full = fit_adaptive_pipeline(train, tune_set, PenaltyKind::AdaptiveSupI, LambdaGrid::range(-8, 2));
    CHECK(full.l2_stage.spec.kind == PenaltyKind::L2);
    CHECK(full.weights.kind == PenaltyKind::AdaptiveSupI);
    CHECK(full.adaptive_stage.spec.tau_vector == full.weights.tau_vector);
}

TEST_CASE("fit_penalized dispatches by penalty") {
    std::mt19937_64 gen(35);
    const Dataset d = testing_helpers::random_dataset(gen, 20, 3, 3);
    const CoefModel l2 = fit_penalized(d, 0.1, PenaltySpec::plain(PenaltyKind::L2));
    const CoefModel sup = fit_penalized(d, 0.1, PenaltySpec::plain(PenaltyKind::SupNorm));
    CHECK(check_sum_to_zero(l2, 1e-10));
    CHECK(check_sum_to_zero(sup));
    CHECK_THROWS_AS(fit_penalized(d, 0.1, PenaltySpec::adaptive_sup_i(Vector::Ones(2))), DimensionError);
}

#include "helpers.hpp"
#include "oracles.hpp"

#include "supmsvm/l2base.hpp"

#include <doctest.h>

#include <random>

using namespace supmsvm;

TEST_CASE("toy problem agrees with a grid search") {
    const Dataset data = testing_helpers::l2_toy();
    for (double lambda : {0.01, 0.1, 1.0}) {
        auto f = [&](const std::vector<double>& p) {
            const CoefModel m = testing_helpers::l2_toy_model(p);
            return oracle::hinge(m.w, m.b, data.features(), data.labels()) + lambda * m.w.squaredNorm();
        };
        const auto best = oracle::zoom_minimize(f, std::vector<double>(6, 0.0), 2.0, 5, 40);
        const double reference = f(best);
        const L2Fit fit = fit_l2(data, lambda);
        INFO("lambda " << lambda << " fit " << fit.objective << " grid " << reference);
        CHECK(std::abs(fit.objective - reference) <= 0.01 * reference);
        CHECK(fit.objective == doctest::Approx(l2_objective(fit.model, data, lambda)));
    }
}

TEST_CASE("objective never exceeds the zero model") {
    std::mt19937_64 gen(4);
    for (int t = 0; t < 10; ++t) {
        const int k = 2 + t % 4;
        const Dataset data = testing_helpers::random_dataset(gen, 30, 6, k, 2);
        const double lambda = std::ldexp(1.0, -14 + 3 * t);
        const L2Fit fit = fit_l2(data, lambda);
        CHECK(fit.objective <= k - 1 + 1e-12);
        CHECK(check_sum_to_zero(fit.model, 1e-10));
    }
}

TEST_CASE("quadratic penalty gradient matches finite differences") {
    std::mt19937_64 gen(5);
    std::normal_distribution<double> z(0.0, 1.0);
    const double lambda = 0.37;
    auto pen = [&](const Matrix& w) { return lambda * w.squaredNorm(); };
    for (int point = 0; point < 20; ++point) {
        Matrix w(3, 4);
        for (Eigen::Index i = 0; i < w.size(); ++i) {
            w.data()[i] = z(gen);
        }
        const Matrix g = l2_penalty_gradient(w, lambda);
        for (Eigen::Index i = 0; i < w.size(); ++i) {
            const double h = 1e-6;
            Matrix up = w;
            Matrix dn = w;
            up.data()[i] += h;
            dn.data()[i] -= h;
            const double fd = (pen(up) - pen(dn)) / (2 * h);
            CHECK(std::abs(fd - g.data()[i]) <= 1e-5 * std::max(1.0, std::abs(g.data()[i])));
        }
    }
}

TEST_CASE("fit configuration is validated") {
    const Dataset data = testing_helpers::l2_toy();
    CHECK_THROWS_AS(fit_l2(data, 0.0), std::invalid_argument);
    L2FitConfig c;
    c.step0 = -1.0;
    CHECK_THROWS_AS(fit_l2(data, 1.0, c), std::invalid_argument);
}

TEST_CASE("fits are deterministic") {
    const Dataset data = testing_helpers::l2_toy();
    const L2Fit a = fit_l2(data, 0.05);
    const L2Fit b = fit_l2(data, 0.05);
    CHECK(a.model.w == b.model.w);
    CHECK(a.model.b == b.model.b);
}

TEST_CASE("zero tolerance snaps small coefficients") {
    const Dataset data = testing_helpers::l2_toy();
    L2FitConfig c;
    c.zero_tol = 0.05;
    const L2Fit fit = fit_l2(data, 0.1, c);
    for (Eigen::Index i = 0; i < fit.model.w.size(); ++i) {
        const double v = fit.model.w.data()[i];
        CHECK((v == 0.0 || std::abs(v) > 0.05));
    }
    CHECK(check_sum_to_zero(fit.model, 1e-10));
}

TEST_CASE("adaptive weights") {
    Matrix w(3, 3);
    w << 0.5, 0.0, 2.0,
        -0.25, 0.0, -1.0,
        -0.25, 0.0, -1.0;
    const CoefModel m(w, Vector::Zero(3));
    const double inf = std::numeric_limits<double>::infinity();

    const auto per_coef = adaptive_weights(m, WeightMode::PerCoefficient, 1e-4);
    CHECK(per_coef.per_coefficient(0, 0) == doctest::Approx(2.0));
    CHECK(per_coef.per_coefficient(1, 0) == doctest::Approx(4.0));
    CHECK(per_coef.per_coefficient(0, 1) == inf);

    const auto per_var = adaptive_weights(m, WeightMode::PerVariable, 1e-4);
    CHECK(per_var.per_variable[0] == doctest::Approx(2.0));
    CHECK(per_var.per_variable[1] == inf);
    CHECK(per_var.per_variable[2] == doctest::Approx(0.5));
}

TEST_CASE("adaptive penalty uses weights relative to the largest coefficient") {
    Matrix w(3, 3);
    w << 1e-3, 1e-9, 4e-3,
        -5e-4, 0.0, -2e-3,
        -5e-4, -1e-9, -2e-3;
    const CoefModel m(w, Vector::Zero(3));
    const CoefModel n = normalize_scale(m);
    CHECK(n.w.cwiseAbs().maxCoeff() == doctest::Approx(1.0));

    const PenaltySpec s = adaptive_penalty(PenaltyKind::AdaptiveSupI, m);
    REQUIRE(s.tau_vector);
    // 1 / (column sup-norm / largest coefficient)
    CHECK((*s.tau_vector)[0] == doctest::Approx(4.0));
    CHECK((*s.tau_vector)[1] == std::numeric_limits<double>::infinity());
    CHECK((*s.tau_vector)[2] == doctest::Approx(1.0));

    const PenaltySpec t = adaptive_penalty(PenaltyKind::AdaptiveL1, m);
    REQUIRE(t.tau_matrix);
    CHECK((*t.tau_matrix)(1, 0) == doctest::Approx(8.0));
    CHECK_THROWS_AS(adaptive_penalty(PenaltyKind::L1, m), std::invalid_argument);
}

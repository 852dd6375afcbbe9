#include "helpers.hpp"
#include "oracles.hpp"

#include "supmsvm/simplex.hpp"

#include <doctest.h>

#include <random>
#include <sstream>

using namespace supmsvm;
using lp::LinearProgram;
using lp::Sense;
using lp::Status;

namespace {

LinearProgram two_by_two() {
    // min -x - y  s.t.  x + 2y <= 4,  3x + y <= 6
    LinearProgram p(2, 2);
    p.costs << -1.0, -1.0;
    p.a_matrix << 1.0, 2.0, 3.0, 1.0;
    p.rhs << 4.0, 6.0;
    return p;
}

} // namespace

TEST_CASE("textbook LP") {
    const auto s = lp::solve(two_by_two());
    REQUIRE(s.status == Status::Optimal);
    CHECK(s.x[0] == doctest::Approx(1.6));
    CHECK(s.x[1] == doctest::Approx(1.2));
    CHECK(s.objective == doctest::Approx(-2.8));
    CHECK(s.max_primal_residual < 1e-12);
}

TEST_CASE("phase one with equality and >= rows") {
    // min x + y  s.t.  x + y >= 2,  x - y = 1
    LinearProgram p(2, 2);
    p.costs << 1.0, 1.0;
    p.a_matrix << 1.0, 1.0, 1.0, -1.0;
    p.senses = {Sense::GE, Sense::EQ};
    p.rhs << 2.0, 1.0;
    const auto s = lp::solve(p);
    REQUIRE(s.status == Status::Optimal);
    CHECK(s.x[0] == doctest::Approx(1.5));
    CHECK(s.x[1] == doctest::Approx(0.5));
}

TEST_CASE("infeasible and unbounded programs") {
    LinearProgram inf(1, 2);
    inf.costs << 1.0;
    inf.a_matrix << 1.0, 1.0;
    inf.senses = {Sense::LE, Sense::GE};
    inf.rhs << 1.0, 2.0;
    CHECK(lp::solve(inf).status == Status::Infeasible);

    LinearProgram unb(2, 1);
    unb.costs << -1.0, 0.0;
    unb.a_matrix << 1.0, -1.0;
    unb.rhs << 1.0;
    CHECK(lp::solve(unb).status == Status::Unbounded);
}

TEST_CASE("free variables take negative values") {
    // min x  s.t.  x >= -3, x free
    LinearProgram p(1, 1);
    p.costs << 1.0;
    p.a_matrix << 1.0;
    p.senses = {Sense::GE};
    p.rhs << -3.0;
    p.lower[0] = -lp::kInfinity;
    const auto s = lp::solve(p);
    REQUIRE(s.status == Status::Optimal);
    CHECK(s.x[0] == doctest::Approx(-3.0));
}

TEST_CASE("invalid programs are rejected") {
    LinearProgram p = two_by_two();
    p.lower[0] = 1.0;
    CHECK_THROWS_AS(lp::solve(p), std::invalid_argument);
    p = two_by_two();
    p.rhs[0] = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(lp::solve(p), std::invalid_argument);
}

TEST_CASE("random programs agree with vertex enumeration") {
    std::mt19937_64 gen(2024);
    int counts[3] = {0, 0, 0};
    for (int t = 0; t < 250; ++t) {
        const LinearProgram p = testing_helpers::random_lp(gen);
        const auto expect = oracle::enumerate(p);
        const auto got = lp::solve(p);
        INFO("trial " << t);
        REQUIRE(got.status == expect.status);
        ++counts[static_cast<int>(expect.status)];
        if (expect.status == Status::Optimal) {
            CHECK(std::abs(got.objective - expect.objective) <= 1e-8 * std::max(1.0, std::abs(expect.objective)));
            CHECK(got.max_primal_residual <= 1e-9);
        }
    }
    // the generator exercises all three outcomes
    CHECK(counts[0] > 20);
    CHECK(counts[1] > 20);
    CHECK(counts[2] > 5);
}

TEST_CASE("degenerate vertex with many tied ratios") {
    // Beale's cycling example.
    LinearProgram p(4, 3);
    p.costs << -0.75, 150.0, -0.02, 6.0;
    p.a_matrix << 0.25, -60.0, -0.04, 9.0,
                  0.5, -90.0, -0.02, 3.0,
                  0.0, 0.0, 1.0, 0.0;
    p.rhs << 0.0, 0.0, 1.0;
    const auto s = lp::solve(p);
    REQUIRE(s.status == Status::Optimal);
    CHECK(s.objective == doctest::Approx(-0.05));
}

TEST_CASE("badly scaled columns") {
    // same program as two_by_two with the first variable measured in thousandths
    LinearProgram p = two_by_two();
    p.a_matrix.col(0) *= 1e-3;
    p.costs[0] *= 1e-3;
    const auto s = lp::solve(p);
    REQUIRE(s.status == Status::Optimal);
    CHECK(s.objective == doctest::Approx(-2.8));
    CHECK(s.x[0] == doctest::Approx(1600.0));
}

TEST_CASE("iteration limit is reported") {
    const auto s = lp::solve(two_by_two(), 1);
    CHECK(s.status == Status::IterationLimit);
}

TEST_CASE("dump round trip") {
    std::mt19937_64 gen(5);
    for (int t = 0; t < 10; ++t) {
        const LinearProgram p = testing_helpers::random_lp(gen);
        std::stringstream ss;
        lp::write_dump(ss, p);
        const LinearProgram q = lp::read_dump(ss);
        CHECK(q.costs == p.costs);
        CHECK(q.a_matrix == p.a_matrix);
        CHECK(q.rhs == p.rhs);
        CHECK(q.lower == p.lower);
        CHECK(q.senses == p.senses);
    }
    std::istringstream bad("LPDUMP 1\nVARS 1\nROWS 1\nCOSTS\n1\nLOWER\n0\nCONSTRAINTS\n1 << 2\nEND\n");
    CHECK_THROWS_AS(lp::read_dump(bad), std::invalid_argument);
}

#ifndef SUPMSVM_SIMGEN_HPP
#define SUPMSVM_SIMGEN_HPP

#include "supmsvm/core.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

/**
 * @file simgen.hpp
 * @brief Seeded generators for the three benchmark designs, their Bayes
 * classifiers, and Monte-Carlo Bayes error estimates.
 *
 *  - FiveClass: (x1, x2) ~ N(mu_k, 2 I) with mu_k = 2(cos((2k-1)pi/5),
 *    sin((2k-1)pi/5)), eight N(0, 1) noise inputs, equal class sizes.
 *  - FourClassLinear: x1..x4 ~ U[-1, 1], six N(0, 64) noise inputs,
 *    P(y = k | x) proportional to exp(f_k(x)) with linear f_k.
 *  - NonlinearThreeClass: x1 ~ U[-3, 3], x2 ~ U[-6, 6], three N(0, 4) noise
 *    inputs, quadratic f_k; fitted on a polynomial basis (degree 2 default).
 */

namespace supmsvm {

enum class DesignKind { FiveClass, FourClassLinear, NonlinearThreeClass };

const char* to_string(DesignKind kind);
DesignKind design_kind_from_string(const std::string& name);

int design_classes(DesignKind kind);
/// Number of raw inputs before any basis expansion.
Eigen::Index design_inputs(DesignKind kind);
/// Basis the design is fitted on by default: identity for the linear
/// designs, degree 2 with cross products for the nonlinear one.
BasisSpec default_basis(DesignKind kind);

/**
 * @brief Random source for one (seed, replication, split) stream.
 *
 * Backed by std::mt19937_64 seeded through std::seed_seq, with the
 * uniform and normal transforms written out so that draws are identical on
 * every platform.
 */
class Rng {
public:
    Rng(std::uint64_t seed, std::uint64_t stream);

    double uniform();                  ///< [0, 1)
    double uniform(double lo, double hi);
    double normal();                   ///< N(0, 1), Box-Muller
    double normal(double mean, double sd);
    /// Draws an index with probability proportional to exp(logits[k]).
    int categorical_logits(const Vector& logits);

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

struct SimDesign {
    DesignKind kind = DesignKind::FiveClass;
    Eigen::Index n_train = 250;
    Eigen::Index n_tune = 250;
    Eigen::Index n_test = 10000;
    std::uint64_t seed = 1;
    BasisSpec basis{1, true};

    /// Standard sizes for the design (n = 250 for five classes,
    /// 200 otherwise, default basis).
    static SimDesign defaults(DesignKind kind, std::uint64_t seed = 1);
};

struct GroundTruth {
    /// Bayes decision coefficients on the working basis, sum-to-zero form.
    CoefModel bayes;
    /// K x d, true where the Bayes coefficient is zero.
    Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> true_zero;
    std::vector<Eigen::Index> relevant_vars; ///< 0-based columns with a nonzero entry
    double bayes_error = 0.0;
    double bayes_error_se = 0.0;

    Eigen::Index zero_count() const;
};

/// Truth on a basis without a Monte-Carlo Bayes error.
GroundTruth ground_truth(DesignKind kind, const BasisSpec& basis);

struct SimData {
    Dataset train;
    Dataset tune;
    Dataset test;
    GroundTruth truth;
};

/// Raw (unexpanded) draws of one split.
Dataset draw_raw(DesignKind kind, Eigen::Index n, Rng& rng, bool stratified);

/**
 * @brief Draws train/tune/test on the design's basis. Each split uses its own
 * substream of `seed`. FiveClass splits must be divisible by 5.
 */
SimData generate(const SimDesign& design);

/// Bayes rule on raw inputs; extra coordinates beyond the informative ones are ignored.
int bayes_predict(DesignKind kind, std::span<const double> x);

struct BayesErrorEstimate {
    double error = 0.0;
    double std_err = 0.0;
};

/// Misclassification rate of the Bayes rule on `n_mc >= 1000` fresh draws.
BayesErrorEstimate estimate_bayes_error(DesignKind kind, Eigen::Index n_mc, std::uint64_t seed);

/// Decision functions f_k on raw inputs (FourClassLinear and NonlinearThreeClass).
Vector design_logits(DesignKind kind, std::span<const double> x);

} // namespace supmsvm

#endif

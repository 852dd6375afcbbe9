#ifndef SUPMSVM_L2BASE_HPP
#define SUPMSVM_L2BASE_HPP

#include "supmsvm/core.hpp"

/**
 * @file l2base.hpp
 * @brief Standard (squared L2 penalty) MSVM fitted by projected subgradient
 * descent, and the adaptive weights derived from its solution.
 */

namespace supmsvm {

struct L2FitConfig {
    long max_iters = 20000;
    /// Step size at iteration t is step0 / sqrt(t), divided per column by the
    /// mean square of that feature.
    double step0 = 1.0;
    /// Stop when the best objective improves by less than this (relative)
    /// over `patience` consecutive windows of `window` iterations.
    double tol = 1e-6;
    long window = 100;
    long patience = 5;
    /// When positive, coefficients of magnitude at or below this are set to
    /// exactly zero in the returned model (the residual is folded back to keep
    /// sum-to-zero). Off by default.
    double zero_tol = 0.0;
};

struct L2Fit {
    CoefModel model;
    double objective = 0.0;
    long iterations = 0;
    bool converged = false;
};

/// `hinge + lambda * sum w_kj^2`.
double l2_objective(const CoefModel& model, const Dataset& data, double lambda);

/// Removes the class mean from b and from every column of W.
CoefModel project_sum_to_zero(const CoefModel& model);

/**
 * @brief Minimises the L2 MSVM objective over the sum-to-zero subspace.
 *
 * Each iteration takes a subgradient step on the hinge term, applies the
 * quadratic penalty implicitly (`w / (1 + 2 lambda step)`), and projects onto
 * sum-to-zero. The best of the iterates and of their running average is
 * returned; running out of iterations only clears `converged`.
 */
L2Fit fit_l2(const Dataset& data, double lambda, const L2FitConfig& config = {});

/// Gradient of `lambda * sum w^2` with respect to W (the smooth part).
Matrix l2_penalty_gradient(const Matrix& w, double lambda);

enum class WeightMode { PerCoefficient, PerVariable };

/// Default magnitude at or below which an L2 coefficient counts as zero.
inline constexpr double kWeightZeroTolerance = 1e-4;

struct AdaptiveWeights {
    WeightMode mode = WeightMode::PerCoefficient;
    Matrix per_coefficient; ///< K x d, set for PerCoefficient
    Vector per_variable;    ///< d, set for PerVariable
};

/**
 * @brief `tau_kj = 1/|w_kj|` or `tau_j = 1/max_k |w_kj|`, with +inf wherever
 * the magnitude is at or below `eps_zero`.
 */
AdaptiveWeights adaptive_weights(const CoefModel& w_tilde, WeightMode mode, double eps_zero = kWeightZeroTolerance);

/// `w_tilde` divided by its largest coefficient magnitude (unchanged when zero).
CoefModel normalize_scale(const CoefModel& w_tilde);

/**
 * @brief PenaltySpec for an adaptive kind built from an L2 solution.
 *
 * Weights are taken from `normalize_scale(w_tilde)`, so `eps_zero` is relative
 * to the largest coefficient and the lambda grid does not depend on the scale
 * at which the L2 solution was tuned.
 */
PenaltySpec adaptive_penalty(PenaltyKind kind, const CoefModel& w_tilde, double eps_zero = kWeightZeroTolerance);

} // namespace supmsvm

#endif

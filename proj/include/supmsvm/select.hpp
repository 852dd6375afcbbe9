#ifndef SUPMSVM_SELECT_HPP
#define SUPMSVM_SELECT_HPP

#include "supmsvm/core.hpp"
#include "supmsvm/l2base.hpp"

#include <optional>
#include <string>
#include <vector>

/**
 * @file select.hpp
 * @brief Choosing lambda on a tuning set or by leave-one-out cross
 * validation, and the two-stage adaptive fitting pipeline.
 */

namespace supmsvm {

struct LambdaGrid {
    std::vector<int> log2_values;

    /// log2(lambda) = -14, ..., 15.
    static LambdaGrid standard();
    static LambdaGrid range(int lo, int hi);
    static LambdaGrid single(int log2_value);

    std::vector<double> lambdas() const;
    void validate() const;
};

struct SelectOptions {
    L2FitConfig l2;
    long lp_iteration_limit = 0;
    /// Workers for per-lambda and per-fold fits; 0 = one per hardware thread.
    int threads = 1;
    double eps_zero = kWeightZeroTolerance;
};

/// One fit at a fixed lambda: subgradient solver for L2, simplex otherwise.
CoefModel fit_penalized(const Dataset& data, double lambda, const PenaltySpec& spec, const SelectOptions& options = {});

struct LambdaError {
    double lambda = 0.0;
    double error = 0.0;
    bool failed = false;
    std::string message;
};

struct TuneResult {
    double chosen_lambda = 0.0;
    std::vector<LambdaError> per_lambda;
    CoefModel final_model;
    PenaltySpec spec;
    /// Number of model fits performed, including any final refit.
    long fits = 0;
};

/// Minimum error wins; among equal errors the largest lambda. Throws when
/// every entry failed.
std::size_t choose_lambda(const std::vector<LambdaError>& table);

/**
 * @brief Fits on `train` at every grid value and keeps the model with the
 * lowest misclassification rate on `tune`. No refit.
 */
TuneResult tune_on_holdout(const Dataset& train, const Dataset& tune, const PenaltySpec& spec, const LambdaGrid& grid,
                           const SelectOptions& options = {});

/**
 * @brief Leave-one-out error at every grid value, then a refit on all rows at
 * the chosen lambda.
 */
TuneResult tune_loocv(const Dataset& train, const PenaltySpec& spec, const LambdaGrid& grid,
                      const SelectOptions& options = {});

/// Holdout tuning when `tune` is set, LOOCV otherwise.
TuneResult tune(const Dataset& train, const std::optional<Dataset>& tune, const PenaltySpec& spec,
                const LambdaGrid& grid, const SelectOptions& options = {});

struct AdaptiveResult {
    TuneResult l2_stage;
    PenaltySpec weights;
    TuneResult adaptive_stage;
};

/**
 * @brief Stage 3 only: tunes the adaptive fit with weights derived from a
 * given (already tuned) L2 model.
 */
TuneResult tune_adaptive_from_l2(const Dataset& train, const std::optional<Dataset>& tune, PenaltyKind kind,
                                 const CoefModel& l2_model, const LambdaGrid& grid,
                                 const SelectOptions& options = {});

/**
 * @brief Tunes the L2 MSVM, derives adaptive weights from it, then tunes the
 * adaptive fit with those weights held fixed.
 */
AdaptiveResult fit_adaptive_pipeline(const Dataset& train, const std::optional<Dataset>& tune, PenaltyKind kind,
                                     const LambdaGrid& grid, const SelectOptions& options = {});

} // namespace supmsvm

#endif

#ifndef SUPMSVM_LPMODEL_HPP
#define SUPMSVM_LPMODEL_HPP

#include "supmsvm/core.hpp"
#include "supmsvm/simplex.hpp"

#include <optional>
#include <stdexcept>
#include <vector>

/**
 * @file lpmodel.hpp
 * @brief Linear-programming formulations of the L1, sup-norm and adaptive
 * MSVMs, and decoding of LP solutions back into coefficient models.
 *
 * Variables are laid out in blocks: b+, b- (K each), w+, w- (K x d each,
 * class-major), the hinge slacks xi (n x K, row-major by example) and, for the
 * sup-norm family, one column-bound slack eta per variable. Rows are the
 * intercept sum-to-zero row, one sum-to-zero row per variable, one margin row
 * per (example, class) and, for the sup-norm family, one bound row per
 * coefficient.
 */

namespace supmsvm {

/// Coefficients with |w| at or below this are reported as exact zeros.
inline constexpr double kZeroTolerance = 1e-6;

struct MsvmLpLayout {
    int k_classes = 0;
    Eigen::Index d_vars = 0;
    Eigen::Index n_obs = 0;
    bool has_eta = false;

    std::vector<Eigen::Index> b_pos; ///< K
    std::vector<Eigen::Index> b_neg; ///< K
    /// K x d, class-major (`k * d + j`); -1 where the coefficient is pinned to 0.
    std::vector<Eigen::Index> w_pos;
    std::vector<Eigen::Index> w_neg;
    std::vector<Eigen::Index> xi;  ///< n x K, `i * K + k`
    std::vector<Eigen::Index> eta; ///< d, -1 when absent

    Eigen::Index num_columns = 0;
    Eigen::Index num_rows = 0;

    Eigen::Index w_plus(int k, Eigen::Index j) const { return w_pos[static_cast<size_t>(k * d_vars + j)]; }
    Eigen::Index w_minus(int k, Eigen::Index j) const { return w_neg[static_cast<size_t>(k * d_vars + j)]; }
};

struct MsvmLp {
    lp::LinearProgram program;
    MsvmLpLayout layout;
};

/**
 * @brief L1 MSVM (and its adaptive version when `tau` is given).
 *
 * Entries of `tau` equal to +inf remove the coefficient from the program.
 */
MsvmLp build_l1_lp(const Dataset& data, double lambda, const std::optional<Matrix>& tau = std::nullopt);

/**
 * @brief Sup-norm MSVM; `tau_vector` gives the type I adaptive version,
 * `tau_matrix` the type II version (bound rows `tau_kj (w+ + w-) <= eta_j`).
 */
MsvmLp build_supnorm_lp(const Dataset& data, double lambda, const std::optional<Vector>& tau_vector = std::nullopt,
                        const std::optional<Matrix>& tau_matrix = std::nullopt);

/// Dispatches on `spec.kind`; L2 is not an LP and is rejected.
MsvmLp build_lp(const Dataset& data, double lambda, const PenaltySpec& spec);

class LpFailure : public std::runtime_error {
public:
    LpFailure(lp::Status status, const std::string& what) : std::runtime_error(what), status_(status) {}
    lp::Status status() const { return status_; }

private:
    lp::Status status_;
};

/**
 * @brief Inverts `w = w+ - w-`, `b = b+ - b-`.
 *
 * Entries with magnitude at or below `zero_tol` are set to exactly zero and
 * any residual column sum is folded into the largest entry of that column, so
 * the model satisfies sum-to-zero to rounding error. Throws LpFailure unless
 * the solution is optimal.
 */
CoefModel decode(const lp::LpSolution& solution, const MsvmLpLayout& layout, double zero_tol = kZeroTolerance);

struct LpFit {
    CoefModel model;
    lp::LpSolution solution;
    double lambda = 0.0;
};

/// Builds, solves and decodes. Throws LpFailure on a non-optimal status.
LpFit fit_lp(const Dataset& data, double lambda, const PenaltySpec& spec, long iteration_limit = 0);

} // namespace supmsvm

#endif

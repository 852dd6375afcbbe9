#ifndef SUPMSVM_SIMPLEX_HPP
#define SUPMSVM_SIMPLEX_HPP

#include "supmsvm/core.hpp"

#include <iosfwd>
#include <limits>
#include <vector>

/**
 * @file simplex.hpp
 * @brief Dense two-phase revised simplex solver for small and medium LPs.
 *
 * Problems are stated as
 *
 *     minimize c'x  subject to  A_i x {<=, >=, =} r_i,  x_j >= l_j
 *
 * where every lower bound is either 0 or -inf and there are no finite upper
 * bounds. Internally the problem is rewritten in equality form with
 * nonnegative variables; the basis is factorised by eliminating singleton
 * columns (slacks and any column with a single nonzero) and LU-factorising the
 * remaining kernel, with product-form updates between refactorisations.
 * Rows and columns are scaled by powers of two before solving.
 */

namespace supmsvm::lp {

enum class Sense { LE, GE, EQ };

enum class Status { Optimal, Infeasible, Unbounded, IterationLimit };

const char* to_string(Status status);

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Pivot candidates with |entry| at or below this are ignored.
inline constexpr double kPivotTolerance = 1e-9;
/// Primal feasibility tolerance (relative to max(1, |rhs|)).
inline constexpr double kFeasibilityTolerance = 1e-7;
/// Reduced costs above -kOptimalityTolerance * max(1, |c_j|) count as nonnegative.
inline constexpr double kOptimalityTolerance = 1e-9;
/// Basic values at or below this are treated as zero in the ratio test.
inline constexpr double kZeroBasic = 1e-11;
/// Relative size of the rhs perturbation used against degenerate stalling.
inline constexpr double kPerturbation = 1e-9;
/// Pivots between fresh factorisations of the basis.
inline constexpr int kRefactorInterval = 50;

struct LinearProgram {
    Vector costs;        ///< length m
    Matrix a_matrix;     ///< p x m
    std::vector<Sense> senses; ///< length p
    Vector rhs;          ///< length p
    Vector lower;        ///< length m, each 0 or -inf
    Vector upper;        ///< length m, each +inf

    LinearProgram() = default;

    /// Builds an LP with `vars` nonnegative variables and `rows` empty LE rows.
    LinearProgram(Eigen::Index vars, Eigen::Index rows);

    Eigen::Index num_vars() const { return costs.size(); }
    Eigen::Index num_rows() const { return rhs.size(); }

    /// Throws std::invalid_argument on inconsistent sizes, non-finite data or
    /// unsupported bounds.
    void validate() const;
};

struct LpSolution {
    Status status = Status::IterationLimit;
    Vector x;                    ///< original coordinates; valid when Optimal
    double objective = 0.0;
    long iterations = 0;
    double max_primal_residual = 0.0;
    /// Smallest reduced cost over nonbasic columns at termination (diagnostic).
    double min_reduced_cost = 0.0;
};

/**
 * @brief Equality form `A x = r, x >= 0` with a map back to the original LP.
 *
 * Columns are stored compressed (row index, value) since the LPs built by the
 * MSVM layer are mostly zeros even though the public interface is dense.
 */
struct StandardForm {
    struct Entry {
        Eigen::Index row;
        double value;
    };

    Eigen::Index rows = 0;
    std::vector<std::vector<Entry>> columns;
    Vector costs;
    Vector rhs; ///< nonnegative; rows with negative rhs were negated
    std::vector<bool> row_negated;

    /// For each original variable: standard-form column of its positive part
    /// and of its negative part (-1 when the variable is not free).
    std::vector<Eigen::Index> positive_part;
    std::vector<Eigen::Index> negative_part;
    /// Slack (LE) or surplus (GE) column of each original row, -1 for EQ rows.
    std::vector<Eigen::Index> row_slack;

    Eigen::Index num_split_columns() const;
    Eigen::Index num_slack_columns() const;

    /// Maps a standard-form point back to the original variables.
    Vector to_original(const Vector& xs) const;
};

StandardForm standardize(const LinearProgram& lp);

/**
 * @brief Two-phase revised simplex.
 *
 * Dantzig pricing, switching to Bland's rule after 3(p + m) consecutive
 * degenerate pivots until the next nondegenerate pivot. Deterministic: equal
 * inputs give equal pivots.
 *
 * @param iteration_limit Total pivots across both phases; 0 picks a default
 * proportional to the problem size.
 */
LpSolution solve(const LinearProgram& lp, long iteration_limit = 0);

/// Largest constraint violation of `x`, each scaled by max(1, |rhs_i|),
/// including bound violations.
double primal_residual(const LinearProgram& lp, const Vector& x);

/**
 * @brief Writes the LP in the fixed plain-text layout described in
 * docs/lp_dump_format.md.
 */
void write_dump(std::ostream& out, const LinearProgram& lp);
LinearProgram read_dump(std::istream& in);

} // namespace supmsvm::lp

#endif

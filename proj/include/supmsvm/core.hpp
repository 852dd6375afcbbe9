#ifndef SUPMSVM_CORE_HPP
#define SUPMSVM_CORE_HPP

#include <Eigen/Dense>

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

/**
 * @file core.hpp
 * @brief Domain types shared by every part of the library: datasets, fitted
 * coefficient models, penalty descriptions and polynomial basis expansion.
 */

namespace supmsvm {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/**
 * @brief Raised when two objects disagree on a dimension.
 *
 * The message names the offending axis ("feature", "class" or "row").
 */
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/**
 * @brief Labelled training/tuning/testing data.
 *
 * Labels are 1-based class indices in `1..k_classes`. Instances are validated
 * on construction and immutable afterwards.
 */
class Dataset {
public:
    /**
     * @param features n x d matrix of finite values.
     * @param labels Length-n vector of labels in `1..k_classes`.
     * @param k_classes Number of classes, at least 2.
     * @param names Optional variable names; defaults to `x1..xd`.
     */
    Dataset(Matrix features, std::vector<int> labels, int k_classes,
            std::vector<std::string> names = {});

    const Matrix& features() const { return features_; }
    const std::vector<int>& labels() const { return labels_; }
    int k_classes() const { return k_classes_; }
    const std::vector<std::string>& names() const { return names_; }

    Eigen::Index n() const { return features_.rows(); }
    Eigen::Index d() const { return features_.cols(); }

    /// Subset of rows, in the given order.
    Dataset rows(std::span<const Eigen::Index> index) const;

    /// Subset of columns, in the given order; names follow the columns.
    Dataset columns(std::span<const Eigen::Index> index) const;

    /// Number of examples of each class (index 0 is class 1).
    std::vector<Eigen::Index> class_counts() const;

private:
    Matrix features_;
    std::vector<int> labels_;
    int k_classes_;
    std::vector<std::string> names_;
};

std::vector<std::string> default_names(Eigen::Index d);

/**
 * @brief Linear multicategory decision functions `f_k(x) = b_k + w_k . x`.
 *
 * `w` is K x d with one row per class; `b` has length K.
 */
struct CoefModel {
    Matrix w;
    Vector b;

    CoefModel() = default;
    CoefModel(Matrix w_, Vector b_);

    static CoefModel zero(int k_classes, Eigen::Index d_vars);

    int k_classes() const { return static_cast<int>(w.rows()); }
    Eigen::Index d_vars() const { return w.cols(); }

    /// Decision values `f_1(x)..f_K(x)`.
    Vector decision(std::span<const double> x) const;
};

enum class PenaltyKind { L2, L1, SupNorm, AdaptiveL1, AdaptiveSupI, AdaptiveSupII };

const char* to_string(PenaltyKind kind);
PenaltyKind penalty_kind_from_string(const std::string& name);
bool is_adaptive(PenaltyKind kind);
bool is_supnorm_family(PenaltyKind kind);

/**
 * @brief Which regulariser to use, together with its adaptive weights.
 *
 * Weights are positive; `+inf` marks a coefficient (or a whole variable)
 * that is forced to zero.
 */
struct PenaltySpec {
    PenaltyKind kind = PenaltyKind::SupNorm;
    std::optional<Matrix> tau_matrix; ///< K x d, for AdaptiveL1 and AdaptiveSupII
    std::optional<Vector> tau_vector; ///< length d, for AdaptiveSupI

    static PenaltySpec plain(PenaltyKind kind);
    static PenaltySpec adaptive_l1(Matrix tau);
    static PenaltySpec adaptive_sup_i(Vector tau);
    static PenaltySpec adaptive_sup_ii(Matrix tau);

    /// Throws std::invalid_argument unless exactly the weights required by
    /// `kind` are present and all of them are positive.
    void validate() const;
    /// Also checks the weight shapes against a K x d model.
    void validate(int k_classes, Eigen::Index d_vars) const;
};

struct BasisSpec {
    int degree = 1;
    bool include_cross = true;
};

/// Data-fit term `(1/n) sum_i sum_{k != y_i} [f_k(x_i) + 1]_+`.
double hinge_objective_loss(const CoefModel& model, const Dataset& data);

/// Argmax class in `1..K`; ties go to the smallest class index.
int predict(const CoefModel& model, std::span<const double> x);

std::vector<int> predict_all(const CoefModel& model, const Matrix& features);

/// Fraction of rows whose predicted label differs from the given label.
double misclassification_rate(const CoefModel& model, const Dataset& data);

/// `max_k |col_k|`.
double sup_norm(std::span<const double> col);
double sup_norm(const Eigen::Ref<const Vector>& col);

/**
 * @brief Penalty sum without the lambda factor.
 *
 * Intercepts are never penalised. For AdaptiveSupII the per-column term is
 * `max_k tau_kj |w_kj|`. A nonzero coefficient sitting at an infinite weight
 * violates the contract and raises std::domain_error.
 */
double penalty_value(const PenaltySpec& spec, const CoefModel& model);

/// True iff `|sum_k b_k| <= tol` and every column sum of W is within `tol`.
bool check_sum_to_zero(const CoefModel& model, double tol = 1e-8);

/// Number of monomials of total degree 1..degree in d variables.
Eigen::Index basis_size(Eigen::Index d, const BasisSpec& spec);

/**
 * @brief Exponent tuples of the expansion, graded lexicographic order.
 *
 * Each monomial is stored as its sorted list of variable indices, so
 * `{0, 0, 1}` is `x1^2*x2`.
 */
std::vector<std::vector<Eigen::Index>> basis_monomials(Eigen::Index d, const BasisSpec& spec);

std::vector<std::string> basis_names(const std::vector<std::string>& names, const BasisSpec& spec);

Matrix expand_features(const Matrix& x, const BasisSpec& spec);

/// Polynomial expansion of the features; labels are carried over unchanged.
Dataset expand_basis(const Dataset& data, const BasisSpec& spec);

} // namespace supmsvm

#endif

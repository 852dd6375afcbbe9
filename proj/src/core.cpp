#include "supmsvm/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace supmsvm {

namespace {

void require_dims(const CoefModel& model, const Dataset& data) {
    if (model.d_vars() != data.d()) {
        std::ostringstream msg;
        msg << "feature axis mismatch: model has " << model.d_vars() << " variables, data has " << data.d();
        throw DimensionError(msg.str());
    }
    if (model.k_classes() != data.k_classes()) {
        std::ostringstream msg;
        msg << "class axis mismatch: model has " << model.k_classes() << " classes, data has "
            << data.k_classes();
        throw DimensionError(msg.str());
    }
}

} // namespace

std::vector<std::string> default_names(Eigen::Index d) {
    std::vector<std::string> out;
    out.reserve(static_cast<size_t>(d));
    for (Eigen::Index j = 0; j < d; ++j) {
        out.push_back("x" + std::to_string(j + 1));
    }
    return out;
}

Dataset::Dataset(Matrix features, std::vector<int> labels, int k_classes, std::vector<std::string> names)
    : features_(std::move(features)), labels_(std::move(labels)), k_classes_(k_classes), names_(std::move(names)) {
    if (k_classes_ < 2) {
        throw std::invalid_argument("dataset needs at least 2 classes");
    }
    if (features_.rows() < 1 || features_.cols() < 1) {
        throw std::invalid_argument("dataset needs n >= 1 rows and d >= 1 columns");
    }
    if (static_cast<Eigen::Index>(labels_.size()) != features_.rows()) {
        throw DimensionError("row axis mismatch: " + std::to_string(labels_.size()) + " labels for " +
                             std::to_string(features_.rows()) + " feature rows");
    }
    for (size_t i = 0; i < labels_.size(); ++i) {
        if (labels_[i] < 1 || labels_[i] > k_classes_) {
            throw std::invalid_argument("label " + std::to_string(labels_[i]) + " at row " + std::to_string(i + 1) +
                                        " outside 1.." + std::to_string(k_classes_));
        }
    }
    if (!features_.allFinite()) {
        throw std::invalid_argument("features contain non-finite values");
    }
    if (names_.empty()) {
        names_ = default_names(features_.cols());
    } else if (static_cast<Eigen::Index>(names_.size()) != features_.cols()) {
        throw DimensionError("feature axis mismatch: " + std::to_string(names_.size()) + " names for " +
                             std::to_string(features_.cols()) + " columns");
    }
}

Dataset Dataset::rows(std::span<const Eigen::Index> index) const {
    Matrix x(static_cast<Eigen::Index>(index.size()), d());
    std::vector<int> y;
    y.reserve(index.size());
    for (size_t i = 0; i < index.size(); ++i) {
        x.row(static_cast<Eigen::Index>(i)) = features_.row(index[i]);
        y.push_back(labels_[static_cast<size_t>(index[i])]);
    }
    return Dataset(std::move(x), std::move(y), k_classes_, names_);
}

Dataset Dataset::columns(std::span<const Eigen::Index> index) const {
    Matrix x(n(), static_cast<Eigen::Index>(index.size()));
    std::vector<std::string> nm;
    nm.reserve(index.size());
    for (size_t j = 0; j < index.size(); ++j) {
        x.col(static_cast<Eigen::Index>(j)) = features_.col(index[j]);
        nm.push_back(names_[static_cast<size_t>(index[j])]);
    }
    return Dataset(std::move(x), labels_, k_classes_, std::move(nm));
}

std::vector<Eigen::Index> Dataset::class_counts() const {
    std::vector<Eigen::Index> counts(static_cast<size_t>(k_classes_), 0);
    for (int y : labels_) {
        ++counts[static_cast<size_t>(y - 1)];
    }
    return counts;
}

CoefModel::CoefModel(Matrix w_, Vector b_) : w(std::move(w_)), b(std::move(b_)) {
    if (w.rows() != b.size()) {
        throw DimensionError("class axis mismatch: W has " + std::to_string(w.rows()) + " rows, b has " +
                             std::to_string(b.size()) + " entries");
    }
}

CoefModel CoefModel::zero(int k_classes, Eigen::Index d_vars) {
    return CoefModel(Matrix::Zero(k_classes, d_vars), Vector::Zero(k_classes));
}

Vector CoefModel::decision(std::span<const double> x) const {
    if (static_cast<Eigen::Index>(x.size()) != d_vars()) {
        throw DimensionError("feature axis mismatch: model has " + std::to_string(d_vars()) + " variables, x has " +
                             std::to_string(x.size()));
    }
    Eigen::Map<const Vector> xv(x.data(), static_cast<Eigen::Index>(x.size()));
    return b + w * xv;
}

const char* to_string(PenaltyKind kind) {
    switch (kind) {
    case PenaltyKind::L2: return "l2";
    case PenaltyKind::L1: return "l1";
    case PenaltyKind::SupNorm: return "supnorm";
    case PenaltyKind::AdaptiveL1: return "adapt-l1";
    case PenaltyKind::AdaptiveSupI: return "adapt-sup1";
    case PenaltyKind::AdaptiveSupII: return "adapt-sup2";
    }
    return "unknown";
}

PenaltyKind penalty_kind_from_string(const std::string& name) {
    for (auto kind : {PenaltyKind::L2, PenaltyKind::L1, PenaltyKind::SupNorm, PenaltyKind::AdaptiveL1,
                      PenaltyKind::AdaptiveSupI, PenaltyKind::AdaptiveSupII}) {
        if (name == to_string(kind)) {
            return kind;
        }
    }
    throw std::invalid_argument("unknown penalty '" + name + "'");
}

bool is_adaptive(PenaltyKind kind) {
    return kind == PenaltyKind::AdaptiveL1 || kind == PenaltyKind::AdaptiveSupI || kind == PenaltyKind::AdaptiveSupII;
}

bool is_supnorm_family(PenaltyKind kind) {
    return kind == PenaltyKind::SupNorm || kind == PenaltyKind::AdaptiveSupI || kind == PenaltyKind::AdaptiveSupII;
}

PenaltySpec PenaltySpec::plain(PenaltyKind kind) {
    if (is_adaptive(kind)) {
        throw std::invalid_argument(std::string("penalty ") + to_string(kind) + " needs adaptive weights");
    }
    PenaltySpec out;
    out.kind = kind;
    return out;
}

PenaltySpec PenaltySpec::adaptive_l1(Matrix tau) {
    PenaltySpec out;
    out.kind = PenaltyKind::AdaptiveL1;
    out.tau_matrix = std::move(tau);
    out.validate();
    return out;
}

PenaltySpec PenaltySpec::adaptive_sup_i(Vector tau) {
    PenaltySpec out;
    out.kind = PenaltyKind::AdaptiveSupI;
    out.tau_vector = std::move(tau);
    out.validate();
    return out;
}

PenaltySpec PenaltySpec::adaptive_sup_ii(Matrix tau) {
    PenaltySpec out;
    out.kind = PenaltyKind::AdaptiveSupII;
    out.tau_matrix = std::move(tau);
    out.validate();
    return out;
}

namespace {

template <typename Derived>
void require_positive_weights(const Eigen::DenseBase<Derived>& tau) {
    for (Eigen::Index i = 0; i < tau.size(); ++i) {
        const double v = tau.derived().data()[i];
        if (std::isnan(v) || !(v > 0.0)) {
            throw std::invalid_argument("adaptive weights must be > 0 (infinity allowed)");
        }
    }
}

} // namespace

void PenaltySpec::validate() const {
    const bool wants_matrix = kind == PenaltyKind::AdaptiveL1 || kind == PenaltyKind::AdaptiveSupII;
    const bool wants_vector = kind == PenaltyKind::AdaptiveSupI;
    if (wants_matrix != tau_matrix.has_value() || wants_vector != tau_vector.has_value()) {
        throw std::invalid_argument(std::string("penalty ") + to_string(kind) +
                                    " carries the wrong adaptive weight data");
    }
    if (tau_matrix) {
        require_positive_weights(*tau_matrix);
    }
    if (tau_vector) {
        require_positive_weights(*tau_vector);
    }
}

void PenaltySpec::validate(int k_classes, Eigen::Index d_vars) const {
    validate();
    if (tau_matrix && (tau_matrix->rows() != k_classes || tau_matrix->cols() != d_vars)) {
        throw DimensionError("adaptive weight matrix must be " + std::to_string(k_classes) + " x " +
                             std::to_string(d_vars));
    }
    if (tau_vector && tau_vector->size() != d_vars) {
        throw DimensionError("feature axis mismatch: adaptive weight vector must have length " +
                             std::to_string(d_vars));
    }
}

double hinge_objective_loss(const CoefModel& model, const Dataset& data) {
    require_dims(model, data);
    const Matrix scores = (data.features() * model.w.transpose()).rowwise() + model.b.transpose();
    double total = 0.0;
    for (Eigen::Index i = 0; i < data.n(); ++i) {
        const int yi = data.labels()[static_cast<size_t>(i)] - 1;
        for (Eigen::Index k = 0; k < scores.cols(); ++k) {
            if (k != yi) {
                total += std::max(0.0, scores(i, k) + 1.0);
            }
        }
    }
    return total / static_cast<double>(data.n());
}

int predict(const CoefModel& model, std::span<const double> x) {
    const Vector f = model.decision(x);
    Eigen::Index best = 0;
    for (Eigen::Index k = 1; k < f.size(); ++k) {
        if (f[k] > f[best]) {
            best = k;
        }
    }
    return static_cast<int>(best) + 1;
}

std::vector<int> predict_all(const CoefModel& model, const Matrix& features) {
    if (features.cols() != model.d_vars()) {
        throw DimensionError("feature axis mismatch: model has " + std::to_string(model.d_vars()) +
                             " variables, data has " + std::to_string(features.cols()));
    }
    const Matrix scores = (features * model.w.transpose()).rowwise() + model.b.transpose();
    std::vector<int> out(static_cast<size_t>(features.rows()));
    for (Eigen::Index i = 0; i < scores.rows(); ++i) {
        Eigen::Index best = 0;
        for (Eigen::Index k = 1; k < scores.cols(); ++k) {
            if (scores(i, k) > scores(i, best)) {
                best = k;
            }
        }
        out[static_cast<size_t>(i)] = static_cast<int>(best) + 1;
    }
    return out;
}

double misclassification_rate(const CoefModel& model, const Dataset& data) {
    require_dims(model, data);
    const auto pred = predict_all(model, data.features());
    Eigen::Index wrong = 0;
    for (size_t i = 0; i < pred.size(); ++i) {
        wrong += pred[i] != data.labels()[i];
    }
    return static_cast<double>(wrong) / static_cast<double>(data.n());
}

double sup_norm(std::span<const double> col) {
    double out = 0.0;
    for (double v : col) {
        out = std::max(out, std::abs(v));
    }
    return out;
}

double sup_norm(const Eigen::Ref<const Vector>& col) {
    return col.size() == 0 ? 0.0 : col.cwiseAbs().maxCoeff();
}

double penalty_value(const PenaltySpec& spec, const CoefModel& model) {
    spec.validate(model.k_classes(), model.d_vars());
    const Matrix& w = model.w;

    // tau * |w| with the convention inf * 0 = 0; inf * nonzero is a contract breach.
    auto weighted = [](double tau, double coef) {
        if (std::isinf(tau)) {
            if (coef != 0.0) {
                throw std::domain_error("nonzero coefficient at an infinite adaptive weight");
            }
            return 0.0;
        }
        return tau * std::abs(coef);
    };

    double total = 0.0;
    switch (spec.kind) {
    case PenaltyKind::L2:
        total = w.squaredNorm();
        break;
    case PenaltyKind::L1:
        total = w.cwiseAbs().sum();
        break;
    case PenaltyKind::SupNorm:
        for (Eigen::Index j = 0; j < w.cols(); ++j) {
            total += sup_norm(Vector(w.col(j)));
        }
        break;
    case PenaltyKind::AdaptiveL1:
        for (Eigen::Index j = 0; j < w.cols(); ++j) {
            for (Eigen::Index k = 0; k < w.rows(); ++k) {
                total += weighted((*spec.tau_matrix)(k, j), w(k, j));
            }
        }
        break;
    case PenaltyKind::AdaptiveSupI:
        for (Eigen::Index j = 0; j < w.cols(); ++j) {
            total += weighted((*spec.tau_vector)[j], sup_norm(Vector(w.col(j))));
        }
        break;
    case PenaltyKind::AdaptiveSupII:
        for (Eigen::Index j = 0; j < w.cols(); ++j) {
            double col_max = 0.0;
            for (Eigen::Index k = 0; k < w.rows(); ++k) {
                col_max = std::max(col_max, weighted((*spec.tau_matrix)(k, j), w(k, j)));
            }
            total += col_max;
        }
        break;
    }
    return total;
}

bool check_sum_to_zero(const CoefModel& model, double tol) {
    if (!(tol > 0.0)) {
        throw std::invalid_argument("sum-to-zero tolerance must be positive");
    }
    if (std::abs(model.b.sum()) > tol) {
        return false;
    }
    for (Eigen::Index j = 0; j < model.w.cols(); ++j) {
        if (std::abs(model.w.col(j).sum()) > tol) {
            return false;
        }
    }
    return true;
}

namespace {

void require_degree(const BasisSpec& spec) {
    if (spec.degree < 1 || spec.degree > 3) {
        throw std::invalid_argument("unsupported basis degree " + std::to_string(spec.degree) + " (expected 1, 2 or 3)");
    }
}

void extend(std::vector<std::vector<Eigen::Index>>& out, std::vector<Eigen::Index>& prefix, Eigen::Index start,
            Eigen::Index d, int remaining) {
    if (remaining == 0) {
        out.push_back(prefix);
        return;
    }
    for (Eigen::Index j = start; j < d; ++j) {
        prefix.push_back(j);
        extend(out, prefix, j, d, remaining - 1);
        prefix.pop_back();
    }
}

} // namespace

std::vector<std::vector<Eigen::Index>> basis_monomials(Eigen::Index d, const BasisSpec& spec) {
    require_degree(spec);
    std::vector<std::vector<Eigen::Index>> out;
    for (int deg = 1; deg <= spec.degree; ++deg) {
        if (spec.include_cross) {
            std::vector<Eigen::Index> prefix;
            extend(out, prefix, 0, d, deg);
        } else {
            for (Eigen::Index j = 0; j < d; ++j) {
                out.emplace_back(static_cast<size_t>(deg), j);
            }
        }
    }
    return out;
}

Eigen::Index basis_size(Eigen::Index d, const BasisSpec& spec) {
    require_degree(spec);
    if (!spec.include_cross) {
        return d * spec.degree;
    }
    // C(d + degree, degree) - 1
    Eigen::Index c = 1;
    for (int i = 1; i <= spec.degree; ++i) {
        c = c * (d + i) / i;
    }
    return c - 1;
}

std::vector<std::string> basis_names(const std::vector<std::string>& names, const BasisSpec& spec) {
    const auto monos = basis_monomials(static_cast<Eigen::Index>(names.size()), spec);
    std::vector<std::string> out;
    out.reserve(monos.size());
    for (const auto& mono : monos) {
        std::string label;
        size_t i = 0;
        while (i < mono.size()) {
            size_t run = 1;
            while (i + run < mono.size() && mono[i + run] == mono[i]) {
                ++run;
            }
            if (!label.empty()) {
                label += '*';
            }
            label += names[static_cast<size_t>(mono[i])];
            if (run > 1) {
                label += '^' + std::to_string(run);
            }
            i += run;
        }
        out.push_back(std::move(label));
    }
    return out;
}

Matrix expand_features(const Matrix& x, const BasisSpec& spec) {
    const auto monos = basis_monomials(x.cols(), spec);
    Matrix out(x.rows(), static_cast<Eigen::Index>(monos.size()));
    for (size_t c = 0; c < monos.size(); ++c) {
        auto col = out.col(static_cast<Eigen::Index>(c));
        col.setOnes();
        for (Eigen::Index j : monos[c]) {
            col.array() *= x.col(j).array();
        }
    }
    return out;
}

Dataset expand_basis(const Dataset& data, const BasisSpec& spec) {
    return Dataset(expand_features(data.features(), spec), data.labels(), data.k_classes(),
                   basis_names(data.names(), spec));
}

} // namespace supmsvm

#include "supmsvm/l2base.hpp"

#include <cmath>
#include <limits>

namespace supmsvm {

double l2_objective(const CoefModel& model, const Dataset& data, double lambda) {
    return hinge_objective_loss(model, data) + lambda * model.w.squaredNorm();
}

CoefModel project_sum_to_zero(const CoefModel& model) {
    CoefModel out = model;
    out.b.array() -= out.b.mean();
    out.w.rowwise() -= out.w.colwise().mean();
    return out;
}

namespace {

constexpr double kMinMetric = 1e-8;

void snap_column(Eigen::Ref<Vector> v, double tol) {
    for (Eigen::Index k = 0; k < v.size(); ++k) {
        if (std::abs(v[k]) <= tol) {
            v[k] = 0.0;
        }
    }
    const double residual = v.sum();
    if (residual != 0.0) {
        Eigen::Index idx = 0;
        v.cwiseAbs().maxCoeff(&idx);
        v[idx] -= residual;
    }
}

} // namespace

Matrix l2_penalty_gradient(const Matrix& w, double lambda) {
    return 2.0 * lambda * w;
}

L2Fit fit_l2(const Dataset& data, double lambda, const L2FitConfig& config) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        throw std::invalid_argument("lambda must be a positive finite number");
    }
    if (config.max_iters < 1 || !(config.step0 > 0.0) || !(config.tol > 0.0) || config.window < 1 || config.patience < 1 ||
        config.zero_tol < 0.0) {
        throw std::invalid_argument("L2 fit configuration values must be positive");
    }
    const int K = data.k_classes();
    const Eigen::Index d = data.d();
    const Eigen::Index n = data.n();
    const Matrix& x = data.features();
    const double inv_n = 1.0 / static_cast<double>(n);

    // target[i, k] = 1 when k is the label of example i
    Matrix target = Matrix::Zero(n, K);
    for (Eigen::Index i = 0; i < n; ++i) {
        target(i, data.labels()[static_cast<size_t>(i)] - 1) = 1.0;
    }

    CoefModel current = CoefModel::zero(K, d);
    CoefModel average = current;
    L2Fit best;
    best.model = current;
    best.objective = static_cast<double>(K - 1);

    // per-column metric: mean square of each feature, intercept has 1
    Vector metric = x.colwise().squaredNorm().transpose() * inv_n;
    metric = metric.cwiseMax(kMinMetric);
    const Eigen::RowVectorXd inv_metric = metric.cwiseInverse().transpose();

    Matrix active(n, K);
    double window_start = best.objective;
    long stale = 0;
    for (long t = 1; t <= config.max_iters; ++t) {
        const Matrix scores = (x * current.w.transpose()).rowwise() + current.b.transpose();
        double hinge = 0.0;
        for (Eigen::Index k = 0; k < K; ++k) {
            for (Eigen::Index i = 0; i < n; ++i) {
                const double m = scores(i, k) + 1.0;
                const bool on = target(i, k) == 0.0 && m > 0.0;
                active(i, k) = on ? 1.0 : 0.0;
                hinge += on ? m : 0.0;
            }
        }
        const double objective = hinge * inv_n + lambda * current.w.squaredNorm();
        if (objective < best.objective) {
            best.objective = objective;
            best.model = current;
        }

        const double step = config.step0 / std::sqrt(static_cast<double>(t));
        const Matrix grad_w = (active.transpose() * x) * inv_n;
        const Vector grad_b = active.colwise().sum().transpose() * inv_n;
        const Eigen::RowVectorXd col_step = step * inv_metric;
        const Eigen::RowVectorXd shrink = (1.0 + 2.0 * lambda * col_step.array()).inverse().matrix();
        current.w = ((current.w - grad_w * col_step.asDiagonal()).array().rowwise() * shrink.array()).matrix();
        current.b = current.b - step * grad_b;
        current = project_sum_to_zero(current);

        const double weight = 1.0 / static_cast<double>(t);
        average.w += weight * (current.w - average.w);
        average.b += weight * (current.b - average.b);

        if (t % config.window == 0) {
            const double avg_objective = l2_objective(average, data, lambda);
            if (avg_objective < best.objective) {
                best.objective = avg_objective;
                best.model = average;
            }
            best.iterations = t;
            const double change = window_start - best.objective;
            stale = change <= config.tol * std::max(std::abs(best.objective), 1e-12) ? stale + 1 : 0;
            if (stale >= config.patience) {
                best.converged = true;
                break;
            }
            window_start = best.objective;
        }
        best.iterations = t;
    }
    best.model = project_sum_to_zero(best.model);
    if (config.zero_tol > 0.0) {
        for (Eigen::Index j = 0; j < d; ++j) {
            snap_column(best.model.w.col(j), config.zero_tol);
        }
        best.objective = l2_objective(best.model, data, lambda);
    }
    return best;
}

AdaptiveWeights adaptive_weights(const CoefModel& w_tilde, WeightMode mode, double eps_zero) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    AdaptiveWeights out;
    out.mode = mode;
    const Matrix& w = w_tilde.w;
    if (mode == WeightMode::PerCoefficient) {
        out.per_coefficient = w.unaryExpr([&](double v) { return std::abs(v) <= eps_zero ? inf : 1.0 / std::abs(v); });
    } else {
        out.per_variable.resize(w.cols());
        for (Eigen::Index j = 0; j < w.cols(); ++j) {
            const double s = sup_norm(Vector(w.col(j)));
            out.per_variable[j] = s <= eps_zero ? inf : 1.0 / s;
        }
    }
    return out;
}

CoefModel normalize_scale(const CoefModel& w_tilde) {
    CoefModel out = w_tilde;
    const double scale = w_tilde.w.size() == 0 ? 0.0 : w_tilde.w.cwiseAbs().maxCoeff();
    if (scale > 0.0) {
        out.w /= scale;
        out.b /= scale;
    }
    return out;
}

PenaltySpec adaptive_penalty(PenaltyKind kind, const CoefModel& w_tilde_raw, double eps_zero) {
    const CoefModel w_tilde = normalize_scale(w_tilde_raw);
    switch (kind) {
    case PenaltyKind::AdaptiveL1:
        return PenaltySpec::adaptive_l1(adaptive_weights(w_tilde, WeightMode::PerCoefficient, eps_zero).per_coefficient);
    case PenaltyKind::AdaptiveSupI:
        return PenaltySpec::adaptive_sup_i(adaptive_weights(w_tilde, WeightMode::PerVariable, eps_zero).per_variable);
    case PenaltyKind::AdaptiveSupII:
        return PenaltySpec::adaptive_sup_ii(
            adaptive_weights(w_tilde, WeightMode::PerCoefficient, eps_zero).per_coefficient);
    default:
        break;
    }
    throw std::invalid_argument(std::string("penalty ") + to_string(kind) + " is not adaptive");
}

} // namespace supmsvm

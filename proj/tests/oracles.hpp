#ifndef SUPMSVM_TESTS_ORACLES_HPP
#define SUPMSVM_TESTS_ORACLES_HPP

// Independent reference computations used by the unit and acceptance tests.
// Nothing here calls into the library except for plain data types.

#include "supmsvm/core.hpp"
#include "supmsvm/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

using supmsvm::Matrix;
using supmsvm::Vector;

inline double hinge(const Matrix& w, const Vector& b, const Matrix& x, const std::vector<int>& y) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        for (Eigen::Index k = 0; k < w.rows(); ++k) {
            if (k + 1 == y[static_cast<size_t>(i)]) {
                continue;
            }
            double f = b[k];
            for (Eigen::Index j = 0; j < x.cols(); ++j) {
                f += w(k, j) * x(i, j);
            }
            total += std::max(0.0, f + 1.0);
        }
    }
    return total / static_cast<double>(x.rows());
}

inline double l1_norm(const Matrix& w) {
    double s = 0.0;
    for (Eigen::Index k = 0; k < w.rows(); ++k) {
        for (Eigen::Index j = 0; j < w.cols(); ++j) {
            s += std::abs(w(k, j));
        }
    }
    return s;
}

inline double sup_norm_sum(const Matrix& w) {
    double s = 0.0;
    for (Eigen::Index j = 0; j < w.cols(); ++j) {
        double m = 0.0;
        for (Eigen::Index k = 0; k < w.rows(); ++k) {
            m = std::max(m, std::abs(w(k, j)));
        }
        s += m;
    }
    return s;
}

struct LpAnswer {
    supmsvm::lp::Status status = supmsvm::lp::Status::Infeasible;
    double objective = 0.0;
};

namespace detail {

// Equality form over nonnegative columns: free variables split, one slack
// per inequality row.
struct Equality {
    Matrix a;
    Vector rhs;
    Vector cost;
};

inline Equality equality_form(const supmsvm::lp::LinearProgram& lp) {
    const Eigen::Index p = lp.num_rows();
    std::vector<Vector> cols;
    std::vector<double> cost;
    for (Eigen::Index j = 0; j < lp.num_vars(); ++j) {
        cols.push_back(lp.a_matrix.col(j));
        cost.push_back(lp.costs[j]);
        if (lp.lower[j] == -std::numeric_limits<double>::infinity()) {
            cols.push_back(-lp.a_matrix.col(j));
            cost.push_back(-lp.costs[j]);
        }
    }
    for (Eigen::Index i = 0; i < p; ++i) {
        const auto s = lp.senses[static_cast<size_t>(i)];
        if (s == supmsvm::lp::Sense::EQ) {
            continue;
        }
        Vector e = Vector::Zero(p);
        e[i] = s == supmsvm::lp::Sense::LE ? 1.0 : -1.0;
        cols.push_back(e);
        cost.push_back(0.0);
    }
    Equality out;
    out.a.resize(p, static_cast<Eigen::Index>(cols.size()));
    for (size_t c = 0; c < cols.size(); ++c) {
        out.a.col(static_cast<Eigen::Index>(c)) = cols[c];
    }
    out.rhs = lp.rhs;
    out.cost = Eigen::Map<Vector>(cost.data(), static_cast<Eigen::Index>(cost.size()));
    return out;
}

// Minimum of cost.x over the basic feasible solutions of {A x = rhs, x >= 0}.
// Returns false when there is none.
inline bool best_vertex(const Matrix& a, const Vector& rhs, const Vector& cost, double& best) {
    const Eigen::Index n = a.cols();
    bool found = false;
    best = std::numeric_limits<double>::infinity();
    // rank of A decides the basis size
    Eigen::FullPivLU<Matrix> full(a);
    const Eigen::Index r = full.rank();
    if (r == 0) {
        if (rhs.norm() > 1e-9) {
            return false;
        }
        best = 0.0;
        return true;
    }
    std::vector<Eigen::Index> keep;
    {
        Matrix acc(0, n);
        for (Eigen::Index i = 0; i < a.rows(); ++i) {
            Matrix trial(acc.rows() + 1, n);
            trial << acc, a.row(i);
            if (Eigen::FullPivLU<Matrix>(trial).rank() > acc.rows()) {
                acc = trial;
                keep.push_back(i);
            }
        }
    }
    Matrix ar(static_cast<Eigen::Index>(keep.size()), n);
    Vector br(static_cast<Eigen::Index>(keep.size()));
    for (size_t i = 0; i < keep.size(); ++i) {
        ar.row(static_cast<Eigen::Index>(i)) = a.row(keep[i]);
        br[static_cast<Eigen::Index>(i)] = rhs[keep[i]];
    }
    std::vector<bool> pick(static_cast<size_t>(n), false);
    std::fill(pick.begin(), pick.begin() + r, true);
    do {
        Matrix basis(r, r);
        std::vector<Eigen::Index> idx;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (pick[static_cast<size_t>(j)]) {
                basis.col(static_cast<Eigen::Index>(idx.size())) = ar.col(j);
                idx.push_back(j);
            }
        }
        Eigen::FullPivLU<Matrix> lu(basis);
        if (lu.rank() < r) {
            continue;
        }
        const Vector xb = lu.solve(br);
        if (xb.minCoeff() < -1e-9) {
            continue;
        }
        Vector x = Vector::Zero(n);
        for (size_t t = 0; t < idx.size(); ++t) {
            x[idx[t]] = xb[static_cast<Eigen::Index>(t)];
        }
        if ((a * x - rhs).cwiseAbs().maxCoeff() > 1e-7) {
            continue;
        }
        found = true;
        best = std::min(best, cost.dot(x));
    } while (std::prev_permutation(pick.begin(), pick.end()));
    return found;
}

} // namespace detail

/// Solves a small LP by enumerating basic feasible solutions. Unboundedness is
/// detected by minimising the cost over normalised recession directions.
inline LpAnswer enumerate(const supmsvm::lp::LinearProgram& lp) {
    const detail::Equality eq = detail::equality_form(lp);
    LpAnswer ans;
    double best = 0.0;
    if (!detail::best_vertex(eq.a, eq.rhs, eq.cost, best)) {
        ans.status = supmsvm::lp::Status::Infeasible;
        return ans;
    }
    Matrix ray(eq.a.rows() + 1, eq.a.cols());
    ray << eq.a, Matrix::Ones(1, eq.a.cols());
    Vector ray_rhs = Vector::Zero(eq.a.rows() + 1);
    ray_rhs[eq.a.rows()] = 1.0;
    double ray_best = 0.0;
    if (detail::best_vertex(ray, ray_rhs, eq.cost, ray_best) && ray_best < -1e-9) {
        ans.status = supmsvm::lp::Status::Unbounded;
        return ans;
    }
    ans.status = supmsvm::lp::Status::Optimal;
    ans.objective = best;
    return ans;
}

/// Five-class mixture: P(error) of the Bayes rule by 2-D quadrature.
inline double five_class_bayes_error() {
    const double sigma = std::sqrt(2.0);
    double mu[5][2];
    for (int k = 0; k < 5; ++k) {
        const double a = (2.0 * (k + 1) - 1.0) * std::numbers::pi / 5.0;
        mu[k][0] = 2.0 * std::cos(a);
        mu[k][1] = 2.0 * std::sin(a);
    }
    const double lim = 9.0;
    const int steps = 900;
    const double h = 2.0 * lim / steps;
    double correct = 0.0;
    for (int a = 0; a < steps; ++a) {
        const double x = -lim + (a + 0.5) * h;
        for (int c = 0; c < steps; ++c) {
            const double y = -lim + (c + 0.5) * h;
            double best = 0.0;
            for (int k = 0; k < 5; ++k) {
                const double dx = x - mu[k][0];
                const double dy = y - mu[k][1];
                const double dens = std::exp(-(dx * dx + dy * dy) / (2 * sigma * sigma)) / (2 * std::numbers::pi * sigma * sigma);
                best = std::max(best, dens / 5.0);
            }
            correct += best * h * h;
        }
    }
    return 1.0 - correct;
}

/// E[1 - max_k p_k(x)] for softmax label laws, midpoint rule over a box with
/// uniform input density.
inline double softmax_bayes_error(const std::vector<std::pair<double, double>>& box, int steps,
                                  const std::function<std::vector<double>(const std::vector<double>&)>& f) {
    const size_t dim = box.size();
    std::vector<int> at(dim, 0);
    std::vector<double> x(dim);
    double total = 0.0;
    long count = 0;
    while (true) {
        for (size_t t = 0; t < dim; ++t) {
            x[t] = box[t].first + (at[t] + 0.5) * (box[t].second - box[t].first) / steps;
        }
        const auto v = f(x);
        const double m = *std::max_element(v.begin(), v.end());
        double z = 0.0;
        for (double e : v) {
            z += std::exp(e - m);
        }
        total += 1.0 - 1.0 / z;
        ++count;
        size_t t = 0;
        while (t < dim && ++at[t] == steps) {
            at[t] = 0;
            ++t;
        }
        if (t == dim) {
            break;
        }
    }
    return total / static_cast<double>(count);
}

inline std::vector<double> four_class_f(const std::vector<double>& x) {
    return {-5 * x[0] + 5 * x[3], 5 * x[0] + 5 * x[1], -5 * x[1] + 5 * x[2], -5 * x[2] - 5 * x[3]};
}

inline std::vector<double> nonlinear_f(const std::vector<double>& x) {
    const double a = x[0];
    const double b = x[1];
    return {-2 * a + 0.2 * a * a - 0.1 * b * b + 0.2, -0.4 * a * a + 0.2 * b * b - 0.4,
            2 * a + 0.2 * a * a - 0.1 * b * b + 0.2};
}

// between / within sum of squares, summed observation by observation
inline double relevance_direct(const std::vector<double>& x, const std::vector<int>& y) {
    const int k = *std::max_element(y.begin(), y.end());
    double overall = 0.0;
    for (double v : x) {
        overall += v;
    }
    overall /= static_cast<double>(x.size());
    std::vector<double> sum(static_cast<size_t>(k), 0.0);
    std::vector<double> cnt(static_cast<size_t>(k), 0.0);
    for (size_t i = 0; i < x.size(); ++i) {
        sum[static_cast<size_t>(y[i] - 1)] += x[i];
        cnt[static_cast<size_t>(y[i] - 1)] += 1.0;
    }
    double between = 0.0;
    double within = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        const double mean_k = sum[static_cast<size_t>(y[i] - 1)] / cnt[static_cast<size_t>(y[i] - 1)];
        between += (mean_k - overall) * (mean_k - overall);
        within += (x[i] - mean_k) * (x[i] - mean_k);
    }
    return between / within;
}

/**
 * Minimises a function of `dim` parameters by a zooming grid search: a grid of
 * `points` per axis around the incumbent, shrinking by half whenever the
 * incumbent does not move.
 */
inline std::vector<double> zoom_minimize(const std::function<double(const std::vector<double>&)>& f,
                                         std::vector<double> start, double radius, int points, int rounds) {
    const size_t dim = start.size();
    double best = f(start);
    for (int r = 0; r < rounds; ++r) {
        std::vector<double> incumbent = start;
        std::vector<int> at(dim, 0);
        std::vector<double> x(dim);
        while (true) {
            for (size_t t = 0; t < dim; ++t) {
                x[t] = start[t] + radius * (2.0 * at[t] / (points - 1) - 1.0);
            }
            const double v = f(x);
            if (v < best) {
                best = v;
                incumbent = x;
            }
            size_t t = 0;
            while (t < dim && ++at[t] == points) {
                at[t] = 0;
                ++t;
            }
            if (t == dim) {
                break;
            }
        }
        if (incumbent == start) {
            radius *= 0.5;
        }
        start = incumbent;
    }
    return start;
}

} // namespace oracle

#endif

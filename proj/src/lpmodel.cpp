#include "supmsvm/lpmodel.hpp"

#include <cmath>

namespace supmsvm {

namespace {

struct Builder {
    const Dataset& data;
    int K;
    Eigen::Index d;
    Eigen::Index n;
    MsvmLpLayout layout;

    explicit Builder(const Dataset& ds) : data(ds), K(ds.k_classes()), d(ds.d()), n(ds.n()) {
        layout.k_classes = K;
        layout.d_vars = d;
        layout.n_obs = n;
    }

    /// `kept(k, j)` says whether w_kj is a free coefficient or pinned to zero.
    template <typename Kept>
    void assign_columns(Kept kept, bool with_eta) {
        Eigen::Index next = 0;
        layout.b_pos.resize(static_cast<size_t>(K));
        layout.b_neg.resize(static_cast<size_t>(K));
        for (int k = 0; k < K; ++k) {
            layout.b_pos[static_cast<size_t>(k)] = next++;
        }
        for (int k = 0; k < K; ++k) {
            layout.b_neg[static_cast<size_t>(k)] = next++;
        }
        layout.w_pos.assign(static_cast<size_t>(K * d), -1);
        layout.w_neg.assign(static_cast<size_t>(K * d), -1);
        for (int k = 0; k < K; ++k) {
            for (Eigen::Index j = 0; j < d; ++j) {
                if (kept(k, j)) {
                    layout.w_pos[static_cast<size_t>(k * d + j)] = next++;
                }
            }
        }
        for (int k = 0; k < K; ++k) {
            for (Eigen::Index j = 0; j < d; ++j) {
                if (kept(k, j)) {
                    layout.w_neg[static_cast<size_t>(k * d + j)] = next++;
                }
            }
        }
        layout.xi.resize(static_cast<size_t>(n * K));
        for (Eigen::Index i = 0; i < n; ++i) {
            for (int k = 0; k < K; ++k) {
                layout.xi[static_cast<size_t>(i * K + k)] = next++;
            }
        }
        layout.has_eta = with_eta;
        layout.eta.assign(static_cast<size_t>(d), -1);
        if (with_eta) {
            for (Eigen::Index j = 0; j < d; ++j) {
                bool any = false;
                for (int k = 0; k < K; ++k) {
                    any = any || kept(k, j);
                }
                if (any) {
                    layout.eta[static_cast<size_t>(j)] = next++;
                }
            }
        }
        layout.num_columns = next;
    }

    bool column_alive(Eigen::Index j) const {
        for (int k = 0; k < K; ++k) {
            if (layout.w_plus(k, j) >= 0) {
                return true;
            }
        }
        return false;
    }

    /// Sum-to-zero and margin rows plus hinge costs; shared by both families.
    lp::LinearProgram base_program(Eigen::Index extra_rows) {
        Eigen::Index live_cols = 0;
        for (Eigen::Index j = 0; j < d; ++j) {
            live_cols += column_alive(j);
        }
        const Eigen::Index rows = 1 + live_cols + n * K + extra_rows;
        lp::LinearProgram prog(layout.num_columns, rows);

        Eigen::Index r = 0;
        for (int k = 0; k < K; ++k) {
            prog.a_matrix(r, layout.b_pos[static_cast<size_t>(k)]) = 1.0;
            prog.a_matrix(r, layout.b_neg[static_cast<size_t>(k)]) = -1.0;
        }
        prog.senses[static_cast<size_t>(r)] = lp::Sense::EQ;
        ++r;
        for (Eigen::Index j = 0; j < d; ++j) {
            if (!column_alive(j)) {
                continue;
            }
            for (int k = 0; k < K; ++k) {
                if (layout.w_plus(k, j) >= 0) {
                    prog.a_matrix(r, layout.w_plus(k, j)) = 1.0;
                    prog.a_matrix(r, layout.w_minus(k, j)) = -1.0;
                }
            }
            prog.senses[static_cast<size_t>(r)] = lp::Sense::EQ;
            ++r;
        }

        const double inv_n = 1.0 / static_cast<double>(n);
        const Matrix& x = data.features();
        for (Eigen::Index i = 0; i < n; ++i) {
            const int yi = data.labels()[static_cast<size_t>(i)] - 1;
            for (int k = 0; k < K; ++k) {
                // xi_ik - b_k - w_k . x_i >= 1
                const Eigen::Index xi = layout.xi[static_cast<size_t>(i * K + k)];
                prog.a_matrix(r, xi) = 1.0;
                prog.costs[xi] = (k == yi) ? 0.0 : inv_n;
                prog.a_matrix(r, layout.b_pos[static_cast<size_t>(k)]) = -1.0;
                prog.a_matrix(r, layout.b_neg[static_cast<size_t>(k)]) = 1.0;
                for (Eigen::Index j = 0; j < d; ++j) {
                    if (layout.w_plus(k, j) >= 0) {
                        prog.a_matrix(r, layout.w_plus(k, j)) = -x(i, j);
                        prog.a_matrix(r, layout.w_minus(k, j)) = x(i, j);
                    }
                }
                prog.senses[static_cast<size_t>(r)] = lp::Sense::GE;
                prog.rhs[r] = 1.0;
                ++r;
            }
        }
        next_row = r;
        return prog;
    }

    Eigen::Index next_row = 0;
};

void require_lambda(double lambda) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        throw std::invalid_argument("lambda must be a positive finite number");
    }
}

void require_weights(const Matrix& tau, int K, Eigen::Index d) {
    if (tau.rows() != K || tau.cols() != d) {
        throw DimensionError("adaptive weight matrix must be " + std::to_string(K) + " x " + std::to_string(d));
    }
    for (Eigen::Index i = 0; i < tau.size(); ++i) {
        if (!(tau.data()[i] > 0.0)) {
            throw std::invalid_argument("adaptive weights must be > 0 (infinity allowed)");
        }
    }
}

} // namespace

MsvmLp build_l1_lp(const Dataset& data, double lambda, const std::optional<Matrix>& tau) {
    require_lambda(lambda);
    Builder bld(data);
    if (tau) {
        require_weights(*tau, bld.K, bld.d);
    }
    auto weight = [&](int k, Eigen::Index j) { return tau ? (*tau)(k, j) : 1.0; };
    bld.assign_columns([&](int k, Eigen::Index j) { return !std::isinf(weight(k, j)); }, false);
    lp::LinearProgram prog = bld.base_program(0);
    for (int k = 0; k < bld.K; ++k) {
        for (Eigen::Index j = 0; j < bld.d; ++j) {
            if (bld.layout.w_plus(k, j) >= 0) {
                const double c = lambda * weight(k, j);
                prog.costs[bld.layout.w_plus(k, j)] = c;
                prog.costs[bld.layout.w_minus(k, j)] = c;
            }
        }
    }
    bld.layout.num_rows = prog.num_rows();
    return {std::move(prog), std::move(bld.layout)};
}

MsvmLp build_supnorm_lp(const Dataset& data, double lambda, const std::optional<Vector>& tau_vector,
                        const std::optional<Matrix>& tau_matrix) {
    require_lambda(lambda);
    if (tau_vector && tau_matrix) {
        throw std::invalid_argument("supply either per-variable or per-coefficient weights, not both");
    }
    Builder bld(data);
    if (tau_vector) {
        if (tau_vector->size() != bld.d) {
            throw DimensionError("feature axis mismatch: adaptive weight vector must have length " +
                                 std::to_string(bld.d));
        }
        for (Eigen::Index j = 0; j < bld.d; ++j) {
            if (!((*tau_vector)[j] > 0.0)) {
                throw std::invalid_argument("adaptive weights must be > 0 (infinity allowed)");
            }
        }
    }
    if (tau_matrix) {
        require_weights(*tau_matrix, bld.K, bld.d);
    }
    auto kept = [&](int k, Eigen::Index j) {
        if (tau_vector) {
            return !std::isinf((*tau_vector)[j]);
        }
        if (tau_matrix) {
            return !std::isinf((*tau_matrix)(k, j));
        }
        return true;
    };
    bld.assign_columns(kept, true);

    Eigen::Index bound_rows = 0;
    for (int k = 0; k < bld.K; ++k) {
        for (Eigen::Index j = 0; j < bld.d; ++j) {
            bound_rows += bld.layout.w_plus(k, j) >= 0;
        }
    }
    lp::LinearProgram prog = bld.base_program(bound_rows);
    Eigen::Index r = bld.next_row;
    for (Eigen::Index j = 0; j < bld.d; ++j) {
        const Eigen::Index eta = bld.layout.eta[static_cast<size_t>(j)];
        if (eta < 0) {
            continue;
        }
        prog.costs[eta] = lambda * (tau_vector ? (*tau_vector)[j] : 1.0);
        for (int k = 0; k < bld.K; ++k) {
            if (bld.layout.w_plus(k, j) < 0) {
                continue;
            }
            const double scale = tau_matrix ? (*tau_matrix)(k, j) : 1.0;
            prog.a_matrix(r, bld.layout.w_plus(k, j)) = scale;
            prog.a_matrix(r, bld.layout.w_minus(k, j)) = scale;
            prog.a_matrix(r, eta) = -1.0;
            prog.senses[static_cast<size_t>(r)] = lp::Sense::LE;
            ++r;
        }
    }
    bld.layout.num_rows = prog.num_rows();
    return {std::move(prog), std::move(bld.layout)};
}

MsvmLp build_lp(const Dataset& data, double lambda, const PenaltySpec& spec) {
    spec.validate(data.k_classes(), data.d());
    switch (spec.kind) {
    case PenaltyKind::L1: return build_l1_lp(data, lambda);
    case PenaltyKind::AdaptiveL1: return build_l1_lp(data, lambda, spec.tau_matrix);
    case PenaltyKind::SupNorm: return build_supnorm_lp(data, lambda);
    case PenaltyKind::AdaptiveSupI: return build_supnorm_lp(data, lambda, spec.tau_vector);
    case PenaltyKind::AdaptiveSupII: return build_supnorm_lp(data, lambda, std::nullopt, spec.tau_matrix);
    case PenaltyKind::L2: break;
    }
    throw std::invalid_argument("the L2 MSVM is not a linear program");
}

namespace {

/// Pushes the residual sum of `v` onto its largest-magnitude entry.
template <typename Vec>
void fold_residual(Vec&& v) {
    const double residual = v.sum();
    if (residual == 0.0) {
        return;
    }
    Eigen::Index idx = 0;
    v.cwiseAbs().maxCoeff(&idx);
    if (v[idx] != 0.0) {
        v[idx] -= residual;
    }
}

} // namespace

CoefModel decode(const lp::LpSolution& solution, const MsvmLpLayout& layout, double zero_tol) {
    if (solution.status != lp::Status::Optimal) {
        throw LpFailure(solution.status, std::string("LP not solved to optimality: ") + lp::to_string(solution.status));
    }
    if (solution.x.size() != layout.num_columns) {
        throw DimensionError("LP solution has " + std::to_string(solution.x.size()) + " entries, layout expects " +
                             std::to_string(layout.num_columns));
    }
    const int K = layout.k_classes;
    const Eigen::Index d = layout.d_vars;
    const Vector& x = solution.x;
    CoefModel model = CoefModel::zero(K, d);
    for (int k = 0; k < K; ++k) {
        model.b[k] = x[layout.b_pos[static_cast<size_t>(k)]] - x[layout.b_neg[static_cast<size_t>(k)]];
        for (Eigen::Index j = 0; j < d; ++j) {
            const Eigen::Index plus = layout.w_plus(k, j);
            if (plus < 0) {
                continue;
            }
            const double v = x[plus] - x[layout.w_minus(k, j)];
            model.w(k, j) = std::abs(v) <= zero_tol ? 0.0 : v;
        }
    }
    fold_residual(model.b);
    for (Eigen::Index j = 0; j < d; ++j) {
        fold_residual(model.w.col(j));
    }
    return model;
}

LpFit fit_lp(const Dataset& data, double lambda, const PenaltySpec& spec, long iteration_limit) {
    const MsvmLp built = build_lp(data, lambda, spec);
    LpFit out;
    out.lambda = lambda;
    out.solution = lp::solve(built.program, iteration_limit);
    out.model = decode(out.solution, built.layout);
    return out;
}

} // namespace supmsvm

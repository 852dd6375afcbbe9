#include "supmsvm/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace supmsvm::lp {

const char* to_string(Status status) {
    switch (status) {
    case Status::Optimal: return "optimal";
    case Status::Infeasible: return "infeasible";
    case Status::Unbounded: return "unbounded";
    case Status::IterationLimit: return "iteration-limit";
    }
    return "unknown";
}

LinearProgram::LinearProgram(Eigen::Index vars, Eigen::Index rows)
    : costs(Vector::Zero(vars)),
      a_matrix(Matrix::Zero(rows, vars)),
      senses(static_cast<size_t>(rows), Sense::LE),
      rhs(Vector::Zero(rows)),
      lower(Vector::Zero(vars)),
      upper(Vector::Constant(vars, kInfinity)) {}

void LinearProgram::validate() const {
    const Eigen::Index m = costs.size();
    const Eigen::Index p = rhs.size();
    if (a_matrix.rows() != p || a_matrix.cols() != m) {
        throw std::invalid_argument("LP constraint matrix is " + std::to_string(a_matrix.rows()) + " x " +
                                    std::to_string(a_matrix.cols()) + ", expected " + std::to_string(p) + " x " +
                                    std::to_string(m));
    }
    if (static_cast<Eigen::Index>(senses.size()) != p) {
        throw std::invalid_argument("LP has " + std::to_string(senses.size()) + " senses for " + std::to_string(p) +
                                    " rows");
    }
    if (lower.size() != m || upper.size() != m) {
        throw std::invalid_argument("LP bounds must have one entry per variable");
    }
    if (!costs.allFinite() || !a_matrix.allFinite() || !rhs.allFinite()) {
        throw std::invalid_argument("LP data must be finite");
    }
    for (Eigen::Index j = 0; j < m; ++j) {
        if (!(lower[j] == 0.0 || lower[j] == -kInfinity)) {
            throw std::invalid_argument("LP lower bounds must be 0 or -inf");
        }
        if (upper[j] != kInfinity) {
            throw std::invalid_argument("LP upper bounds must be +inf");
        }
    }
}

Eigen::Index StandardForm::num_split_columns() const {
    return static_cast<Eigen::Index>(std::count_if(negative_part.begin(), negative_part.end(),
                                                   [](Eigen::Index c) { return c >= 0; }));
}

Eigen::Index StandardForm::num_slack_columns() const {
    return static_cast<Eigen::Index>(std::count_if(row_slack.begin(), row_slack.end(),
                                                   [](Eigen::Index c) { return c >= 0; }));
}

Vector StandardForm::to_original(const Vector& xs) const {
    Vector x(static_cast<Eigen::Index>(positive_part.size()));
    for (size_t j = 0; j < positive_part.size(); ++j) {
        double v = xs[positive_part[j]];
        if (negative_part[j] >= 0) {
            v -= xs[negative_part[j]];
        }
        x[static_cast<Eigen::Index>(j)] = v;
    }
    return x;
}

StandardForm standardize(const LinearProgram& lp) {
    lp.validate();
    const Eigen::Index m = lp.num_vars();
    const Eigen::Index p = lp.num_rows();

    StandardForm sf;
    sf.rows = p;
    sf.rhs = lp.rhs;
    sf.row_negated.assign(static_cast<size_t>(p), false);
    for (Eigen::Index i = 0; i < p; ++i) {
        if (lp.rhs[i] < 0.0) {
            sf.row_negated[static_cast<size_t>(i)] = true;
            sf.rhs[i] = -lp.rhs[i];
        }
    }
    auto sign = [&](Eigen::Index i) { return sf.row_negated[static_cast<size_t>(i)] ? -1.0 : 1.0; };

    std::vector<double> costs;
    auto add_column = [&](double cost, std::vector<StandardForm::Entry> entries) {
        sf.columns.push_back(std::move(entries));
        costs.push_back(cost);
        return static_cast<Eigen::Index>(sf.columns.size() - 1);
    };

    sf.positive_part.resize(static_cast<size_t>(m));
    sf.negative_part.assign(static_cast<size_t>(m), -1);
    for (Eigen::Index j = 0; j < m; ++j) {
        std::vector<StandardForm::Entry> entries;
        for (Eigen::Index i = 0; i < p; ++i) {
            const double v = lp.a_matrix(i, j);
            if (v != 0.0) {
                entries.push_back({i, sign(i) * v});
            }
        }
        if (lp.lower[j] == -kInfinity) {
            auto negated = entries;
            for (auto& e : negated) {
                e.value = -e.value;
            }
            sf.positive_part[static_cast<size_t>(j)] = add_column(lp.costs[j], std::move(entries));
            sf.negative_part[static_cast<size_t>(j)] = add_column(-lp.costs[j], std::move(negated));
        } else {
            sf.positive_part[static_cast<size_t>(j)] = add_column(lp.costs[j], std::move(entries));
        }
    }

    sf.row_slack.assign(static_cast<size_t>(p), -1);
    for (Eigen::Index i = 0; i < p; ++i) {
        const Sense s = lp.senses[static_cast<size_t>(i)];
        if (s == Sense::EQ) {
            continue;
        }
        const double coef = (s == Sense::LE ? 1.0 : -1.0) * sign(i);
        sf.row_slack[static_cast<size_t>(i)] = add_column(0.0, {{i, coef}});
    }

    sf.costs = Eigen::Map<const Vector>(costs.data(), static_cast<Eigen::Index>(costs.size()));
    return sf;
}

namespace {

using Entry = StandardForm::Entry;

/// Product-form eta column: B_new^{-1} = E B_old^{-1}.
struct Eta {
    Eigen::Index position;
    double pivot;
    std::vector<std::pair<Eigen::Index, double>> others;
};

class RevisedSimplex {
public:
    RevisedSimplex(const StandardForm& sf, long iteration_limit, bool perturb)
        : sf_(sf), p_(sf.rows), limit_(iteration_limit), rhs_(sf.rhs) {
        columns_ = sf.columns;
        if (perturb) {
            perturb_rhs();
        }
        costs_.assign(sf.costs.data(), sf.costs.data() + sf.costs.size());
        num_real_ = static_cast<Eigen::Index>(columns_.size());
        classify_singletons();
        crash_basis();
    }

    LpSolution run() {
        LpSolution out;
        const double rhs_scale = std::max(1.0, sf_.rhs.size() ? sf_.rhs.cwiseAbs().maxCoeff() : 0.0);

        refactor();
        if (num_artificial() > 0) {
            phase_ = 1;
            double start_infeas = 0.0;
            for (Eigen::Index i = 0; i < p_; ++i) {
                if (is_artificial(basic_[static_cast<size_t>(i)])) {
                    start_infeas += std::max(0.0, xb_[i]);
                }
            }
            const Status st = start_infeas > 0.0 ? iterate() : Status::Optimal;
            if (st == Status::IterationLimit) {
                out.status = st;
                out.iterations = iterations_;
                return out;
            }
            double infeas = 0.0;
            for (Eigen::Index i = 0; i < p_; ++i) {
                if (is_artificial(basic_[static_cast<size_t>(i)])) {
                    infeas += std::max(0.0, xb_[i]);
                }
            }
            if (infeas > kFeasibilityTolerance * rhs_scale) {
                out.status = Status::Infeasible;
                out.iterations = iterations_;
                out.objective = infeas;
                return out;
            }
            drive_out_artificials();
        }

        phase_ = 2;
        refactor();
        const Status st = iterate();
        out.status = st;
        out.iterations = iterations_;
        out.min_reduced_cost = min_reduced_cost_;
        if (st != Status::Optimal) {
            return out;
        }
        if (perturbed_) {
            // the optimal basis of the perturbed problem, evaluated at the true rhs
            rhs_ = sf_.rhs;
            refactor();
            for (Eigen::Index i = 0; i < p_; ++i) {
                if (xb_[i] < -kFeasibilityTolerance * rhs_scale) {
                    out.status = Status::IterationLimit;
                    restore_failed_ = true;
                    return out;
                }
            }
        }

        Vector xs = Vector::Zero(num_real_);
        for (Eigen::Index i = 0; i < p_; ++i) {
            const Eigen::Index col = basic_[static_cast<size_t>(i)];
            if (col < num_real_) {
                xs[col] = std::max(0.0, xb_[i]);
            }
        }
        out.x = sf_.to_original(xs);
        return out;
    }

    /// True when the basis found with a perturbed rhs is infeasible for the
    /// true rhs; the caller then solves again without perturbation.
    bool restore_failed() const { return restore_failed_; }

private:
    // ---- problem data -----------------------------------------------------

    /// Relaxes every inequality row by a tiny row-dependent amount so that
    /// degenerate vertices split apart; equality rows are left alone.
    void perturb_rhs() {
        std::vector<double> slack_coef(static_cast<size_t>(p_), 0.0);
        for (Eigen::Index col : sf_.row_slack) {
            if (col >= 0) {
                const auto& e = sf_.columns[static_cast<size_t>(col)][0];
                slack_coef[static_cast<size_t>(e.row)] = e.value;
            }
        }
        for (Eigen::Index i = 0; i < p_; ++i) {
            const double coef = slack_coef[static_cast<size_t>(i)];
            if (coef == 0.0) {
                continue;
            }
            const double frac = std::fmod(0.6180339887498949 * static_cast<double>(i + 1), 1.0);
            const double delta = kPerturbation * std::max(1.0, std::abs(rhs_[i])) * (1.0 + frac);
            const double relaxed = rhs_[i] + (coef > 0.0 ? delta : -delta);
            rhs_[i] = relaxed >= 0.0 ? relaxed : rhs_[i] + delta;
            perturbed_ = true;
        }
    }

    void classify_singletons() {
        singleton_row_.assign(columns_.size(), -1);
        for (size_t j = 0; j < columns_.size(); ++j) {
            if (columns_[j].size() == 1) {
                singleton_row_[j] = columns_[j][0].row;
            }
        }
    }

    bool is_artificial(Eigen::Index col) const { return col >= num_real_; }

    Eigen::Index num_artificial() const { return static_cast<Eigen::Index>(columns_.size()) - num_real_; }

    double cost(Eigen::Index col) const {
        if (phase_ == 1) {
            return is_artificial(col) ? 1.0 : 0.0;
        }
        return is_artificial(col) ? 0.0 : costs_[static_cast<size_t>(col)];
    }

    /// Rows get a singleton column with a positive entry as their initial
    /// basic variable when one exists, otherwise an artificial.
    void crash_basis() {
        basic_.assign(static_cast<size_t>(p_), -1);
        for (size_t j = 0; j < static_cast<size_t>(num_real_); ++j) {
            const Eigen::Index r = singleton_row_[j];
            if (r >= 0 && basic_[static_cast<size_t>(r)] < 0 && columns_[j][0].value > 0.0) {
                basic_[static_cast<size_t>(r)] = static_cast<Eigen::Index>(j);
            }
        }
        for (Eigen::Index r = 0; r < p_; ++r) {
            if (basic_[static_cast<size_t>(r)] < 0) {
                columns_.push_back({{r, 1.0}});
                singleton_row_.push_back(r);
                basic_[static_cast<size_t>(r)] = static_cast<Eigen::Index>(columns_.size() - 1);
            }
        }
        position_.assign(columns_.size(), -1);
        for (Eigen::Index i = 0; i < p_; ++i) {
            position_[static_cast<size_t>(basic_[static_cast<size_t>(i)])] = i;
        }
    }

    // ---- factorisation ----------------------------------------------------

    void refactor() {
        covering_.assign(static_cast<size_t>(p_), -1);
        kernel_positions_.clear();
        for (Eigen::Index i = 0; i < p_; ++i) {
            const Eigen::Index col = basic_[static_cast<size_t>(i)];
            const Eigen::Index r = singleton_row_[static_cast<size_t>(col)];
            if (r >= 0 && covering_[static_cast<size_t>(r)] < 0) {
                covering_[static_cast<size_t>(r)] = i;
            } else {
                kernel_positions_.push_back(i);
            }
        }
        kernel_rows_.clear();
        row_to_kernel_.assign(static_cast<size_t>(p_), -1);
        for (Eigen::Index r = 0; r < p_; ++r) {
            if (covering_[static_cast<size_t>(r)] < 0) {
                row_to_kernel_[static_cast<size_t>(r)] = static_cast<Eigen::Index>(kernel_rows_.size());
                kernel_rows_.push_back(r);
            }
        }
        if (kernel_rows_.size() != kernel_positions_.size()) {
            throw std::runtime_error("simplex: singular basis (singleton rows collide)");
        }
        const auto q = static_cast<Eigen::Index>(kernel_rows_.size());
        if (q > 0) {
            Matrix kernel = Matrix::Zero(q, q);
            for (Eigen::Index s = 0; s < q; ++s) {
                const Eigen::Index col = basic_[static_cast<size_t>(kernel_positions_[static_cast<size_t>(s)])];
                for (const Entry& e : columns_[static_cast<size_t>(col)]) {
                    const Eigen::Index t = row_to_kernel_[static_cast<size_t>(e.row)];
                    if (t >= 0) {
                        kernel(t, s) = e.value;
                    }
                }
            }
            lu_.compute(kernel);
            const Vector diag = lu_.matrixLU().diagonal().cwiseAbs();
            if (!(diag.minCoeff() > 1e-13 * std::max(1.0, diag.maxCoeff()))) {
                throw std::runtime_error("simplex: numerically singular basis");
            }
        }
        etas_.clear();
        recompute_primal();
    }

    /// Solves B0 z = a for the basis at the last refactorisation.
    void solve_base(const Vector& a, Vector& z) const {
        z.setZero(p_);
        const auto q = static_cast<Eigen::Index>(kernel_rows_.size());
        Vector u;
        if (q > 0) {
            Vector at(q);
            for (Eigen::Index t = 0; t < q; ++t) {
                at[t] = a[kernel_rows_[static_cast<size_t>(t)]];
            }
            u = lu_.solve(at);
        }
        Vector spill = Vector::Zero(p_);
        for (Eigen::Index s = 0; s < q; ++s) {
            const Eigen::Index pos = kernel_positions_[static_cast<size_t>(s)];
            z[pos] = u[s];
            if (u[s] == 0.0) {
                continue;
            }
            for (const Entry& e : columns_[static_cast<size_t>(base_basic_[static_cast<size_t>(pos)])]) {
                spill[e.row] += e.value * u[s];
            }
        }
        for (Eigen::Index r = 0; r < p_; ++r) {
            const Eigen::Index pos = covering_[static_cast<size_t>(r)];
            if (pos >= 0) {
                const Eigen::Index col = base_basic_[static_cast<size_t>(pos)];
                z[pos] = (a[r] - spill[r]) / columns_[static_cast<size_t>(col)][0].value;
            }
        }
    }

    /// Solves B0' y = c (c indexed by basis position, y by row).
    void solve_base_transposed(const Vector& c, Vector& y) const {
        y.setZero(p_);
        for (Eigen::Index r = 0; r < p_; ++r) {
            const Eigen::Index pos = covering_[static_cast<size_t>(r)];
            if (pos >= 0) {
                const Eigen::Index col = base_basic_[static_cast<size_t>(pos)];
                y[r] = c[pos] / columns_[static_cast<size_t>(col)][0].value;
            }
        }
        const auto q = static_cast<Eigen::Index>(kernel_rows_.size());
        if (q == 0) {
            return;
        }
        Vector rhs(q);
        for (Eigen::Index s = 0; s < q; ++s) {
            const Eigen::Index pos = kernel_positions_[static_cast<size_t>(s)];
            double v = c[pos];
            for (const Entry& e : columns_[static_cast<size_t>(base_basic_[static_cast<size_t>(pos)])]) {
                if (covering_[static_cast<size_t>(e.row)] >= 0) {
                    v -= e.value * y[e.row];
                }
            }
            rhs[s] = v;
        }
        const Vector yt = lu_.transpose().solve(rhs);
        for (Eigen::Index t = 0; t < q; ++t) {
            y[kernel_rows_[static_cast<size_t>(t)]] = yt[t];
        }
    }

    /// z = B^{-1} a, a given as a dense row-indexed vector.
    void ftran(const Vector& a, Vector& z) const {
        solve_base(a, z);
        for (const Eta& eta : etas_) {
            const double t = z[eta.position] / eta.pivot;
            if (t != 0.0) {
                for (const auto& [i, v] : eta.others) {
                    z[i] -= v * t;
                }
            }
            z[eta.position] = t;
        }
    }

    /// y' = c' B^{-1}, c indexed by basis position.
    void btran(Vector c, Vector& y) const {
        for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
            double v = c[it->position];
            for (const auto& [i, zi] : it->others) {
                v -= c[i] * zi;
            }
            c[it->position] = v / it->pivot;
        }
        solve_base_transposed(c, y);
    }

    void recompute_primal() {
        base_basic_ = basic_;
        ftran(rhs_, xb_);
    }

    Vector column_dense(Eigen::Index col) const {
        Vector a = Vector::Zero(p_);
        for (const Entry& e : columns_[static_cast<size_t>(col)]) {
            a[e.row] = e.value;
        }
        return a;
    }

    double dot_column(const Vector& y, Eigen::Index col) const {
        double v = 0.0;
        for (const Entry& e : columns_[static_cast<size_t>(col)]) {
            v += y[e.row] * e.value;
        }
        return v;
    }

    // ---- pivoting ---------------------------------------------------------

    void pivot(Eigen::Index entering, Eigen::Index leave_pos, const Vector& z, double step) {
        for (Eigen::Index i = 0; i < p_; ++i) {
            xb_[i] -= step * z[i];
        }
        xb_[leave_pos] = step;

        Eta eta;
        eta.position = leave_pos;
        eta.pivot = z[leave_pos];
        for (Eigen::Index i = 0; i < p_; ++i) {
            if (i != leave_pos && z[i] != 0.0) {
                eta.others.emplace_back(i, z[i]);
            }
        }
        etas_.push_back(std::move(eta));

        const Eigen::Index leaving = basic_[static_cast<size_t>(leave_pos)];
        position_[static_cast<size_t>(leaving)] = -1;
        basic_[static_cast<size_t>(leave_pos)] = entering;
        position_[static_cast<size_t>(entering)] = leave_pos;
        ++iterations_;

        if (static_cast<int>(etas_.size()) >= kRefactorInterval) {
            refactor();
        }
    }

    Status iterate() {
        const auto total_cols = static_cast<Eigen::Index>(columns_.size());
        const long degenerate_switch = 3L * (p_ + num_real_);
        long degenerate_run = 0;
        Vector y;
        Vector z;
        Vector cb(p_);

        while (true) {
            for (Eigen::Index i = 0; i < p_; ++i) {
                cb[i] = cost(basic_[static_cast<size_t>(i)]);
            }
            btran(cb, y);

            const bool bland = degenerate_run >= degenerate_switch;
            Eigen::Index entering = -1;
            double best = 0.0;
            double best_dj = 0.0;
            min_reduced_cost_ = 0.0;
            for (Eigen::Index j = 0; j < total_cols; ++j) {
                if (position_[static_cast<size_t>(j)] >= 0 || is_artificial(j)) {
                    continue;
                }
                const double cj = cost(j);
                const double dj = cj - dot_column(y, j);
                min_reduced_cost_ = std::min(min_reduced_cost_, dj);
                if (dj >= -kOptimalityTolerance * std::max(1.0, std::abs(cj))) {
                    continue;
                }
                if (bland) {
                    entering = j;
                    best_dj = dj;
                    break;
                }
                if (dj < best) {
                    best = dj;
                    best_dj = dj;
                    entering = j;
                }
            }
            if (entering < 0) {
                return Status::Optimal;
            }
            if (iterations_ >= limit_) {
                return Status::IterationLimit;
            }

            ftran(column_dense(entering), z);

            Eigen::Index leave = -1;
            double min_ratio = kInfinity;
            double leave_mag = 0.0;
            for (Eigen::Index i = 0; i < p_; ++i) {
                const double zi = z[i];
                const Eigen::Index col = basic_[static_cast<size_t>(i)];
                if (phase_ == 2 && is_artificial(col)) {
                    // redundant row: the artificial must stay at zero
                    if (std::abs(zi) > kPivotTolerance) {
                        if (min_ratio > 0.0 || (bland ? col < basic_[static_cast<size_t>(leave)] : std::abs(zi) > leave_mag)) {
                            leave = i;
                            min_ratio = 0.0;
                            leave_mag = std::abs(zi);
                        }
                    }
                    continue;
                }
                if (zi <= kPivotTolerance) {
                    continue;
                }
                const double ratio = (xb_[i] > kZeroBasic ? xb_[i] : 0.0) / zi;
                const double tie = 1e-12 * std::max(1.0, min_ratio == kInfinity ? 0.0 : min_ratio);
                if (ratio < min_ratio - tie) {
                    leave = i;
                    min_ratio = ratio;
                    leave_mag = zi;
                } else if (ratio <= min_ratio + tie) {
                    const bool take = bland ? col < basic_[static_cast<size_t>(leave)] : zi > leave_mag;
                    if (take) {
                        leave = i;
                        min_ratio = std::min(min_ratio, ratio);
                        leave_mag = zi;
                    }
                }
            }
            if (leave < 0) {
                return Status::Unbounded;
            }

            // a step that does not move the objective counts as degenerate
            if (min_ratio * -best_dj <= kZeroBasic * std::max(1.0, std::abs(objective_estimate()))) {
                ++degenerate_run;
            } else {
                degenerate_run = 0;
            }
            pivot(entering, leave, z, min_ratio);
        }
    }

    double objective_estimate() const {
        double v = 0.0;
        for (Eigen::Index i = 0; i < p_; ++i) {
            v += cost(basic_[static_cast<size_t>(i)]) * xb_[i];
        }
        return v;
    }

    void drive_out_artificials() {
        Vector rho;
        Vector z;
        for (Eigen::Index i = 0; i < p_; ++i) {
            if (!is_artificial(basic_[static_cast<size_t>(i)])) {
                continue;
            }
            Vector unit = Vector::Zero(p_);
            unit[i] = 1.0;
            btran(unit, rho);
            Eigen::Index best_col = -1;
            double best_mag = kPivotTolerance;
            for (Eigen::Index j = 0; j < num_real_; ++j) {
                if (position_[static_cast<size_t>(j)] >= 0) {
                    continue;
                }
                const double alpha = std::abs(dot_column(rho, j));
                if (alpha > best_mag) {
                    best_mag = alpha;
                    best_col = j;
                }
            }
            if (best_col < 0) {
                continue; // redundant row
            }
            ftran(column_dense(best_col), z);
            pivot(best_col, i, z, std::max(0.0, xb_[i]) / z[i]);
        }
    }

    const StandardForm& sf_;
    Eigen::Index p_;
    long limit_;
    Vector rhs_; ///< rhs in use, possibly perturbed
    bool perturbed_ = false;
    bool restore_failed_ = false;
    std::vector<std::vector<Entry>> columns_;
    std::vector<double> costs_;
    Eigen::Index num_real_ = 0;
    std::vector<Eigen::Index> singleton_row_;

    std::vector<Eigen::Index> basic_;      // position -> column
    std::vector<Eigen::Index> base_basic_; // basis at the last refactorisation
    std::vector<Eigen::Index> position_;   // column -> position or -1
    Vector xb_;

    std::vector<Eigen::Index> covering_; // row -> position of its singleton basic column
    std::vector<Eigen::Index> kernel_positions_;
    std::vector<Eigen::Index> kernel_rows_;
    std::vector<Eigen::Index> row_to_kernel_;
    Eigen::PartialPivLU<Matrix> lu_;
    std::vector<Eta> etas_;

    int phase_ = 1;
    long iterations_ = 0;
    double min_reduced_cost_ = 0.0;
};

} // namespace

double primal_residual(const LinearProgram& lp, const Vector& x) {
    double worst = 0.0;
    const Vector ax = lp.a_matrix * x;
    for (Eigen::Index i = 0; i < lp.num_rows(); ++i) {
        const double diff = ax[i] - lp.rhs[i];
        double viol = 0.0;
        switch (lp.senses[static_cast<size_t>(i)]) {
        case Sense::LE: viol = std::max(0.0, diff); break;
        case Sense::GE: viol = std::max(0.0, -diff); break;
        case Sense::EQ: viol = std::abs(diff); break;
        }
        worst = std::max(worst, viol / std::max(1.0, std::abs(lp.rhs[i])));
    }
    for (Eigen::Index j = 0; j < lp.num_vars(); ++j) {
        if (lp.lower[j] == 0.0) {
            worst = std::max(worst, -x[j]);
        }
    }
    return worst;
}

namespace {

double power_of_two(double v) { return std::ldexp(1.0, static_cast<int>(std::lround(std::log2(v)))); }

/// Geometric-mean row and column scaling followed by column equilibration.
/// Scales are powers of two. The solution of the scaled program times
/// `col_scale` solves the original.
LinearProgram scale_program(const LinearProgram& lp, Vector& col_scale) {
    LinearProgram s = lp;
    const Eigen::Index p = s.num_rows();
    const Eigen::Index m = s.num_vars();
    col_scale = Vector::Ones(m);
    auto extremes = [](const auto& v, double& lo, double& hi) {
        lo = kInfinity;
        hi = 0.0;
        for (Eigen::Index i = 0; i < v.size(); ++i) {
            const double a = std::abs(v[i]);
            if (a > 0.0) {
                lo = std::min(lo, a);
                hi = std::max(hi, a);
            }
        }
        return hi > 0.0;
    };
    double lo = 0.0;
    double hi = 0.0;
    for (int pass = 0; pass < 4; ++pass) {
        for (Eigen::Index i = 0; i < p; ++i) {
            if (extremes(s.a_matrix.row(i), lo, hi)) {
                const double f = power_of_two(1.0 / std::sqrt(lo * hi));
                s.a_matrix.row(i) *= f;
                s.rhs[i] *= f;
            }
        }
        for (Eigen::Index j = 0; j < m; ++j) {
            if (extremes(s.a_matrix.col(j), lo, hi)) {
                const double f = pass == 3 ? power_of_two(1.0 / hi) : power_of_two(1.0 / std::sqrt(lo * hi));
                s.a_matrix.col(j) *= f;
                s.costs[j] *= f;
                col_scale[j] *= f;
            }
        }
    }
    return s;
}

} // namespace

LpSolution solve(const LinearProgram& lp, long iteration_limit) {
    Vector col_scale;
    const StandardForm sf = standardize(scale_program(lp, col_scale));
    if (iteration_limit <= 0) {
        iteration_limit = 50L * (sf.rows + static_cast<long>(sf.columns.size())) + 1000L;
    }
    RevisedSimplex solver(sf, iteration_limit, true);
    LpSolution out = solver.run();
    if (solver.restore_failed() || out.status == Status::Infeasible) {
        RevisedSimplex exact(sf, iteration_limit, false);
        out = exact.run();
    }
    if (out.x.size() == col_scale.size()) {
        out.x = out.x.cwiseProduct(col_scale);
    }
    if (out.status == Status::Optimal) {
        out.objective = lp.costs.dot(out.x);
        out.max_primal_residual = primal_residual(lp, out.x);
    }
    return out;
}

namespace {

const char* sense_token(Sense s) {
    switch (s) {
    case Sense::LE: return "<=";
    case Sense::GE: return ">=";
    case Sense::EQ: return "=";
    }
    return "?";
}

double parse_number(const std::string& token) {
    size_t used = 0;
    const double v = std::stod(token, &used);
    if (used != token.size()) {
        throw std::invalid_argument("bad number '" + token + "' in LP dump");
    }
    return v;
}

std::string expect_token(std::istream& in, const char* what) {
    std::string tok;
    if (!(in >> tok)) {
        throw std::invalid_argument(std::string("LP dump truncated while reading ") + what);
    }
    return tok;
}

} // namespace

void write_dump(std::ostream& out, const LinearProgram& lp) {
    lp.validate();
    const auto old_precision = out.precision();
    out << std::setprecision(17);
    out << "LPDUMP 1\n";
    out << "VARS " << lp.num_vars() << "\n";
    out << "ROWS " << lp.num_rows() << "\n";
    out << "COSTS\n";
    for (Eigen::Index j = 0; j < lp.num_vars(); ++j) {
        out << (j ? " " : "") << lp.costs[j];
    }
    out << "\nLOWER\n";
    for (Eigen::Index j = 0; j < lp.num_vars(); ++j) {
        out << (j ? " " : "") << (lp.lower[j] == 0.0 ? "0" : "-inf");
    }
    out << "\nCONSTRAINTS\n";
    for (Eigen::Index i = 0; i < lp.num_rows(); ++i) {
        for (Eigen::Index j = 0; j < lp.num_vars(); ++j) {
            out << lp.a_matrix(i, j) << ' ';
        }
        out << sense_token(lp.senses[static_cast<size_t>(i)]) << ' ' << lp.rhs[i] << "\n";
    }
    out << "END\n";
    out.precision(old_precision);
}

LinearProgram read_dump(std::istream& in) {
    if (expect_token(in, "header") != "LPDUMP" || expect_token(in, "version") != "1") {
        throw std::invalid_argument("not an LP dump (expected 'LPDUMP 1')");
    }
    if (expect_token(in, "VARS") != "VARS") {
        throw std::invalid_argument("LP dump: expected VARS");
    }
    const auto m = static_cast<Eigen::Index>(parse_number(expect_token(in, "variable count")));
    if (expect_token(in, "ROWS") != "ROWS") {
        throw std::invalid_argument("LP dump: expected ROWS");
    }
    const auto p = static_cast<Eigen::Index>(parse_number(expect_token(in, "row count")));
    LinearProgram lp(m, p);
    if (expect_token(in, "COSTS") != "COSTS") {
        throw std::invalid_argument("LP dump: expected COSTS");
    }
    for (Eigen::Index j = 0; j < m; ++j) {
        lp.costs[j] = parse_number(expect_token(in, "cost"));
    }
    if (expect_token(in, "LOWER") != "LOWER") {
        throw std::invalid_argument("LP dump: expected LOWER");
    }
    for (Eigen::Index j = 0; j < m; ++j) {
        lp.lower[j] = parse_number(expect_token(in, "lower bound"));
    }
    if (expect_token(in, "CONSTRAINTS") != "CONSTRAINTS") {
        throw std::invalid_argument("LP dump: expected CONSTRAINTS");
    }
    for (Eigen::Index i = 0; i < p; ++i) {
        for (Eigen::Index j = 0; j < m; ++j) {
            lp.a_matrix(i, j) = parse_number(expect_token(in, "coefficient"));
        }
        const std::string s = expect_token(in, "sense");
        if (s == "<=") {
            lp.senses[static_cast<size_t>(i)] = Sense::LE;
        } else if (s == ">=") {
            lp.senses[static_cast<size_t>(i)] = Sense::GE;
        } else if (s == "=") {
            lp.senses[static_cast<size_t>(i)] = Sense::EQ;
        } else {
            throw std::invalid_argument("LP dump: bad sense '" + s + "'");
        }
        lp.rhs[i] = parse_number(expect_token(in, "rhs"));
    }
    if (expect_token(in, "END") != "END") {
        throw std::invalid_argument("LP dump: expected END");
    }
    lp.validate();
    return lp;
}

} // namespace supmsvm::lp

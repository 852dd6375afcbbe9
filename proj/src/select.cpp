#include "supmsvm/select.hpp"

#include "supmsvm/lpmodel.hpp"
#include "supmsvm/parallel.hpp"

#include <cmath>
#include <numeric>

namespace supmsvm {

LambdaGrid LambdaGrid::standard() {
    return range(-14, 15);
}

LambdaGrid LambdaGrid::range(int lo, int hi) {
    if (hi < lo) {
        throw std::invalid_argument("lambda grid range must satisfy lo <= hi");
    }
    LambdaGrid g;
    for (int v = lo; v <= hi; ++v) {
        g.log2_values.push_back(v);
    }
    return g;
}

LambdaGrid LambdaGrid::single(int log2_value) {
    return range(log2_value, log2_value);
}

std::vector<double> LambdaGrid::lambdas() const {
    validate();
    std::vector<double> out;
    out.reserve(log2_values.size());
    for (int v : log2_values) {
        out.push_back(std::ldexp(1.0, v));
    }
    return out;
}

void LambdaGrid::validate() const {
    if (log2_values.empty()) {
        throw std::invalid_argument("lambda grid is empty");
    }
    for (size_t i = 1; i < log2_values.size(); ++i) {
        if (log2_values[i] <= log2_values[i - 1]) {
            throw std::invalid_argument("lambda grid must be strictly increasing");
        }
    }
}

CoefModel fit_penalized(const Dataset& data, double lambda, const PenaltySpec& spec, const SelectOptions& options) {
    if (spec.kind == PenaltyKind::L2) {
        return fit_l2(data, lambda, options.l2).model;
    }
    return fit_lp(data, lambda, spec, options.lp_iteration_limit).model;
}

std::size_t choose_lambda(const std::vector<LambdaError>& table) {
    std::size_t best = table.size();
    for (std::size_t i = 0; i < table.size(); ++i) {
        if (table[i].failed) {
            continue;
        }
        if (best == table.size() || table[i].error < table[best].error ||
            (table[i].error == table[best].error && table[i].lambda > table[best].lambda)) {
            best = i;
        }
    }
    if (best == table.size()) {
        throw std::runtime_error("every lambda on the grid failed to fit");
    }
    return best;
}

namespace {

void require_compatible(const Dataset& train, const Dataset& tune) {
    if (train.d() != tune.d()) {
        throw DimensionError("feature axis mismatch between training and tuning data");
    }
    if (train.k_classes() != tune.k_classes()) {
        throw DimensionError("class axis mismatch between training and tuning data");
    }
}

} // namespace

TuneResult tune_on_holdout(const Dataset& train, const Dataset& tune, const PenaltySpec& spec, const LambdaGrid& grid,
                           const SelectOptions& options) {
    require_compatible(train, tune);
    spec.validate(train.k_classes(), train.d());
    const auto lambdas = grid.lambdas();

    std::vector<LambdaError> table(lambdas.size());
    std::vector<CoefModel> models(lambdas.size());
    parallel_for(lambdas.size(), options.threads, [&](std::size_t i) {
        table[i].lambda = lambdas[i];
        try {
            models[i] = fit_penalized(train, lambdas[i], spec, options);
            table[i].error = misclassification_rate(models[i], tune);
        } catch (const LpFailure& e) {
            table[i].failed = true;
            table[i].message = e.what();
        } catch (const std::runtime_error& e) {
            table[i].failed = true;
            table[i].message = e.what();
        }
    });

    TuneResult out;
    const std::size_t best = choose_lambda(table);
    out.chosen_lambda = lambdas[best];
    out.final_model = std::move(models[best]);
    out.per_lambda = std::move(table);
    out.spec = spec;
    out.fits = static_cast<long>(lambdas.size());
    return out;
}

TuneResult tune_loocv(const Dataset& train, const PenaltySpec& spec, const LambdaGrid& grid,
                      const SelectOptions& options) {
    spec.validate(train.k_classes(), train.d());
    if (train.n() < train.k_classes()) {
        throw std::invalid_argument("leave-one-out tuning needs at least as many rows as classes");
    }
    const auto lambdas = grid.lambdas();
    const auto n = static_cast<std::size_t>(train.n());

    // one work item per (lambda, held-out row); wrong[l * n + i] records the outcome
    std::vector<int> wrong(lambdas.size() * n, 0);
    std::vector<std::string> failure(lambdas.size() * n);
    parallel_for(lambdas.size() * n, options.threads, [&](std::size_t item) {
        const std::size_t l = item / n;
        const auto held = static_cast<Eigen::Index>(item % n);
        std::vector<Eigen::Index> rows;
        rows.reserve(n - 1);
        for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(n); ++i) {
            if (i != held) {
                rows.push_back(i);
            }
        }
        try {
            const CoefModel model = fit_penalized(train.rows(rows), lambdas[l], spec, options);
            const Vector x = train.features().row(held);
            wrong[item] = predict(model, {x.data(), static_cast<size_t>(x.size())}) !=
                          train.labels()[static_cast<size_t>(held)];
        } catch (const std::runtime_error& e) {
            failure[item] = e.what();
        }
    });

    std::vector<LambdaError> table(lambdas.size());
    for (std::size_t l = 0; l < lambdas.size(); ++l) {
        table[l].lambda = lambdas[l];
        int errors = 0;
        for (std::size_t i = 0; i < n; ++i) {
            errors += wrong[l * n + i];
            if (!failure[l * n + i].empty() && !table[l].failed) {
                table[l].failed = true;
                table[l].message = failure[l * n + i];
            }
        }
        table[l].error = static_cast<double>(errors) / static_cast<double>(n);
    }

    TuneResult out;
    const std::size_t best = choose_lambda(table);
    out.chosen_lambda = lambdas[best];
    out.final_model = fit_penalized(train, out.chosen_lambda, spec, options);
    out.per_lambda = std::move(table);
    out.spec = spec;
    out.fits = static_cast<long>(lambdas.size() * n) + 1;
    return out;
}

TuneResult tune(const Dataset& train, const std::optional<Dataset>& tune_set, const PenaltySpec& spec,
                const LambdaGrid& grid, const SelectOptions& options) {
    if (tune_set) {
        return tune_on_holdout(train, *tune_set, spec, grid, options);
    }
    return tune_loocv(train, spec, grid, options);
}

TuneResult tune_adaptive_from_l2(const Dataset& train, const std::optional<Dataset>& tune_set, PenaltyKind kind,
                                 const CoefModel& l2_model, const LambdaGrid& grid, const SelectOptions& options) {
    const PenaltySpec spec = adaptive_penalty(kind, l2_model, options.eps_zero);
    return tune(train, tune_set, spec, grid, options);
}

AdaptiveResult fit_adaptive_pipeline(const Dataset& train, const std::optional<Dataset>& tune_set, PenaltyKind kind,
                                     const LambdaGrid& grid, const SelectOptions& options) {
    if (!is_adaptive(kind)) {
        throw std::invalid_argument(std::string("penalty ") + to_string(kind) + " is not adaptive");
    }
    AdaptiveResult out;
    out.l2_stage = tune(train, tune_set, PenaltySpec::plain(PenaltyKind::L2), grid, options);
    out.weights = adaptive_penalty(kind, out.l2_stage.final_model, options.eps_zero);
    out.adaptive_stage = tune(train, tune_set, out.weights, grid, options);
    return out;
}

} // namespace supmsvm

#include "supmsvm/study.hpp"

#include "supmsvm/parallel.hpp"

#include <algorithm>
#include <optional>
#include <sstream>
#include <stdexcept>

namespace supmsvm {

const std::vector<std::string>& study_method_names() {
    static const std::vector<std::string> names = {"l2",         "l1",         "supnorm", "adapt-l1",
                                                   "adapt-sup1", "adapt-sup2", "bayes"};
    return names;
}

std::vector<std::string> parse_methods(const std::string& list) {
    if (list == "all") {
        return study_method_names();
    }
    if (list == "bayes-only") {
        return {"bayes"};
    }
    std::vector<std::string> out;
    std::istringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto& known = study_method_names();
        if (std::find(known.begin(), known.end(), item) == known.end()) {
            throw std::invalid_argument("unknown method '" + item + "'");
        }
        if (std::find(out.begin(), out.end(), item) != out.end()) {
            throw std::invalid_argument("method '" + item + "' listed twice");
        }
        out.push_back(item);
    }
    if (out.empty()) {
        throw std::invalid_argument("no methods requested");
    }
    return out;
}

StudyResult run_study(const StudyConfig& config) {
    if (config.reps < 1) {
        throw std::invalid_argument("a study needs at least one replication");
    }
    config.grid.validate();
    StudyResult res;
    res.truth = ground_truth(config.design.kind, config.design.basis);
    bool bayes = false;
    for (const auto& m : config.methods) {
        if (m == "bayes") {
            bayes = true;
        } else {
            res.methods.push_back(m);
        }
    }
    std::vector<PenaltyKind> kinds;
    bool need_l2 = false;
    for (const auto& m : res.methods) {
        kinds.push_back(penalty_kind_from_string(m));
        need_l2 = need_l2 || kinds.back() == PenaltyKind::L2 || is_adaptive(kinds.back());
    }

    const auto n_methods = res.methods.size();
    const auto reps = static_cast<std::size_t>(config.reps);
    res.runs.assign(n_methods, std::vector<MethodRun>(reps));
    std::vector<std::vector<std::string>> names(reps);

    SelectOptions opts = config.select;
    opts.threads = 1;

    if (n_methods > 0) {
        parallel_for(reps, config.threads, [&](std::size_t r) {
            SimDesign design = config.design;
            design.seed = config.design.seed + r;
            const SimData data = generate(design);
            names[r] = data.train.names();
            const std::optional<Dataset> tune_set = data.tune;
            std::optional<TuneResult> l2;
            if (need_l2) {
                l2 = tune(data.train, tune_set, PenaltySpec::plain(PenaltyKind::L2), config.grid, opts);
            }
            for (std::size_t m = 0; m < n_methods; ++m) {
                const PenaltyKind kind = kinds[m];
                TuneResult fit;
                if (kind == PenaltyKind::L2) {
                    fit = *l2;
                } else if (is_adaptive(kind)) {
                    fit = tune_adaptive_from_l2(data.train, tune_set, kind, l2->final_model, config.grid, opts);
                } else {
                    fit = tune(data.train, tune_set, PenaltySpec::plain(kind), config.grid, opts);
                }
                MethodRun& run = res.runs[m][r];
                run.record = evaluate_model(fit.final_model, data.test, data.truth);
                run.model = std::move(fit.final_model);
                run.lambda = fit.chosen_lambda;
                run.spec = std::move(fit.spec);
            }
        });
        res.variable_names = names.front();
    } else {
        SimDesign probe = config.design;
        probe.n_train = probe.n_tune = probe.n_test = design_classes(probe.kind);
        res.variable_names = generate(probe).train.names();
    }

    for (std::size_t m = 0; m < n_methods; ++m) {
        std::vector<RepRecord> records;
        records.reserve(reps);
        for (const auto& run : res.runs[m]) {
            records.push_back(run.record);
        }
        res.reports.push_back(aggregate(records, res.methods[m]));
    }
    if (bayes) {
        const auto est = estimate_bayes_error(config.design.kind, config.bayes_mc, config.design.seed);
        res.truth.bayes_error = est.error;
        res.truth.bayes_error_se = est.std_err;
        SelectionReport row = bayes_report(res.truth, est.error, config.reps);
        row.test_error_se = est.std_err;
        res.reports.push_back(std::move(row));
    }
    return res;
}

} // namespace supmsvm

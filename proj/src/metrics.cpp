#include "supmsvm/metrics.hpp"

#include "supmsvm/csv.hpp"

#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>

namespace supmsvm {

RepRecord evaluate_model(const CoefModel& model, const Dataset& test, const GroundTruth& truth) {
    if (truth.true_zero.rows() != model.k_classes() || truth.true_zero.cols() != model.d_vars()) {
        throw DimensionError("model and ground truth disagree on the coefficient shape");
    }
    RepRecord rec;
    rec.test_error = misclassification_rate(model, test);
    const Eigen::Index d = model.d_vars();
    rec.selected.assign(static_cast<size_t>(d), false);
    for (Eigen::Index j = 0; j < d; ++j) {
        bool any = false;
        for (Eigen::Index k = 0; k < model.k_classes(); ++k) {
            if (model.w(k, j) == 0.0) {
                if (truth.true_zero(k, j)) {
                    ++rec.correct_zeros;
                } else {
                    ++rec.incorrect_zeros;
                }
            } else {
                any = true;
            }
        }
        rec.selected[static_cast<size_t>(j)] = any;
        rec.model_size += any;
    }
    std::vector<Eigen::Index> chosen;
    for (Eigen::Index j = 0; j < d; ++j) {
        if (rec.selected[static_cast<size_t>(j)]) {
            chosen.push_back(j);
        }
    }
    rec.correct_model = chosen == truth.relevant_vars;
    return rec;
}

SelectionReport aggregate(const std::vector<RepRecord>& records, const std::string& method) {
    if (records.empty()) {
        throw std::invalid_argument("aggregate needs at least one record");
    }
    SelectionReport rep;
    rep.method = method;
    rep.n_reps = static_cast<long>(records.size());
    const auto reps = static_cast<double>(records.size());
    rep.selection_frequency.assign(records.front().selected.size(), 0);
    for (const RepRecord& r : records) {
        if (r.selected.size() != rep.selection_frequency.size()) {
            throw DimensionError("replications disagree on the number of variables");
        }
        rep.test_error_mean += r.test_error;
        rep.cz_mean += static_cast<double>(r.correct_zeros);
        rep.iz_mean += static_cast<double>(r.incorrect_zeros);
        rep.ms_mean += static_cast<double>(r.model_size);
        rep.cm_count += r.correct_model;
        for (size_t j = 0; j < r.selected.size(); ++j) {
            rep.selection_frequency[j] += r.selected[j];
        }
    }
    rep.test_error_mean /= reps;
    rep.cz_mean /= reps;
    rep.iz_mean /= reps;
    rep.ms_mean /= reps;
    if (records.size() > 1) {
        double ss = 0.0;
        for (const RepRecord& r : records) {
            ss += (r.test_error - rep.test_error_mean) * (r.test_error - rep.test_error_mean);
        }
        rep.test_error_sd = std::sqrt(ss / (reps - 1.0));
        rep.test_error_se = rep.test_error_sd / std::sqrt(reps);
    }
    return rep;
}

SelectionReport bayes_report(const GroundTruth& truth, double bayes_error, long n_reps) {
    SelectionReport rep;
    rep.method = "bayes";
    rep.test_error_mean = bayes_error;
    rep.cz_mean = static_cast<double>(truth.zero_count());
    rep.ms_mean = static_cast<double>(truth.relevant_vars.size());
    rep.cm_count = n_reps;
    rep.n_reps = n_reps;
    rep.selection_frequency.assign(static_cast<size_t>(truth.true_zero.cols()), 0);
    for (Eigen::Index j : truth.relevant_vars) {
        rep.selection_frequency[static_cast<size_t>(j)] = n_reps;
    }
    return rep;
}

void write_summary_csv(std::ostream& out, const std::vector<SelectionReport>& rows) {
    out << "method,te_mean,te_sd,te_se,cz,iz,ms,cm,reps\n";
    out << std::setprecision(10);
    for (const auto& r : rows) {
        out << r.method << ',' << r.test_error_mean << ',' << r.test_error_sd << ',' << r.test_error_se << ','
            << r.cz_mean << ',' << r.iz_mean << ',' << r.ms_mean << ',' << r.cm_count << ',' << r.n_reps << '\n';
    }
}

std::vector<SelectionReport> read_summary_csv(std::istream& in) {
    const CsvTable table = read_csv(in);
    const std::vector<std::string> expected = {"method", "te_mean", "te_sd", "te_se", "cz", "iz", "ms", "cm", "reps"};
    if (table.header != expected) {
        throw CsvError(1, "unexpected summary header");
    }
    std::vector<SelectionReport> out;
    for (size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        const size_t line = table.line_numbers[r];
        SelectionReport rep;
        rep.method = row[0];
        rep.test_error_mean = parse_double(row[1], line);
        rep.test_error_sd = parse_double(row[2], line);
        rep.test_error_se = parse_double(row[3], line);
        rep.cz_mean = parse_double(row[4], line);
        rep.iz_mean = parse_double(row[5], line);
        rep.ms_mean = parse_double(row[6], line);
        rep.cm_count = parse_long(row[7], line);
        rep.n_reps = parse_long(row[8], line);
        out.push_back(std::move(rep));
    }
    return out;
}

void write_frequency_csv(std::ostream& out, const std::vector<SelectionReport>& rows,
                         const std::vector<std::string>& names) {
    out << "method";
    for (const auto& n : names) {
        out << ',' << n;
    }
    out << '\n';
    for (const auto& r : rows) {
        if (r.selection_frequency.size() != names.size()) {
            throw DimensionError("frequency row for " + r.method + " has the wrong number of variables");
        }
        out << r.method;
        for (long c : r.selection_frequency) {
            out << ',' << c;
        }
        out << '\n';
    }
}

} // namespace supmsvm

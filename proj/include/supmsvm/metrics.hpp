#ifndef SUPMSVM_METRICS_HPP
#define SUPMSVM_METRICS_HPP

#include "supmsvm/core.hpp"
#include "supmsvm/simgen.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace supmsvm {

/// Outcome of one fitted model on one replication.
struct RepRecord {
    double test_error = 0.0;
    Eigen::Index correct_zeros = 0;   // CZ
    Eigen::Index incorrect_zeros = 0; // IZ
    Eigen::Index model_size = 0;      // MS
    bool correct_model = false;       // CM
    std::vector<bool> selected;       ///< per variable
};

/**
 * A coefficient counts as zero only if it is exactly 0 (decode has already
 * snapped near-zeros). A variable is selected when its column sup-norm is
 * positive.
 */
RepRecord evaluate_model(const CoefModel& model, const Dataset& test, const GroundTruth& truth);

struct SelectionReport {
    std::string method;
    double test_error_mean = 0.0;
    double test_error_sd = 0.0; ///< across replications
    double test_error_se = 0.0; ///< sd / sqrt(reps)
    double cz_mean = 0.0;
    double iz_mean = 0.0;
    double ms_mean = 0.0;
    long cm_count = 0;
    std::vector<long> selection_frequency;
    long n_reps = 0;
};

SelectionReport aggregate(const std::vector<RepRecord>& records, const std::string& method = {});

/// The row reported for the Bayes rule: its Monte-Carlo error and the true pattern.
SelectionReport bayes_report(const GroundTruth& truth, double bayes_error, long n_reps);

/// `method,te_mean,te_sd,te_se,cz,iz,ms,cm,reps`
void write_summary_csv(std::ostream& out, const std::vector<SelectionReport>& rows);
std::vector<SelectionReport> read_summary_csv(std::istream& in);

/// `method,<name_1>,...,<name_d>` with selection counts.
void write_frequency_csv(std::ostream& out, const std::vector<SelectionReport>& rows,
                         const std::vector<std::string>& names);

} // namespace supmsvm

#endif

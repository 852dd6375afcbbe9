#ifndef SUPMSVM_STUDY_HPP
#define SUPMSVM_STUDY_HPP

#include "supmsvm/metrics.hpp"
#include "supmsvm/select.hpp"
#include "supmsvm/simgen.hpp"

#include <string>
#include <vector>

/**
 * @file study.hpp
 * @brief Replicated simulation studies: every requested method is run on the
 * same per-replication data and summarised with the selection metrics.
 */

namespace supmsvm {

/// Method names accepted by a study: the penalty names plus "bayes".
const std::vector<std::string>& study_method_names();

/// Parses a comma-separated list; "all" expands to every method and
/// "bayes-only" to just the Bayes row. Throws on unknown names.
std::vector<std::string> parse_methods(const std::string& list);

struct StudyConfig {
    SimDesign design;         ///< design.seed is the base seed; replication r uses seed + r
    int reps = 10;
    std::vector<std::string> methods;
    LambdaGrid grid = LambdaGrid::standard();
    SelectOptions select;     ///< select.threads is ignored, replications are the unit of parallelism
    Eigen::Index bayes_mc = 50000;
    int threads = 1;
};

struct MethodRun {
    RepRecord record;
    CoefModel model;
    double lambda = 0.0;
    PenaltySpec spec;
};

struct StudyResult {
    std::vector<std::string> methods;                ///< fitted methods, in request order
    std::vector<std::vector<MethodRun>> runs;        ///< runs[method][rep]
    std::vector<SelectionReport> reports;            ///< one per method, Bayes row last when requested
    std::vector<std::string> variable_names;
    GroundTruth truth;
};

StudyResult run_study(const StudyConfig& config);

} // namespace supmsvm

#endif

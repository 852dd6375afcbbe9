#ifndef SUPMSVM_GENES_HPP
#define SUPMSVM_GENES_HPP

#include "supmsvm/core.hpp"
#include "supmsvm/select.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

/**
 * @file genes.hpp
 * @brief Microarray pipeline: standardisation on training statistics,
 * between/within sum-of-squares relevance ranking, top/bottom screening and
 * LOOCV-tuned fits on the screened genes.
 *
 * Expression files are genes-as-rows CSV: a header `gene,<sample ids...>`
 * followed by one row per gene. Label files are `sample,label` CSV.
 */

namespace supmsvm {

struct ExpressionMatrix {
    Matrix values; ///< genes x samples
    std::vector<std::string> gene_ids;
    std::vector<std::string> sample_ids;
    std::optional<std::vector<int>> sample_labels;

    Eigen::Index genes() const { return values.rows(); }
    Eigen::Index samples() const { return values.cols(); }

    /// Throws on non-finite values, duplicate gene ids or mismatched sizes.
    void validate() const;

    ExpressionMatrix select_genes(const std::vector<Eigen::Index>& rows) const;

    /// Samples become rows of a Dataset; gene ids become variable names.
    Dataset to_dataset(int k_classes = 0) const;
};

ExpressionMatrix read_expression_csv(std::istream& in);
ExpressionMatrix read_expression_file(const std::string& path);

/// Attaches labels from a `sample,label` table, matched by sample id.
void attach_labels(ExpressionMatrix& expr, std::istream& labels);
void attach_labels_file(ExpressionMatrix& expr, const std::string& path);

struct StandardizeResult {
    ExpressionMatrix train;
    ExpressionMatrix test;
    Vector means; ///< per kept gene, from training data
    Vector sds;   ///< per kept gene, sample sd (n - 1)
    std::vector<std::string> dropped_constant;
};

/**
 * @brief Centres and scales every gene with training mean and sample sd.
 * Genes with zero training sd are dropped from both matrices.
 */
StandardizeResult standardize(const ExpressionMatrix& train, const ExpressionMatrix& test);

/**
 * @brief Between-class over within-class sum of squares for every gene.
 * A gene with zero within-class sum of squares scores +inf (0/0 scores 0).
 */
std::vector<double> relevance(const ExpressionMatrix& train);

enum class ScreenGroup { Top, Bottom };

struct ScreenResult {
    std::vector<Eigen::Index> genes; ///< top group first (best first), then bottom (worst first)
    std::vector<ScreenGroup> groups;
};

/// Indices sorted by decreasing score, ties kept in gene order.
std::vector<Eigen::Index> rank_by_relevance(const std::vector<double>& scores);

ScreenResult screen(const std::vector<double>& scores, Eigen::Index top, Eigen::Index bottom);

struct SelectedGene {
    std::string gene_id;
    ScreenGroup group = ScreenGroup::Top;
    double relevance = 0.0;
    std::vector<double> coefficients; ///< one per class
};

struct GenePipelineResult {
    StandardizeResult standardized;
    std::vector<double> scores;  ///< relevance of each kept gene
    ScreenResult screened;       ///< indices into the kept genes
    TuneResult tuning;
    double test_error = 0.0;
    std::vector<SelectedGene> selected; ///< in screened (relevance-rank) order
    Eigen::Index top_selected = 0;
    Eigen::Index bottom_selected = 0;
};

struct GenePipelineOptions {
    Eigen::Index top = 100;
    Eigen::Index bottom = 100;
    PenaltyKind penalty = PenaltyKind::AdaptiveSupI;
    LambdaGrid grid = LambdaGrid::standard();
    SelectOptions select;
};

/**
 * @brief Standardise, rank, screen, LOOCV-tune (both stages for adaptive
 * penalties), then report test error and which screened genes survive.
 */
GenePipelineResult run_gene_pipeline(const ExpressionMatrix& train, const ExpressionMatrix& test,
                                     const GenePipelineOptions& options);

const char* to_string(ScreenGroup group);

void write_ranked_genes_csv(std::ostream& out, const GenePipelineResult& result);
void write_selected_genes_csv(std::ostream& out, const GenePipelineResult& result);

} // namespace supmsvm

#endif

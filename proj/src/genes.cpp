#include "supmsvm/genes.hpp"

#include "supmsvm/csv.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numeric>
#include <ostream>
#include <set>
#include <stdexcept>
#include <unordered_map>

namespace supmsvm {

void ExpressionMatrix::validate() const {
    if (static_cast<Eigen::Index>(gene_ids.size()) != values.rows()) {
        throw DimensionError("expression matrix has " + std::to_string(values.rows()) + " gene rows but " +
                             std::to_string(gene_ids.size()) + " gene ids");
    }
    if (static_cast<Eigen::Index>(sample_ids.size()) != values.cols()) {
        throw DimensionError("expression matrix has " + std::to_string(values.cols()) + " sample columns but " +
                             std::to_string(sample_ids.size()) + " sample ids");
    }
    if (sample_labels && static_cast<Eigen::Index>(sample_labels->size()) != values.cols()) {
        throw DimensionError("expression matrix has " + std::to_string(values.cols()) + " samples but " +
                             std::to_string(sample_labels->size()) + " labels");
    }
    if (!values.allFinite()) {
        throw std::invalid_argument("expression matrix contains non-finite values");
    }
    std::set<std::string> seen;
    for (const auto& id : gene_ids) {
        if (!seen.insert(id).second) {
            throw std::invalid_argument("duplicate gene id '" + id + "'");
        }
    }
}

ExpressionMatrix ExpressionMatrix::select_genes(const std::vector<Eigen::Index>& rows) const {
    ExpressionMatrix out;
    out.values.resize(static_cast<Eigen::Index>(rows.size()), values.cols());
    for (size_t r = 0; r < rows.size(); ++r) {
        if (rows[r] < 0 || rows[r] >= values.rows()) {
            throw std::out_of_range("gene index out of range");
        }
        out.values.row(static_cast<Eigen::Index>(r)) = values.row(rows[r]);
        out.gene_ids.push_back(gene_ids[static_cast<size_t>(rows[r])]);
    }
    out.sample_ids = sample_ids;
    out.sample_labels = sample_labels;
    return out;
}

Dataset ExpressionMatrix::to_dataset(int k_classes) const {
    if (!sample_labels) {
        throw std::invalid_argument("expression matrix has no sample labels");
    }
    int k = k_classes;
    if (k == 0) {
        k = sample_labels->empty() ? 0 : *std::max_element(sample_labels->begin(), sample_labels->end());
    }
    return Dataset(values.transpose(), *sample_labels, k, gene_ids);
}

ExpressionMatrix read_expression_csv(std::istream& in) {
    const CsvTable table = read_csv(in);
    if (table.header.size() < 2) {
        throw CsvError(1, "expression header needs a gene column and at least one sample");
    }
    ExpressionMatrix out;
    out.sample_ids.assign(table.header.begin() + 1, table.header.end());
    const auto samples = static_cast<Eigen::Index>(out.sample_ids.size());
    out.values.resize(static_cast<Eigen::Index>(table.rows.size()), samples);
    std::set<std::string> seen;
    for (size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        const size_t line = table.line_numbers[r];
        if (!seen.insert(row[0]).second) {
            throw CsvError(line, "duplicate gene id '" + row[0] + "'");
        }
        out.gene_ids.push_back(row[0]);
        for (Eigen::Index s = 0; s < samples; ++s) {
            const std::string& tok = row[static_cast<size_t>(s) + 1];
            const double v = parse_double(tok, line);
            if (!std::isfinite(v)) {
                throw CsvError(line, "non-finite value '" + tok + "'");
            }
            out.values(static_cast<Eigen::Index>(r), s) = v;
        }
    }
    return out;
}

ExpressionMatrix read_expression_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open '" + path + "'");
    }
    return read_expression_csv(in);
}

void attach_labels(ExpressionMatrix& expr, std::istream& labels) {
    const CsvTable table = read_csv(labels);
    if (table.header.size() != 2) {
        throw CsvError(1, "label file must have two columns: sample,label");
    }
    std::unordered_map<std::string, int> by_sample;
    for (size_t r = 0; r < table.rows.size(); ++r) {
        const size_t line = table.line_numbers[r];
        const long y = parse_long(table.rows[r][1], line);
        if (y < 1) {
            throw CsvError(line, "labels must be integers >= 1");
        }
        if (!by_sample.emplace(table.rows[r][0], static_cast<int>(y)).second) {
            throw CsvError(line, "duplicate sample '" + table.rows[r][0] + "'");
        }
    }
    std::vector<int> out;
    out.reserve(expr.sample_ids.size());
    for (const auto& s : expr.sample_ids) {
        const auto it = by_sample.find(s);
        if (it == by_sample.end()) {
            throw std::invalid_argument("no label for sample '" + s + "'");
        }
        out.push_back(it->second);
    }
    expr.sample_labels = std::move(out);
}

void attach_labels_file(ExpressionMatrix& expr, const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open '" + path + "'");
    }
    attach_labels(expr, in);
}

StandardizeResult standardize(const ExpressionMatrix& train, const ExpressionMatrix& test) {
    train.validate();
    test.validate();
    if (train.gene_ids != test.gene_ids) {
        throw DimensionError("training and test expression matrices must list the same genes in the same order");
    }
    if (train.samples() < 2) {
        throw std::invalid_argument("standardization needs at least two training samples");
    }
    StandardizeResult res;
    std::vector<Eigen::Index> keep;
    std::vector<double> means;
    std::vector<double> sds;
    const auto n = static_cast<double>(train.samples());
    for (Eigen::Index g = 0; g < train.genes(); ++g) {
        const double mean = train.values.row(g).sum() / n;
        const double ss = (train.values.row(g).array() - mean).square().sum();
        const double sd = std::sqrt(ss / (n - 1.0));
        if (sd == 0.0) {
            res.dropped_constant.push_back(train.gene_ids[static_cast<size_t>(g)]);
            continue;
        }
        keep.push_back(g);
        means.push_back(mean);
        sds.push_back(sd);
    }
    res.train = train.select_genes(keep);
    res.test = test.select_genes(keep);
    res.means = Eigen::Map<const Vector>(means.data(), static_cast<Eigen::Index>(means.size()));
    res.sds = Eigen::Map<const Vector>(sds.data(), static_cast<Eigen::Index>(sds.size()));
    for (Eigen::Index g = 0; g < res.train.genes(); ++g) {
        res.train.values.row(g) = (res.train.values.row(g).array() - res.means(g)) / res.sds(g);
        res.test.values.row(g) = (res.test.values.row(g).array() - res.means(g)) / res.sds(g);
    }
    return res;
}

std::vector<double> relevance(const ExpressionMatrix& train) {
    train.validate();
    if (!train.sample_labels) {
        throw std::invalid_argument("relevance needs labelled training samples");
    }
    const auto& y = *train.sample_labels;
    const int k = y.empty() ? 0 : *std::max_element(y.begin(), y.end());
    std::vector<double> counts(static_cast<size_t>(k), 0.0);
    for (int label : y) {
        counts[static_cast<size_t>(label - 1)] += 1.0;
    }
    const auto n = static_cast<double>(train.samples());
    std::vector<double> scores(static_cast<size_t>(train.genes()), 0.0);
    std::vector<double> class_sum(static_cast<size_t>(k));
    for (Eigen::Index g = 0; g < train.genes(); ++g) {
        std::fill(class_sum.begin(), class_sum.end(), 0.0);
        double total = 0.0;
        for (Eigen::Index i = 0; i < train.samples(); ++i) {
            const double v = train.values(g, i);
            class_sum[static_cast<size_t>(y[static_cast<size_t>(i)] - 1)] += v;
            total += v;
        }
        const double grand = total / n;
        double between = 0.0;
        for (int c = 0; c < k; ++c) {
            if (counts[static_cast<size_t>(c)] > 0.0) {
                const double m = class_sum[static_cast<size_t>(c)] / counts[static_cast<size_t>(c)];
                between += counts[static_cast<size_t>(c)] * (m - grand) * (m - grand);
            }
        }
        double within = 0.0;
        for (Eigen::Index i = 0; i < train.samples(); ++i) {
            const auto c = static_cast<size_t>(y[static_cast<size_t>(i)] - 1);
            const double diff = train.values(g, i) - class_sum[c] / counts[c];
            within += diff * diff;
        }
        double r = 0.0;
        if (within > 0.0) {
            r = between / within;
        } else if (between > 0.0) {
            r = std::numeric_limits<double>::infinity();
        }
        scores[static_cast<size_t>(g)] = r;
    }
    return scores;
}

std::vector<Eigen::Index> rank_by_relevance(const std::vector<double>& scores) {
    std::vector<Eigen::Index> order(scores.size());
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        return scores[static_cast<size_t>(a)] > scores[static_cast<size_t>(b)];
    });
    return order;
}

ScreenResult screen(const std::vector<double>& scores, Eigen::Index top, Eigen::Index bottom) {
    const auto g = static_cast<Eigen::Index>(scores.size());
    if (top < 0 || bottom < 0) {
        throw std::invalid_argument("screen counts must be non-negative");
    }
    if (top + bottom > g) {
        throw std::invalid_argument("top + bottom = " + std::to_string(top + bottom) + " exceeds the " +
                                    std::to_string(g) + " available genes");
    }
    const auto order = rank_by_relevance(scores);
    ScreenResult out;
    for (Eigen::Index i = 0; i < top; ++i) {
        out.genes.push_back(order[static_cast<size_t>(i)]);
        out.groups.push_back(ScreenGroup::Top);
    }
    for (Eigen::Index i = 0; i < bottom; ++i) {
        out.genes.push_back(order[static_cast<size_t>(g - 1 - i)]);
        out.groups.push_back(ScreenGroup::Bottom);
    }
    return out;
}

const char* to_string(ScreenGroup group) {
    return group == ScreenGroup::Top ? "top" : "bottom";
}

GenePipelineResult run_gene_pipeline(const ExpressionMatrix& train, const ExpressionMatrix& test,
                                     const GenePipelineOptions& options) {
    if (options.top + options.bottom <= 0) {
        throw std::invalid_argument("screen must keep at least one gene");
    }
    if (!train.sample_labels) {
        throw std::invalid_argument("training expression matrix has no labels");
    }
    GenePipelineResult res;
    res.standardized = standardize(train, test);
    res.scores = relevance(res.standardized.train);
    res.screened = screen(res.scores, options.top, options.bottom);

    const auto& y = *train.sample_labels;
    const int k = *std::max_element(y.begin(), y.end());
    const Dataset train_data = res.standardized.train.select_genes(res.screened.genes).to_dataset(k);

    if (is_adaptive(options.penalty)) {
        AdaptiveResult ad = fit_adaptive_pipeline(train_data, std::nullopt, options.penalty, options.grid,
                                                  options.select);
        res.tuning = std::move(ad.adaptive_stage);
    } else {
        res.tuning = tune_loocv(train_data, PenaltySpec::plain(options.penalty), options.grid, options.select);
    }

    if (res.standardized.test.sample_labels) {
        const Dataset test_data = res.standardized.test.select_genes(res.screened.genes).to_dataset(k);
        res.test_error = misclassification_rate(res.tuning.final_model, test_data);
    } else {
        res.test_error = std::numeric_limits<double>::quiet_NaN();
    }

    const CoefModel& m = res.tuning.final_model;
    for (size_t s = 0; s < res.screened.genes.size(); ++s) {
        const auto j = static_cast<Eigen::Index>(s);
        if ((m.w.col(j).array() != 0.0).any()) {
            SelectedGene gene;
            const Eigen::Index g = res.screened.genes[s];
            gene.gene_id = res.standardized.train.gene_ids[static_cast<size_t>(g)];
            gene.group = res.screened.groups[s];
            gene.relevance = res.scores[static_cast<size_t>(g)];
            for (Eigen::Index c = 0; c < m.k_classes(); ++c) {
                gene.coefficients.push_back(m.w(c, j));
            }
            (gene.group == ScreenGroup::Top ? res.top_selected : res.bottom_selected) += 1;
            res.selected.push_back(std::move(gene));
        }
    }
    return res;
}

void write_ranked_genes_csv(std::ostream& out, const GenePipelineResult& result) {
    const auto old = out.precision();
    out << std::setprecision(17);
    out << "rank,gene,relevance,group\n";
    const auto order = rank_by_relevance(result.scores);
    std::vector<const char*> tag(result.scores.size(), "");
    for (size_t s = 0; s < result.screened.genes.size(); ++s) {
        tag[static_cast<size_t>(result.screened.genes[s])] = to_string(result.screened.groups[s]);
    }
    for (size_t r = 0; r < order.size(); ++r) {
        const auto g = static_cast<size_t>(order[r]);
        out << r + 1 << ',' << result.standardized.train.gene_ids[g] << ',' << result.scores[g] << ','
            << (tag[g][0] ? tag[g] : "none") << '\n';
    }
    out.precision(old);
}

void write_selected_genes_csv(std::ostream& out, const GenePipelineResult& result) {
    const auto old = out.precision();
    out << std::setprecision(17);
    out << "gene,group,relevance";
    const Eigen::Index k = result.tuning.final_model.k_classes();
    for (Eigen::Index c = 1; c <= k; ++c) {
        out << ",w" << c;
    }
    out << '\n';
    for (const auto& g : result.selected) {
        out << g.gene_id << ',' << to_string(g.group) << ',' << g.relevance;
        for (double v : g.coefficients) {
            out << ',' << v;
        }
        out << '\n';
    }
    out.precision(old);
}

} // namespace supmsvm

#include "supmsvm/cli.hpp"

#include "supmsvm/csv.hpp"
#include "supmsvm/genes.hpp"
#include "supmsvm/lpmodel.hpp"
#include "supmsvm/model_io.hpp"
#include "supmsvm/simplex.hpp"
#include "supmsvm/study.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

namespace supmsvm {

namespace {

/// Bad input that should exit with the usage code.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

int default_threads() {
    const char* env = std::getenv(kThreadsEnv);
    if (env == nullptr || *env == '\0') {
        return 1;
    }
    try {
        const int v = std::stoi(env);
        return v < 0 ? 1 : v;
    } catch (const std::exception&) {
        return 1;
    }
}

LambdaGrid parse_grid(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) {
        throw UsageError("--grid expects lo:hi (log2 lambda bounds), got '" + text + "'");
    }
    try {
        const int lo = std::stoi(text.substr(0, colon));
        const int hi = std::stoi(text.substr(colon + 1));
        if (lo > hi) {
            throw UsageError("--grid lower bound exceeds upper bound");
        }
        return LambdaGrid::range(lo, hi);
    } catch (const UsageError&) {
        throw;
    } catch (const std::exception&) {
        throw UsageError("--grid expects integers lo:hi, got '" + text + "'");
    }
}

BasisSpec parse_basis(const std::string& name) {
    if (name == "linear") {
        return {1, true};
    }
    if (name == "poly2") {
        return {2, true};
    }
    if (name == "poly3") {
        return {3, true};
    }
    throw UsageError("unknown basis '" + name + "' (linear, poly2, poly3)");
}

PenaltyKind parse_penalty(const std::string& name) {
    try {
        return penalty_kind_from_string(name);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
}

std::ofstream open_out(const std::string& path) {
    std::ofstream f(path);
    if (!f) {
        throw std::runtime_error("cannot write '" + path + "'");
    }
    return f;
}

void write_lambda_table(std::ostream& out, const std::vector<LambdaError>& table) {
    out << "lambda,error,status\n" << std::setprecision(17);
    for (const auto& e : table) {
        out << e.lambda << ',' << (e.failed ? std::string("nan") : std::to_string(e.error)) << ','
            << (e.failed ? "failed" : "ok") << '\n';
    }
}

struct TrainArgs {
    std::string data;
    std::string penalty;
    std::string tune;
    bool loocv = false;
    std::string grid;
    std::optional<double> lambda;
    std::string basis = "linear";
    std::string out;
    std::string errors_csv;
    double eps_zero = kWeightZeroTolerance;
};

int cmd_train(const TrainArgs& a, int threads, std::ostream& out) {
    const PenaltyKind kind = parse_penalty(a.penalty);
    const BasisSpec basis = parse_basis(a.basis);
    if (a.tune.empty() && !a.loocv && !a.lambda) {
        throw UsageError("train needs one of --tune, --loocv or --lambda");
    }
    if (a.lambda && !(*a.lambda > 0.0)) {
        throw UsageError("--lambda must be positive");
    }
    const DatasetFile raw = read_dataset_file(a.data);
    const Dataset train_raw = raw.to_dataset();
    const Dataset train = expand_basis(train_raw, basis);
    std::optional<Dataset> tune_set;
    if (!a.tune.empty()) {
        const DatasetFile t = read_dataset_file(a.tune);
        if (t.names.size() != raw.names.size()) {
            throw DimensionError("tuning data has " + std::to_string(t.names.size()) + " columns, training data has " +
                                 std::to_string(raw.names.size()));
        }
        tune_set = expand_basis(t.to_dataset(train_raw.k_classes()), basis);
    }

    SelectOptions opts;
    opts.threads = threads;
    opts.eps_zero = a.eps_zero;

    SavedModel saved;
    saved.penalty = kind;
    saved.basis_degree = basis.degree;
    saved.input_names = raw.names;
    saved.names = train.names();
    if (a.lambda) {
        PenaltySpec spec = PenaltySpec::plain(PenaltyKind::L2);
        if (is_adaptive(kind)) {
            const CoefModel l2 = fit_penalized(train, *a.lambda, spec, opts);
            spec = adaptive_penalty(kind, l2, opts.eps_zero);
        } else {
            spec = PenaltySpec::plain(kind);
        }
        saved.model = fit_penalized(train, *a.lambda, spec, opts);
        saved.lambda = *a.lambda;
    } else {
        const LambdaGrid grid = a.grid.empty() ? LambdaGrid::standard() : parse_grid(a.grid);
        TuneResult res;
        if (is_adaptive(kind)) {
            res = fit_adaptive_pipeline(train, tune_set, kind, grid, opts).adaptive_stage;
        } else {
            res = tune(train, tune_set, PenaltySpec::plain(kind), grid, opts);
        }
        saved.model = res.final_model;
        saved.lambda = res.chosen_lambda;
        saved.lambda_table = res.per_lambda;
    }
    write_model_file(a.out, saved);
    if (!a.errors_csv.empty()) {
        auto f = open_out(a.errors_csv);
        write_lambda_table(f, saved.lambda_table);
    }
    Eigen::Index ms = 0;
    for (Eigen::Index j = 0; j < saved.model.d_vars(); ++j) {
        ms += (saved.model.w.col(j).array() != 0.0).any();
    }
    out << "penalty " << to_string(kind) << " lambda " << saved.lambda << " model_size " << ms << " of "
        << saved.model.d_vars() << '\n';
    return kExitOk;
}

int cmd_predict(const std::string& model_path, const std::string& data_path, const std::string& out_path,
                std::ostream& out, std::ostream& err) {
    const SavedModel saved = read_model_file(model_path);
    const DatasetFile data = read_dataset_file(data_path);
    if (data.names.size() != saved.input_names.size()) {
        throw DimensionError("model expects " + std::to_string(saved.input_names.size()) + " input columns, data has " +
                             std::to_string(data.names.size()));
    }
    const Matrix x = expand_features(data.features, BasisSpec{saved.basis_degree, true});
    if (x.cols() != saved.model.d_vars()) {
        throw DimensionError("expanded data has " + std::to_string(x.cols()) + " columns, model has " +
                             std::to_string(saved.model.d_vars()));
    }
    const std::vector<int> pred = predict_all(saved.model, x);
    std::ofstream file;
    std::ostream* dest = &out;
    if (!out_path.empty()) {
        file = open_out(out_path);
        dest = &file;
    }
    *dest << "row,predicted\n";
    for (size_t i = 0; i < pred.size(); ++i) {
        *dest << i + 1 << ',' << pred[i] << '\n';
    }
    if (data.labels) {
        long wrong = 0;
        for (size_t i = 0; i < pred.size(); ++i) {
            wrong += pred[i] != (*data.labels)[i];
        }
        const double rate = pred.empty() ? 0.0 : static_cast<double>(wrong) / static_cast<double>(pred.size());
        (out_path.empty() ? err : out) << "misclassification_rate " << std::setprecision(10) << rate << '\n';
    }
    return kExitOk;
}

struct SimulateArgs {
    std::string design;
    int reps = 10;
    std::optional<long> n;
    std::optional<long> n_tune;
    std::optional<long> n_test;
    std::string basis;
    std::string methods = "all";
    std::uint64_t seed = 1;
    std::string out_dir = ".";
    std::string grid;
    long bayes_mc = 50000;
};

int cmd_simulate(const SimulateArgs& a, int threads, std::ostream& out) {
    DesignKind kind;
    try {
        kind = design_kind_from_string(a.design);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    StudyConfig cfg;
    cfg.design = SimDesign::defaults(kind, a.seed);
    if (a.n) {
        cfg.design.n_train = *a.n;
        cfg.design.n_tune = *a.n;
    }
    if (a.n_tune) {
        cfg.design.n_tune = *a.n_tune;
    }
    if (a.n_test) {
        cfg.design.n_test = *a.n_test;
    }
    if (!a.basis.empty()) {
        cfg.design.basis = parse_basis(a.basis);
    }
    if (a.reps < 1) {
        throw UsageError("--reps must be at least 1");
    }
    cfg.reps = a.reps;
    try {
        cfg.methods = parse_methods(a.methods);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    if (!a.grid.empty()) {
        cfg.grid = parse_grid(a.grid);
    }
    cfg.bayes_mc = a.bayes_mc;
    cfg.threads = threads;
    const StudyResult res = run_study(cfg);

    std::filesystem::create_directories(a.out_dir);
    const std::string prefix = a.out_dir + "/" + to_string(kind);
    {
        auto f = open_out(prefix + "_summary.csv");
        write_summary_csv(f, res.reports);
    }
    {
        auto f = open_out(prefix + "_frequency.csv");
        write_frequency_csv(f, res.reports, res.variable_names);
    }
    write_summary_csv(out, res.reports);
    return kExitOk;
}

struct GenesArgs {
    std::string train_expr;
    std::string train_labels;
    std::string test_expr;
    std::string test_labels;
    long top = 100;
    long bottom = 100;
    std::string penalty = "adapt-sup1";
    std::string grid;
    std::string out_dir = ".";
};

int cmd_genes(const GenesArgs& a, int threads, std::ostream& out) {
    if (a.top < 0 || a.bottom < 0) {
        throw UsageError("--top and --bottom must be non-negative");
    }
    if (a.top + a.bottom == 0) {
        throw UsageError("--top and --bottom select no genes");
    }
    GenePipelineOptions opts;
    opts.top = a.top;
    opts.bottom = a.bottom;
    opts.penalty = parse_penalty(a.penalty);
    if (!a.grid.empty()) {
        opts.grid = parse_grid(a.grid);
    }
    opts.select.threads = threads;

    ExpressionMatrix train = read_expression_file(a.train_expr);
    attach_labels_file(train, a.train_labels);
    ExpressionMatrix test = read_expression_file(a.test_expr);
    if (!a.test_labels.empty()) {
        attach_labels_file(test, a.test_labels);
    }
    if (a.top + a.bottom > train.genes()) {
        throw UsageError("--top + --bottom exceeds the number of genes");
    }
    const GenePipelineResult res = run_gene_pipeline(train, test, opts);

    std::filesystem::create_directories(a.out_dir);
    {
        auto f = open_out(a.out_dir + "/ranked_genes.csv");
        write_ranked_genes_csv(f, res);
    }
    {
        auto f = open_out(a.out_dir + "/selected_genes.csv");
        write_selected_genes_csv(f, res);
    }
    {
        auto f = open_out(a.out_dir + "/screened_train.csv");
        write_dataset_csv(f, res.standardized.train.select_genes(res.screened.genes).to_dataset());
    }
    out << "penalty " << to_string(opts.penalty) << '\n';
    out << "lambda " << res.tuning.chosen_lambda << '\n';
    out << "dropped_constant " << res.standardized.dropped_constant.size() << '\n';
    if (!std::isnan(res.test_error)) {
        out << "test_error " << res.test_error << '\n';
    }
    out << "top_selected " << res.top_selected << " of " << a.top << '\n';
    out << "bottom_selected " << res.bottom_selected << " of " << a.bottom << '\n';
    return kExitOk;
}

int cmd_transpose(const std::string& expr_path, const std::string& labels_path, const std::string& out_path) {
    ExpressionMatrix expr = read_expression_file(expr_path);
    attach_labels_file(expr, labels_path);
    write_dataset_file(out_path, expr.to_dataset());
    return kExitOk;
}

int cmd_lp_dump(const std::string& data_path, const std::string& penalty, double lambda, const std::string& out_path) {
    const PenaltyKind kind = parse_penalty(penalty);
    if (kind != PenaltyKind::L1 && kind != PenaltyKind::SupNorm) {
        throw UsageError("lp-dump supports the l1 and supnorm penalties");
    }
    if (!(lambda > 0.0)) {
        throw UsageError("--lambda must be positive");
    }
    const Dataset data = read_dataset_file(data_path).to_dataset();
    const MsvmLp lp = build_lp(data, lambda, PenaltySpec::plain(kind));
    auto f = open_out(out_path);
    lp::write_dump(f, lp.program);
    return kExitOk;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app("Sparse multicategory SVMs with L1, sup-norm and adaptive penalties", "supmsvm");
    app.require_subcommand(1);
    int threads = default_threads();
    app.add_option("--threads", threads, "Worker threads, 0 = one per core (default from SUPMSVM_THREADS, else 1)")
        ->check(CLI::NonNegativeNumber);

    TrainArgs train;
    auto* train_cmd = app.add_subcommand("train", "Fit a model on a dataset CSV");
    train_cmd->add_option("--data", train.data, "Training dataset CSV")->required();
    train_cmd->add_option("--penalty", train.penalty, "l2, l1, supnorm, adapt-l1, adapt-sup1 or adapt-sup2")
        ->required();
    auto* tune_opt = train_cmd->add_option("--tune", train.tune, "Tuning dataset CSV for choosing lambda");
    train_cmd->add_flag("--loocv", train.loocv, "Choose lambda by leave-one-out cross validation")->excludes(tune_opt);
    train_cmd->add_option("--grid", train.grid, "log2(lambda) range lo:hi (default -14:15)");
    train_cmd->add_option("--lambda", train.lambda, "Fit at this lambda without tuning");
    train_cmd->add_option("--basis", train.basis, "Feature basis: linear, poly2 or poly3");
    train_cmd->add_option("--out", train.out, "Model file to write")->required();
    train_cmd->add_option("--errors-csv", train.errors_csv, "Also write the per-lambda tuning errors here");
    train_cmd->add_option("--eps-zero", train.eps_zero, "Relative threshold below which adaptive weights are infinite");

    std::string model_path;
    std::string predict_data;
    std::string predict_out;
    auto* predict_cmd = app.add_subcommand("predict", "Predict labels with a saved model");
    predict_cmd->add_option("--model", model_path, "Model file")->required();
    predict_cmd->add_option("--data", predict_data, "Dataset CSV (label column optional)")->required();
    predict_cmd->add_option("--out", predict_out, "Predictions CSV (default: standard output)");

    SimulateArgs sim;
    auto* sim_cmd = app.add_subcommand("simulate", "Run a replicated simulation study");
    sim_cmd->add_option("--design", sim.design, "five-class, four-class or nonlinear")->required();
    sim_cmd->add_option("--reps", sim.reps, "Number of replications");
    sim_cmd->add_option("--n", sim.n, "Training size (tuning size defaults to the same)");
    sim_cmd->add_option("--n-tune", sim.n_tune, "Tuning size");
    sim_cmd->add_option("--n-test", sim.n_test, "Test size");
    sim_cmd->add_option("--basis", sim.basis, "linear, poly2 or poly3 (default depends on the design)");
    sim_cmd->add_option("--methods", sim.methods, "Comma-separated methods, 'all' or 'bayes-only'");
    sim_cmd->add_option("--seed", sim.seed, "Base seed; replication r uses seed + r");
    sim_cmd->add_option("--out", sim.out_dir, "Output directory for the summary and frequency CSVs");
    sim_cmd->add_option("--grid", sim.grid, "log2(lambda) range lo:hi (default -14:15)");
    sim_cmd->add_option("--bayes-mc", sim.bayes_mc, "Monte-Carlo draws for the Bayes error")
        ->check(CLI::Range(1000L, 100000000L));

    GenesArgs genes;
    auto* genes_cmd = app.add_subcommand("genes", "Gene-expression screening and classification");
    genes_cmd->add_option("--train-expr", genes.train_expr, "Training expression CSV (genes as rows)")->required();
    genes_cmd->add_option("--train-labels", genes.train_labels, "Training labels CSV (sample,label)")->required();
    genes_cmd->add_option("--test-expr", genes.test_expr, "Test expression CSV (genes as rows)")->required();
    genes_cmd->add_option("--test-labels", genes.test_labels, "Test labels CSV (sample,label)");
    genes_cmd->add_option("--top", genes.top, "Number of highest-relevance genes kept");
    genes_cmd->add_option("--bottom", genes.bottom, "Number of lowest-relevance genes kept");
    genes_cmd->add_option("--penalty", genes.penalty, "Penalty of the final model");
    genes_cmd->add_option("--grid", genes.grid, "log2(lambda) range lo:hi (default -14:15)");
    genes_cmd->add_option("--out", genes.out_dir, "Output directory");

    std::string tr_expr;
    std::string tr_labels;
    std::string tr_out;
    auto* tr_cmd = app.add_subcommand("transpose", "Convert an expression matrix and labels to a dataset CSV");
    tr_cmd->add_option("--expr", tr_expr, "Expression CSV (genes as rows)")->required();
    tr_cmd->add_option("--labels", tr_labels, "Labels CSV (sample,label)")->required();
    tr_cmd->add_option("--out", tr_out, "Dataset CSV to write")->required();

    std::string dump_data;
    std::string dump_penalty;
    double dump_lambda = 1.0;
    std::string dump_out;
    auto* dump_cmd = app.add_subcommand("lp-dump", "Write the linear program for one fit in text form");
    dump_cmd->add_option("--data", dump_data, "Dataset CSV")->required();
    dump_cmd->add_option("--penalty", dump_penalty, "l1 or supnorm")->required();
    dump_cmd->add_option("--lambda", dump_lambda, "Regularisation parameter")->required();
    dump_cmd->add_option("--out", dump_out, "Dump file to write")->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*train_cmd) {
            return cmd_train(train, threads, out);
        }
        if (*predict_cmd) {
            return cmd_predict(model_path, predict_data, predict_out, out, err);
        }
        if (*sim_cmd) {
            return cmd_simulate(sim, threads, out);
        }
        if (*genes_cmd) {
            return cmd_genes(genes, threads, out);
        }
        if (*tr_cmd) {
            return cmd_transpose(tr_expr, tr_labels, tr_out);
        }
        if (*dump_cmd) {
            return cmd_lp_dump(dump_data, dump_penalty, dump_lambda, dump_out);
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const CsvError& e) {
        err << "error: malformed CSV, " << e.what() << '\n';
        return kExitUsage;
    } catch (const ModelFormatError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitUsage;
}

int run_cli(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) {
        args.emplace_back(argv[i]);
    }
    return run_cli(args, std::cout, std::cerr);
}

} // namespace supmsvm

#include "supmsvm/genes.hpp"
#include "supmsvm/lpmodel.hpp"
#include "supmsvm/metrics.hpp"
#include "supmsvm/select.hpp"
#include "supmsvm/simgen.hpp"
#include "supmsvm/simplex.hpp"
#include "supmsvm/study.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <limits>

namespace py = pybind11;
using namespace supmsvm;

namespace {

LambdaGrid grid_from(const std::optional<std::vector<int>>& log2_values) {
    LambdaGrid g = log2_values ? LambdaGrid{*log2_values} : LambdaGrid::standard();
    g.validate();
    return g;
}

SelectOptions options_from(int threads, double eps_zero) {
    SelectOptions o;
    o.threads = threads;
    o.eps_zero = eps_zero;
    return o;
}

lp::Sense parse_sense(const std::string& s) {
    if (s == "<=") {
        return lp::Sense::LE;
    }
    if (s == ">=") {
        return lp::Sense::GE;
    }
    if (s == "=") {
        return lp::Sense::EQ;
    }
    throw std::invalid_argument("sense must be <=, >= or =");
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Sparse multicategory SVMs fitted by linear programming";

    py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);

    py::enum_<PenaltyKind>(m, "PenaltyKind")
        .value("L2", PenaltyKind::L2)
        .value("L1", PenaltyKind::L1)
        .value("SUPNORM", PenaltyKind::SupNorm)
        .value("ADAPTIVE_L1", PenaltyKind::AdaptiveL1)
        .value("ADAPTIVE_SUP_I", PenaltyKind::AdaptiveSupI)
        .value("ADAPTIVE_SUP_II", PenaltyKind::AdaptiveSupII);
    m.def("penalty_kind", &penalty_kind_from_string, py::arg("name"));

    py::enum_<DesignKind>(m, "DesignKind")
        .value("FIVE_CLASS", DesignKind::FiveClass)
        .value("FOUR_CLASS", DesignKind::FourClassLinear)
        .value("NONLINEAR", DesignKind::NonlinearThreeClass);
    m.def("design_kind", &design_kind_from_string, py::arg("name"));

    py::class_<Dataset>(m, "Dataset")
        .def(py::init<Matrix, std::vector<int>, int, std::vector<std::string>>(), py::arg("features"),
             py::arg("labels"), py::arg("k_classes"), py::arg("names") = std::vector<std::string>{})
        .def_property_readonly("features", &Dataset::features)
        .def_property_readonly("labels", &Dataset::labels)
        .def_property_readonly("k_classes", &Dataset::k_classes)
        .def_property_readonly("names", &Dataset::names)
        .def_property_readonly("n", &Dataset::n)
        .def_property_readonly("d", &Dataset::d)
        .def("__repr__", [](const Dataset& d) {
            return "<Dataset n=" + std::to_string(d.n()) + " d=" + std::to_string(d.d()) +
                   " K=" + std::to_string(d.k_classes()) + ">";
        });

    py::class_<CoefModel>(m, "CoefModel")
        .def(py::init<Matrix, Vector>(), py::arg("w"), py::arg("b"))
        .def_readwrite("w", &CoefModel::w)
        .def_readwrite("b", &CoefModel::b)
        .def_property_readonly("k_classes", &CoefModel::k_classes)
        .def_property_readonly("d_vars", &CoefModel::d_vars)
        .def("predict", [](const CoefModel& model, const Matrix& x) { return predict_all(model, x); },
             py::arg("features"))
        .def("error", &misclassification_rate, py::arg("data"));

    py::class_<PenaltySpec>(m, "PenaltySpec")
        .def_readonly("kind", &PenaltySpec::kind)
        .def_readonly("tau_matrix", &PenaltySpec::tau_matrix)
        .def_readonly("tau_vector", &PenaltySpec::tau_vector)
        .def_static("plain", &PenaltySpec::plain, py::arg("kind"))
        .def_static("adaptive_l1", &PenaltySpec::adaptive_l1, py::arg("tau"))
        .def_static("adaptive_sup_i", &PenaltySpec::adaptive_sup_i, py::arg("tau"))
        .def_static("adaptive_sup_ii", &PenaltySpec::adaptive_sup_ii, py::arg("tau"));

    py::class_<LambdaError>(m, "LambdaError")
        .def_readonly("lambda_", &LambdaError::lambda)
        .def_readonly("error", &LambdaError::error)
        .def_readonly("failed", &LambdaError::failed);

    py::class_<TuneResult>(m, "TuneResult")
        .def_readonly("chosen_lambda", &TuneResult::chosen_lambda)
        .def_readonly("per_lambda", &TuneResult::per_lambda)
        .def_readonly("model", &TuneResult::final_model)
        .def_readonly("spec", &TuneResult::spec)
        .def_readonly("fits", &TuneResult::fits);

    m.def("hinge_loss", &hinge_objective_loss, py::arg("model"), py::arg("data"));
    m.def("penalty_value", &penalty_value, py::arg("spec"), py::arg("model"));
    m.def("expand_basis",
          [](const Dataset& data, int degree) { return expand_basis(data, BasisSpec{degree, true}); },
          py::arg("data"), py::arg("degree"));
    m.def("basis_size", [](Eigen::Index d, int degree) { return basis_size(d, BasisSpec{degree, true}); },
          py::arg("d"), py::arg("degree"));

    m.def(
        "fit",
        [](const Dataset& data, double lambda, const PenaltySpec& spec) {
            py::gil_scoped_release release;
            return fit_penalized(data, lambda, spec);
        },
        py::arg("data"), py::arg("lambda_"), py::arg("spec"), "Fit at a single lambda.");
    m.def("adaptive_penalty", &adaptive_penalty, py::arg("kind"), py::arg("l2_model"),
          py::arg("eps_zero") = kWeightZeroTolerance);

    m.def(
        "tune",
        [](const Dataset& train, std::optional<Dataset> tune_set, PenaltyKind kind,
           std::optional<std::vector<int>> grid, int threads, double eps_zero) {
            const LambdaGrid g = grid_from(grid);
            const SelectOptions o = options_from(threads, eps_zero);
            py::gil_scoped_release release;
            if (is_adaptive(kind)) {
                return fit_adaptive_pipeline(train, tune_set, kind, g, o).adaptive_stage;
            }
            return tune(train, tune_set, PenaltySpec::plain(kind), g, o);
        },
        py::arg("train"), py::arg("tune") = std::nullopt, py::arg("kind") = PenaltyKind::SupNorm,
        py::arg("log2_grid") = std::nullopt, py::arg("threads") = 1, py::arg("eps_zero") = kWeightZeroTolerance,
        "Choose lambda on a tuning set, or by LOOCV when no tuning set is given.");

    m.def(
        "generate",
        [](DesignKind kind, Eigen::Index n_train, Eigen::Index n_tune, Eigen::Index n_test, std::uint64_t seed,
           std::optional<int> degree) {
            SimDesign d = SimDesign::defaults(kind, seed);
            d.n_train = n_train;
            d.n_tune = n_tune;
            d.n_test = n_test;
            if (degree) {
                d.basis = BasisSpec{*degree, true};
            }
            const SimData s = generate(d);
            return py::make_tuple(s.train, s.tune, s.test);
        },
        py::arg("kind"), py::arg("n_train"), py::arg("n_tune"), py::arg("n_test"), py::arg("seed") = 1,
        py::arg("degree") = std::nullopt, "Draw (train, tune, test) datasets from a simulation design.");
    m.def(
        "bayes_error",
        [](DesignKind kind, Eigen::Index n_mc, std::uint64_t seed) {
            const auto e = estimate_bayes_error(kind, n_mc, seed);
            return py::make_tuple(e.error, e.std_err);
        },
        py::arg("kind"), py::arg("n_mc") = 50000, py::arg("seed") = 1);

    m.def(
        "simulate",
        [](DesignKind kind, int reps, Eigen::Index n, Eigen::Index n_test, const std::string& methods,
           std::uint64_t seed, std::optional<std::vector<int>> grid, int threads) {
            StudyConfig c;
            c.design = SimDesign::defaults(kind, seed);
            c.design.n_train = n;
            c.design.n_tune = n;
            c.design.n_test = n_test;
            c.reps = reps;
            c.methods = parse_methods(methods);
            c.grid = grid_from(grid);
            c.threads = threads;
            StudyResult r;
            {
                py::gil_scoped_release release;
                r = run_study(c);
            }
            py::list rows;
            for (const auto& rep : r.reports) {
                py::dict row;
                row["method"] = rep.method;
                row["te"] = rep.test_error_mean;
                row["te_sd"] = rep.test_error_sd;
                row["cz"] = rep.cz_mean;
                row["iz"] = rep.iz_mean;
                row["ms"] = rep.ms_mean;
                row["cm"] = rep.cm_count;
                row["frequency"] = rep.selection_frequency;
                rows.append(row);
            }
            return rows;
        },
        py::arg("kind"), py::arg("reps"), py::arg("n"), py::arg("n_test"), py::arg("methods") = "all",
        py::arg("seed") = 1, py::arg("log2_grid") = std::nullopt, py::arg("threads") = 1,
        "Run a simulation study and return one summary dict per method.");

    m.def(
        "relevance",
        [](const Matrix& genes_by_samples, const std::vector<int>& labels) {
            ExpressionMatrix e;
            e.values = genes_by_samples;
            for (Eigen::Index g = 0; g < e.values.rows(); ++g) {
                e.gene_ids.push_back("g" + std::to_string(g + 1));
            }
            for (Eigen::Index s = 0; s < e.values.cols(); ++s) {
                e.sample_ids.push_back("s" + std::to_string(s + 1));
            }
            e.sample_labels = labels;
            return relevance(e);
        },
        py::arg("values"), py::arg("labels"), "Between/within sum-of-squares ratio of every gene (row).");
    m.def("screen",
          [](const std::vector<double>& scores, Eigen::Index top, Eigen::Index bottom) {
              const ScreenResult r = screen(scores, top, bottom);
              std::vector<std::string> groups;
              for (ScreenGroup g : r.groups) {
                  groups.emplace_back(to_string(g));
              }
              return py::make_tuple(r.genes, groups);
          },
          py::arg("scores"), py::arg("top"), py::arg("bottom"));

    m.def(
        "solve_lp",
        [](const Vector& costs, const Matrix& a, const std::vector<std::string>& senses, const Vector& rhs,
           std::optional<std::vector<bool>> free_vars) {
            lp::LinearProgram prog(costs.size(), a.rows());
            prog.costs = costs;
            prog.a_matrix = a;
            prog.rhs = rhs;
            if (senses.size() != prog.senses.size()) {
                throw DimensionError("need one sense per row");
            }
            for (size_t i = 0; i < senses.size(); ++i) {
                prog.senses[i] = parse_sense(senses[i]);
            }
            if (free_vars) {
                for (size_t j = 0; j < free_vars->size() && j < static_cast<size_t>(prog.lower.size()); ++j) {
                    if ((*free_vars)[j]) {
                        prog.lower[static_cast<Eigen::Index>(j)] = -std::numeric_limits<double>::infinity();
                    }
                }
            }
            const lp::LpSolution sol = lp::solve(prog);
            return py::make_tuple(std::string(lp::to_string(sol.status)), sol.x, sol.objective);
        },
        py::arg("costs"), py::arg("a"), py::arg("senses"), py::arg("rhs"), py::arg("free") = std::nullopt,
        "Minimise c.x subject to A x (<=,>=,=) b with x >= 0 except for free variables.");
}

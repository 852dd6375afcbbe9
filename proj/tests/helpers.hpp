#ifndef SUPMSVM_TESTS_HELPERS_HPP
#define SUPMSVM_TESTS_HELPERS_HPP

#include "supmsvm/core.hpp"
#include "supmsvm/genes.hpp"
#include "supmsvm/simplex.hpp"

#include <filesystem>
#include <random>
#include <string>
#include <vector>

namespace testing_helpers {

using supmsvm::Dataset;
using supmsvm::Matrix;

/// Gaussian features with class-dependent means on the first `informative` columns.
inline Dataset random_dataset(std::mt19937_64& gen, Eigen::Index n, Eigen::Index d, int k,
                              Eigen::Index informative = 1, double shift = 1.5) {
    std::normal_distribution<double> noise(0.0, 1.0);
    Matrix x(n, d);
    std::vector<int> y(static_cast<size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        const int label = static_cast<int>(i % k) + 1;
        y[static_cast<size_t>(i)] = label;
        for (Eigen::Index j = 0; j < d; ++j) {
            x(i, j) = noise(gen);
            if (j < informative) {
                x(i, j) += shift * std::cos(2.0 * 3.14159265358979 * label / k + static_cast<double>(j));
            }
        }
    }
    return Dataset(x, y, k);
}

/// Small LP with integer data: up to 8 variables and 8 rows, some free
/// variables and equality rows, often degenerate, infeasible or unbounded.
inline supmsvm::lp::LinearProgram random_lp(std::mt19937_64& gen) {
    using supmsvm::lp::Sense;
    std::uniform_int_distribution<int> size(1, 8);
    std::uniform_int_distribution<int> coef(-4, 4);
    std::uniform_int_distribution<int> rhs(-6, 10);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const Eigen::Index m = size(gen);
    const Eigen::Index p = size(gen);
    supmsvm::lp::LinearProgram lp(m, p);
    for (Eigen::Index j = 0; j < m; ++j) {
        lp.costs[j] = coef(gen);
        if (u(gen) < 0.15) {
            lp.lower[j] = -supmsvm::lp::kInfinity;
        }
    }
    for (Eigen::Index i = 0; i < p; ++i) {
        for (Eigen::Index j = 0; j < m; ++j) {
            lp.a_matrix(i, j) = u(gen) < 0.3 ? 0.0 : coef(gen);
        }
        const double r = u(gen);
        lp.senses[static_cast<size_t>(i)] = r < 0.6 ? Sense::LE : (r < 0.85 ? Sense::GE : Sense::EQ);
        lp.rhs[i] = rhs(gen);
    }
    return lp;
}

/**
 * Expression fixture with `informative` genes whose class means differ and
 * `noise` genes drawn independently of the class. Gene ids are `inf<i>` and
 * `noise<i>`; samples are balanced across `k` classes.
 */
inline supmsvm::ExpressionMatrix expression_fixture(std::mt19937_64& gen, int k, Eigen::Index per_class,
                                                     Eigen::Index informative, Eigen::Index noise,
                                                     const std::string& prefix) {
    std::normal_distribution<double> z(0.0, 1.0);
    supmsvm::ExpressionMatrix e;
    const Eigen::Index n = per_class * k;
    e.values.resize(informative + noise, n);
    std::vector<int> labels(static_cast<size_t>(n));
    for (Eigen::Index s = 0; s < n; ++s) {
        labels[static_cast<size_t>(s)] = static_cast<int>(s % k) + 1;
        e.sample_ids.push_back(prefix + std::to_string(s + 1));
    }
    for (Eigen::Index g = 0; g < informative + noise; ++g) {
        e.gene_ids.push_back(g < informative ? "inf" + std::to_string(g + 1) : "noise" + std::to_string(g - informative + 1));
        for (Eigen::Index s = 0; s < n; ++s) {
            double v = 5.0 + z(gen);
            if (g < informative) {
                const int c = labels[static_cast<size_t>(s)] - 1;
                v += (c == g % k ? 3.0 : 0.0);
            }
            e.values(g, s) = v;
        }
    }
    e.sample_labels = labels;
    return e;
}

/// Nine points, three classes, two variables.
inline Dataset l2_toy() {
    Matrix x(9, 2);
    x << -1.0, 0.2,
         -1.2, -0.4,
         -0.6, 0.5,
          1.1, 0.1,
          0.9, -0.3,
          0.3, 0.2,
          0.1, 1.3,
         -0.2, 0.9,
          0.4, 1.1;
    return Dataset(x, {1, 1, 1, 2, 2, 2, 3, 3, 3}, 3);
}

// Six free parameters: rows 1-2 of W and b, row 3 fixed by sum-to-zero.
inline supmsvm::CoefModel l2_toy_model(const std::vector<double>& p) {
    Matrix w(3, 2);
    w << p[0], p[1], p[2], p[3], -p[0] - p[2], -p[1] - p[3];
    supmsvm::Vector b(3);
    b << p[4], p[5], -p[4] - p[5];
    return supmsvm::CoefModel(w, b);
}

/// Three genes on six samples, two per class.
inline supmsvm::ExpressionMatrix gene_hand_fixture() {
    supmsvm::ExpressionMatrix e;
    e.values.resize(3, 6);
    e.values << 1.0, 2.0, 4.0, 5.0, 9.0, 7.0,
                3.0, 3.5, 2.0, 1.0, 0.5, 4.0,
                0.1, -0.2, 0.3, 0.0, 0.2, -0.1;
    e.gene_ids = {"a", "b", "c"};
    e.sample_ids = {"s1", "s2", "s3", "s4", "s5", "s6"};
    e.sample_labels = std::vector<int>{1, 1, 2, 2, 3, 3};
    return e;
}

/// Fresh empty directory under the system temp directory.
inline std::filesystem::path scratch_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / ("supmsvm_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

} // namespace testing_helpers

#endif

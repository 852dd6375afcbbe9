#include "supmsvm/simgen.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace supmsvm {

namespace {

constexpr std::uint64_t kSplitTrain = 1;
constexpr std::uint64_t kSplitTune = 2;
constexpr std::uint64_t kSplitTest = 3;
constexpr std::uint64_t kSplitBayes = 4;

constexpr double kFiveClassSigma = std::numbers::sqrt2;

Eigen::Vector2d five_class_mean(int k) {
    const double angle = (2.0 * k - 1.0) * std::numbers::pi / 5.0;
    return {2.0 * std::cos(angle), 2.0 * std::sin(angle)};
}

} // namespace

const char* to_string(DesignKind kind) {
    switch (kind) {
    case DesignKind::FiveClass: return "five-class";
    case DesignKind::FourClassLinear: return "four-class";
    case DesignKind::NonlinearThreeClass: return "nonlinear";
    }
    return "unknown";
}

DesignKind design_kind_from_string(const std::string& name) {
    for (auto kind : {DesignKind::FiveClass, DesignKind::FourClassLinear, DesignKind::NonlinearThreeClass}) {
        if (name == to_string(kind)) {
            return kind;
        }
    }
    throw std::invalid_argument("unknown design '" + name + "'");
}

int design_classes(DesignKind kind) {
    switch (kind) {
    case DesignKind::FiveClass: return 5;
    case DesignKind::FourClassLinear: return 4;
    case DesignKind::NonlinearThreeClass: return 3;
    }
    return 0;
}

Eigen::Index design_inputs(DesignKind kind) {
    return kind == DesignKind::NonlinearThreeClass ? 5 : 10;
}

BasisSpec default_basis(DesignKind kind) {
    return kind == DesignKind::NonlinearThreeClass ? BasisSpec{2, true} : BasisSpec{1, true};
}

Rng::Rng(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    engine_.seed(seq);
}

double Rng::uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform();
}

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) {
        u1 = uniform();
    }
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(theta);
    has_spare_ = true;
    return radius * std::cos(theta);
}

double Rng::normal(double mean, double sd) {
    return mean + sd * normal();
}

int Rng::categorical_logits(const Vector& logits) {
    const double top = logits.maxCoeff();
    const Vector weights = (logits.array() - top).exp().matrix();
    double u = uniform() * weights.sum();
    for (Eigen::Index k = 0; k < weights.size(); ++k) {
        u -= weights[k];
        if (u < 0.0) {
            return static_cast<int>(k);
        }
    }
    return static_cast<int>(weights.size() - 1);
}

SimDesign SimDesign::defaults(DesignKind kind, std::uint64_t seed) {
    SimDesign d;
    d.kind = kind;
    d.seed = seed;
    d.basis = default_basis(kind);
    if (kind == DesignKind::FiveClass) {
        d.n_train = d.n_tune = 250;
        d.n_test = 50000;
    } else {
        d.n_train = d.n_tune = 200;
        d.n_test = 40000;
    }
    return d;
}

Eigen::Index GroundTruth::zero_count() const {
    return true_zero.count();
}

Vector design_logits(DesignKind kind, std::span<const double> x) {
    Vector f;
    switch (kind) {
    case DesignKind::FourClassLinear:
        f.resize(4);
        f << -5 * x[0] + 5 * x[3], 5 * x[0] + 5 * x[1], -5 * x[1] + 5 * x[2], -5 * x[2] - 5 * x[3];
        return f;
    case DesignKind::NonlinearThreeClass: {
        const double a = x[0];
        const double b = x[1];
        f.resize(3);
        f << -2 * a + 0.2 * a * a - 0.1 * b * b + 0.2, -0.4 * a * a + 0.2 * b * b - 0.4,
            2 * a + 0.2 * a * a - 0.1 * b * b + 0.2;
        return f;
    }
    case DesignKind::FiveClass: break;
    }
    throw std::invalid_argument("the five-class design has no logit form");
}

Dataset draw_raw(DesignKind kind, Eigen::Index n, Rng& rng, bool stratified) {
    const Eigen::Index d = design_inputs(kind);
    const int K = design_classes(kind);
    Matrix x(n, d);
    std::vector<int> y(static_cast<size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        switch (kind) {
        case DesignKind::FiveClass: {
            const int k = stratified ? static_cast<int>(i % K) + 1
                                     : static_cast<int>(rng.uniform() * K) + 1;
            const Eigen::Vector2d mu = five_class_mean(k);
            x(i, 0) = rng.normal(mu[0], kFiveClassSigma);
            x(i, 1) = rng.normal(mu[1], kFiveClassSigma);
            for (Eigen::Index j = 2; j < d; ++j) {
                x(i, j) = rng.normal();
            }
            y[static_cast<size_t>(i)] = k;
            break;
        }
        case DesignKind::FourClassLinear: {
            for (Eigen::Index j = 0; j < 4; ++j) {
                x(i, j) = rng.uniform(-1.0, 1.0);
            }
            for (Eigen::Index j = 4; j < d; ++j) {
                x(i, j) = rng.normal(0.0, 8.0);
            }
            const Vector xi = x.row(i);
            y[static_cast<size_t>(i)] = rng.categorical_logits(design_logits(kind, {xi.data(), 4})) + 1;
            break;
        }
        case DesignKind::NonlinearThreeClass: {
            x(i, 0) = rng.uniform(-3.0, 3.0);
            x(i, 1) = rng.uniform(-6.0, 6.0);
            for (Eigen::Index j = 2; j < d; ++j) {
                x(i, j) = rng.normal(0.0, 2.0);
            }
            const Vector xi = x.row(i);
            y[static_cast<size_t>(i)] = rng.categorical_logits(design_logits(kind, {xi.data(), 2})) + 1;
            break;
        }
        }
    }
    return Dataset(std::move(x), std::move(y), K);
}

GroundTruth ground_truth(DesignKind kind, const BasisSpec& basis) {
    const int K = design_classes(kind);
    const Eigen::Index raw = design_inputs(kind);
    const auto monos = basis_monomials(raw, basis);
    const auto q = static_cast<Eigen::Index>(monos.size());

    GroundTruth truth;
    truth.bayes = CoefModel::zero(K, q);
    auto column_of = [&](std::vector<Eigen::Index> mono) -> Eigen::Index {
        for (Eigen::Index c = 0; c < q; ++c) {
            if (monos[static_cast<size_t>(c)] == mono) {
                return c;
            }
        }
        return -1;
    };

    switch (kind) {
    case DesignKind::FiveClass: {
        // log N(x; mu_k, s^2 I) = mu_k . x / s^2 + const, and the means sum to zero
        const double s2 = kFiveClassSigma * kFiveClassSigma;
        for (int k = 0; k < K; ++k) {
            const Eigen::Vector2d mu = five_class_mean(k + 1);
            for (Eigen::Index j = 0; j < 2; ++j) {
                const Eigen::Index c = column_of({j});
                if (c >= 0) {
                    truth.bayes.w(k, c) = mu[j] / s2;
                }
            }
        }
        break;
    }
    case DesignKind::FourClassLinear: {
        const double coef[4][4] = {{-5, 0, 0, 5}, {5, 5, 0, 0}, {0, -5, 5, 0}, {0, 0, -5, -5}};
        for (int k = 0; k < K; ++k) {
            for (Eigen::Index j = 0; j < 4; ++j) {
                const Eigen::Index c = column_of({j});
                if (c >= 0) {
                    truth.bayes.w(k, c) = coef[k][j];
                }
            }
        }
        break;
    }
    case DesignKind::NonlinearThreeClass: {
        const double lin1[3] = {-2.0, 0.0, 2.0};
        const double sq1[3] = {0.2, -0.4, 0.2};
        const double sq2[3] = {-0.1, 0.2, -0.1};
        const Eigen::Index c1 = column_of({0});
        const Eigen::Index c11 = column_of({0, 0});
        const Eigen::Index c22 = column_of({1, 1});
        for (int k = 0; k < K; ++k) {
            if (c1 >= 0) {
                truth.bayes.w(k, c1) = lin1[k];
            }
            if (c11 >= 0) {
                truth.bayes.w(k, c11) = sq1[k];
            }
            if (c22 >= 0) {
                truth.bayes.w(k, c22) = sq2[k];
            }
        }
        truth.bayes.b << 0.2, -0.4, 0.2;
        break;
    }
    }

    // sin(pi) and friends land at ~1e-16 rather than 0
    truth.bayes.w = truth.bayes.w.unaryExpr([](double v) { return std::abs(v) < 1e-12 ? 0.0 : v; });
    truth.true_zero = truth.bayes.w.array() == 0.0;
    for (Eigen::Index j = 0; j < q; ++j) {
        if (!truth.true_zero.col(j).all()) {
            truth.relevant_vars.push_back(j);
        }
    }
    return truth;
}

SimData generate(const SimDesign& design) {
    if (design.n_train < 1 || design.n_tune < 1 || design.n_test < 1) {
        throw std::invalid_argument("simulation split sizes must be at least 1");
    }
    if (design.kind == DesignKind::FiveClass) {
        for (Eigen::Index n : {design.n_train, design.n_tune, design.n_test}) {
            if (n % 5 != 0) {
                throw std::invalid_argument("five-class split sizes must be divisible by 5 (got " + std::to_string(n) +
                                            ")");
            }
        }
    }
    auto split = [&](Eigen::Index n, std::uint64_t stream) {
        Rng rng(design.seed, stream);
        Dataset raw = draw_raw(design.kind, n, rng, true);
        return expand_basis(raw, design.basis);
    };
    Dataset train = split(design.n_train, kSplitTrain);
    Dataset tune = split(design.n_tune, kSplitTune);
    Dataset test = split(design.n_test, kSplitTest);
    return {std::move(train), std::move(tune), std::move(test), ground_truth(design.kind, design.basis)};
}

int bayes_predict(DesignKind kind, std::span<const double> x) {
    if (kind == DesignKind::FiveClass) {
        if (x.size() < 2) {
            throw DimensionError("feature axis mismatch: the five-class Bayes rule needs x1 and x2");
        }
        // equal priors and covariances: the nearest mean wins
        int best = 1;
        double best_dist = std::numeric_limits<double>::infinity();
        for (int k = 1; k <= 5; ++k) {
            const Eigen::Vector2d mu = five_class_mean(k);
            const double dist = (x[0] - mu[0]) * (x[0] - mu[0]) + (x[1] - mu[1]) * (x[1] - mu[1]);
            if (dist < best_dist) {
                best_dist = dist;
                best = k;
            }
        }
        return best;
    }
    const size_t needed = kind == DesignKind::FourClassLinear ? 4 : 2;
    if (x.size() < needed) {
        throw DimensionError("feature axis mismatch: Bayes rule needs " + std::to_string(needed) + " inputs");
    }
    const Vector f = design_logits(kind, x);
    Eigen::Index best = 0;
    for (Eigen::Index k = 1; k < f.size(); ++k) {
        if (f[k] > f[best]) {
            best = k;
        }
    }
    return static_cast<int>(best) + 1;
}

BayesErrorEstimate estimate_bayes_error(DesignKind kind, Eigen::Index n_mc, std::uint64_t seed) {
    if (n_mc < 1000) {
        throw std::invalid_argument("Monte-Carlo Bayes error needs at least 1000 draws");
    }
    Rng rng(seed, kSplitBayes);
    const Dataset draws = draw_raw(kind, n_mc, rng, false);
    Eigen::Index wrong = 0;
    for (Eigen::Index i = 0; i < n_mc; ++i) {
        const Vector xi = draws.features().row(i);
        wrong += bayes_predict(kind, {xi.data(), static_cast<size_t>(xi.size())}) !=
                 draws.labels()[static_cast<size_t>(i)];
    }
    BayesErrorEstimate out;
    out.error = static_cast<double>(wrong) / static_cast<double>(n_mc);
    out.std_err = std::sqrt(out.error * (1.0 - out.error) / static_cast<double>(n_mc));
    return out;
}

} // namespace supmsvm

#include "supmsvm/model_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace supmsvm {

namespace {

constexpr const char* kMagic = "supmsvm-model";
constexpr int kVersion = 1;

std::string fmt(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

class LineReader {
public:
    explicit LineReader(std::istream& in) : in_(in) {}

    std::string next() {
        std::string line;
        while (std::getline(in_, line)) {
            ++lineno_;
            if (!line.empty() && line.back() == '\r') {
                line.pop_back();
            }
            if (!line.empty() && line[0] != '#') {
                return line;
            }
        }
        throw ModelFormatError(lineno_, "unexpected end of model file");
    }

    /// Reads `key value` and returns value.
    std::string keyed(const std::string& key) {
        const std::string line = next();
        const auto sp = line.find(' ');
        if (line.substr(0, sp) != key || sp == std::string::npos) {
            fail("expected '" + key + " <value>'");
        }
        return line.substr(sp + 1);
    }

    double number(const std::string& token) {
        try {
            size_t used = 0;
            const double v = std::stod(token, &used);
            if (used != token.size()) {
                throw std::invalid_argument(token);
            }
            return v;
        } catch (const std::exception&) {
            fail("not a number: '" + token + "'");
        }
    }

    long integer(const std::string& token) {
        try {
            size_t used = 0;
            const long v = std::stol(token, &used);
            if (used != token.size()) {
                throw std::invalid_argument(token);
            }
            return v;
        } catch (const std::exception&) {
            fail("not an integer: '" + token + "'");
        }
    }

    std::vector<double> numbers(std::size_t expected) {
        std::istringstream ss(next());
        std::vector<double> out;
        std::string tok;
        while (ss >> tok) {
            out.push_back(number(tok));
        }
        if (out.size() != expected) {
            fail("expected " + std::to_string(expected) + " values, found " + std::to_string(out.size()));
        }
        return out;
    }

    [[noreturn]] void fail(const std::string& what) const { throw ModelFormatError(lineno_, what); }

private:
    std::istream& in_;
    std::size_t lineno_ = 0;
};

} // namespace

ModelFormatError::ModelFormatError(std::size_t line, const std::string& what)
    : std::runtime_error("model file line " + std::to_string(line) + ": " + what), line_(line) {}

void write_model(std::ostream& out, const SavedModel& s) {
    const CoefModel& m = s.model;
    if (static_cast<Eigen::Index>(s.names.size()) != m.d_vars()) {
        throw DimensionError("model has " + std::to_string(m.d_vars()) + " columns but " +
                             std::to_string(s.names.size()) + " names");
    }
    out << kMagic << ' ' << kVersion << '\n';
    out << "penalty " << to_string(s.penalty) << '\n';
    out << "lambda " << fmt(s.lambda) << '\n';
    out << "classes " << m.k_classes() << '\n';
    out << "basis " << s.basis_degree << '\n';
    out << "inputs " << s.input_names.size() << '\n';
    for (const auto& n : s.input_names) {
        out << "input " << n << '\n';
    }
    out << "vars " << m.d_vars() << '\n';
    for (const auto& n : s.names) {
        out << "var " << n << '\n';
    }
    out << "w\n";
    for (Eigen::Index k = 0; k < m.k_classes(); ++k) {
        for (Eigen::Index j = 0; j < m.d_vars(); ++j) {
            out << (j ? " " : "") << fmt(m.w(k, j));
        }
        out << '\n';
    }
    out << "b\n";
    for (Eigen::Index k = 0; k < m.k_classes(); ++k) {
        out << (k ? " " : "") << fmt(m.b(k));
    }
    out << '\n';
    out << "grid " << s.lambda_table.size() << '\n';
    for (const auto& e : s.lambda_table) {
        out << fmt(e.lambda) << ' ' << (e.failed ? "nan" : fmt(e.error)) << ' ' << (e.failed ? "failed" : "ok")
            << '\n';
    }
    out << "end\n";
}

SavedModel read_model(std::istream& in) {
    LineReader r(in);
    SavedModel s;
    {
        std::istringstream ss(r.next());
        std::string magic;
        int version = 0;
        if (!(ss >> magic >> version) || magic != kMagic) {
            r.fail("not a supmsvm model file");
        }
        if (version != kVersion) {
            r.fail("unsupported model version " + std::to_string(version));
        }
    }
    try {
        s.penalty = penalty_kind_from_string(r.keyed("penalty"));
    } catch (const std::invalid_argument& e) {
        r.fail(e.what());
    }
    s.lambda = r.number(r.keyed("lambda"));
    const long k = r.integer(r.keyed("classes"));
    if (k < 2) {
        r.fail("need at least two classes");
    }
    s.basis_degree = static_cast<int>(r.integer(r.keyed("basis")));
    if (s.basis_degree < 1 || s.basis_degree > 3) {
        r.fail("unsupported basis degree");
    }
    const long p = r.integer(r.keyed("inputs"));
    if (p < 0) {
        r.fail("negative input count");
    }
    for (long i = 0; i < p; ++i) {
        s.input_names.push_back(r.keyed("input"));
    }
    const long d = r.integer(r.keyed("vars"));
    if (d < 0) {
        r.fail("negative variable count");
    }
    for (long j = 0; j < d; ++j) {
        s.names.push_back(r.keyed("var"));
    }
    if (r.next() != "w") {
        r.fail("expected 'w'");
    }
    Matrix w(k, d);
    for (long c = 0; c < k; ++c) {
        const auto row = r.numbers(static_cast<std::size_t>(d));
        for (long j = 0; j < d; ++j) {
            w(c, j) = row[static_cast<std::size_t>(j)];
        }
    }
    if (r.next() != "b") {
        r.fail("expected 'b'");
    }
    const auto bv = r.numbers(static_cast<std::size_t>(k));
    Vector b = Eigen::Map<const Vector>(bv.data(), k);
    if (!w.allFinite() || !b.allFinite()) {
        r.fail("non-finite coefficient");
    }
    s.model = CoefModel(std::move(w), std::move(b));
    const long g = r.integer(r.keyed("grid"));
    for (long i = 0; i < g; ++i) {
        std::istringstream ss(r.next());
        std::string lam;
        std::string err;
        std::string status;
        if (!(ss >> lam >> err >> status) || (status != "ok" && status != "failed")) {
            r.fail("expected '<lambda> <error> ok|failed'");
        }
        LambdaError e;
        e.lambda = r.number(lam);
        e.failed = status == "failed";
        e.error = e.failed ? 0.0 : r.number(err);
        s.lambda_table.push_back(e);
    }
    if (r.next() != "end") {
        r.fail("expected 'end'");
    }
    return s;
}

void write_model_file(const std::string& path, const SavedModel& saved) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write '" + path + "'");
    }
    write_model(out, saved);
}

SavedModel read_model_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open '" + path + "'");
    }
    return read_model(in);
}

} // namespace supmsvm

#include "supmsvm/csv.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

namespace supmsvm {

CsvError::CsvError(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line), reason_(what) {}

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) {
        out.push_back(trim(field));
    }
    if (!line.empty() && line.back() == ',') {
        out.emplace_back();
    }
    return out;
}

} // namespace

CsvTable read_csv(std::istream& in) {
    CsvTable table;
    std::string line;
    std::size_t lineno = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) {
            continue;
        }
        auto fields = split_fields(line);
        if (!have_header) {
            table.header = std::move(fields);
            have_header = true;
            continue;
        }
        if (fields.size() != table.header.size()) {
            throw CsvError(lineno, "expected " + std::to_string(table.header.size()) + " fields, found " +
                                       std::to_string(fields.size()));
        }
        table.rows.push_back(std::move(fields));
        table.line_numbers.push_back(lineno);
    }
    if (!have_header) {
        throw CsvError(lineno == 0 ? 1 : lineno, "missing header row");
    }
    return table;
}

CsvTable read_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open '" + path + "'");
    }
    try {
        return read_csv(in);
    } catch (const CsvError& e) {
        throw CsvError(e.line(), e.reason() + " (" + path + ")");
    }
}

double parse_double(const std::string& token, std::size_t line) {
    try {
        size_t used = 0;
        const double v = std::stod(token, &used);
        if (used != token.size()) {
            throw std::invalid_argument(token);
        }
        return v;
    } catch (const std::exception&) {
        throw CsvError(line, "not a number: '" + token + "'");
    }
}

long parse_long(const std::string& token, std::size_t line) {
    try {
        size_t used = 0;
        const long v = std::stol(token, &used);
        if (used != token.size()) {
            throw std::invalid_argument(token);
        }
        return v;
    } catch (const std::exception&) {
        throw CsvError(line, "not an integer: '" + token + "'");
    }
}

Dataset DatasetFile::to_dataset(int k_classes) const {
    if (!labels) {
        throw std::invalid_argument("dataset file has no label column");
    }
    int k = k_classes;
    if (k == 0) {
        k = labels->empty() ? 0 : *std::max_element(labels->begin(), labels->end());
    }
    return Dataset(features, *labels, k, names);
}

DatasetFile read_dataset_csv(std::istream& in) {
    const CsvTable table = read_csv(in);
    DatasetFile out;
    auto header = table.header;
    const bool labelled = !header.empty() && header.back() == "label";
    if (labelled) {
        header.pop_back();
    }
    if (header.empty()) {
        throw CsvError(1, "dataset header needs at least one variable column");
    }
    out.names = header;
    const auto d = static_cast<Eigen::Index>(header.size());
    out.features.resize(static_cast<Eigen::Index>(table.rows.size()), d);
    std::vector<int> labels;
    for (size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        const size_t line = table.line_numbers[r];
        for (Eigen::Index j = 0; j < d; ++j) {
            const double v = parse_double(row[static_cast<size_t>(j)], line);
            if (!std::isfinite(v)) {
                throw CsvError(line, "non-finite value '" + row[static_cast<size_t>(j)] + "'");
            }
            out.features(static_cast<Eigen::Index>(r), j) = v;
        }
        if (labelled) {
            const long y = parse_long(row.back(), line);
            if (y < 1) {
                throw CsvError(line, "labels must be integers >= 1");
            }
            labels.push_back(static_cast<int>(y));
        }
    }
    if (labelled) {
        out.labels = std::move(labels);
    }
    return out;
}

DatasetFile read_dataset_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open '" + path + "'");
    }
    return read_dataset_csv(in);
}

void write_dataset_csv(std::ostream& out, const Dataset& data) {
    const auto old = out.precision();
    out << std::setprecision(17);
    for (const auto& name : data.names()) {
        out << name << ',';
    }
    out << "label\n";
    for (Eigen::Index i = 0; i < data.n(); ++i) {
        for (Eigen::Index j = 0; j < data.d(); ++j) {
            out << data.features()(i, j) << ',';
        }
        out << data.labels()[static_cast<size_t>(i)] << '\n';
    }
    out.precision(old);
}

void write_dataset_file(const std::string& path, const Dataset& data) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write '" + path + "'");
    }
    write_dataset_csv(out, data);
}

} // namespace supmsvm

#ifndef SUPMSVM_CSV_HPP
#define SUPMSVM_CSV_HPP

#include "supmsvm/core.hpp"

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

/**
 * @file csv.hpp
 * @brief Minimal comma-separated reader/writer and the dataset file format.
 *
 * Dataset files have a header row of variable names followed by a final
 * `label` column; each further row is one example with an integer label in
 * `1..K`. Quoting is not supported; blank lines are skipped.
 */

namespace supmsvm {

class CsvError : public std::runtime_error {
public:
    CsvError(std::size_t line, const std::string& what);
    std::size_t line() const { return line_; }
    const std::string& reason() const { return reason_; }

private:
    std::size_t line_;
    std::string reason_;
};

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> line_numbers; ///< 1-based source line of each row
};

/// Every row must have as many fields as the header.
CsvTable read_csv(std::istream& in);
CsvTable read_csv_file(const std::string& path);

double parse_double(const std::string& token, std::size_t line);
long parse_long(const std::string& token, std::size_t line);

struct DatasetFile {
    Matrix features;
    std::optional<std::vector<int>> labels; ///< present when a `label` column exists
    std::vector<std::string> names;

    /// K defaults to the largest label seen.
    Dataset to_dataset(int k_classes = 0) const;
};

DatasetFile read_dataset_csv(std::istream& in);
DatasetFile read_dataset_file(const std::string& path);

void write_dataset_csv(std::ostream& out, const Dataset& data);
void write_dataset_file(const std::string& path, const Dataset& data);

} // namespace supmsvm

#endif

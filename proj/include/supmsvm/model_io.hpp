#ifndef SUPMSVM_MODEL_IO_HPP
#define SUPMSVM_MODEL_IO_HPP

#include "supmsvm/core.hpp"
#include "supmsvm/select.hpp"

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

/**
 * @file model_io.hpp
 * @brief Plain-text persistence of fitted models. The format is described in
 * docs/model_format.md.
 */

namespace supmsvm {

struct SavedModel {
    CoefModel model;
    PenaltyKind penalty = PenaltyKind::L2;
    double lambda = 0.0;
    int basis_degree = 1;                ///< features are expanded before prediction when > 1
    std::vector<std::string> input_names; ///< raw input columns expected by predict
    std::vector<std::string> names;       ///< one per model column
    std::vector<LambdaError> lambda_table;
};

class ModelFormatError : public std::runtime_error {
public:
    ModelFormatError(std::size_t line, const std::string& what);
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

void write_model(std::ostream& out, const SavedModel& saved);
SavedModel read_model(std::istream& in);

void write_model_file(const std::string& path, const SavedModel& saved);
SavedModel read_model_file(const std::string& path);

} // namespace supmsvm

#endif

#pragma once

#include <Eigen/Dense>

#include <string>

#include "mgs/exact.hpp"
#include "mgs/somat.hpp"

namespace mgs {

// Ring matrix: {"n", "scale_k", "a", "b"} with entry (a + b sqrt2) / sqrt2^scale_k.
// Integers that do not fit in 64 bits are written as decimal strings.
std::string matrix_to_json(const TransferMatrix& m);
TransferMatrix matrix_from_json(const std::string& text);

// Floating matrix: {"n", "values"}.  Ring matrix files are accepted as well.
std::string float_matrix_to_json(const Eigen::MatrixXd& m);
Eigen::MatrixXd float_matrix_from_json(const std::string& text);
bool json_is_ring_matrix(const std::string& text);

// {"n", "layers": [[{"kind", "q"}]], "t_count"}.
std::string circuit_to_json(const Circuit& c);
Circuit circuit_from_json(const std::string& text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace mgs

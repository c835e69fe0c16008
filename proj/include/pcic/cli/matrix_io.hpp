#pragma once

#include <istream>
#include <string>
#include <vector>

#include "pcic/numkit/linalg.hpp"

namespace pcic::cli {

/// Reads a rectangular numeric CSV. A first line with no numeric cell is
/// taken as a header and skipped. Throws DataError naming the file line
/// (and column) of a ragged row or non-numeric cell.
std::vector<std::vector<double>> read_numeric_csv(std::istream& in, const std::string& label);

/// n x S matrix; every row must have the same length.
RowMatrix read_matrix_csv(std::istream& in, const std::string& label);

/// Single-column CSV as a vector.
std::vector<double> read_column_csv(std::istream& in, const std::string& label);

}  // namespace pcic::cli

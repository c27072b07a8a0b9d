#pragma once

#include "dhgl/linalg.hpp"

#include <string>

namespace dhgl {

/// Reads a dense matrix from CSV: one row per line, comma-separated decimal
/// numbers, no header. Ragged rows and unparseable tokens are rejected.
Matrix load_matrix_csv(const std::string& path);

/// Writes a dense matrix in the same CSV layout with round-trip precision.
void save_matrix_csv(const Matrix& m, const std::string& path);

}  // namespace dhgl

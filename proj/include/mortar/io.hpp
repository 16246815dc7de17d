#pragma once

#include <string>

#include "mortar/types.hpp"

namespace mortar {

/// Coordinate text format: a "rows cols nnz" line, then one "row col value" line per entry (0-based).
void write_coordinate(const std::string& path, const CsrMatrix& matrix);
CsrMatrix read_coordinate(const std::string& path);

}  // namespace mortar

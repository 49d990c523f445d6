#pragma once

#include "ogl/model.hpp"

#include <string>
#include <vector>

namespace ogl {

/// CSV with one sample per row. All rows must have the same width.
Matrix load_matrix_csv(const std::string& path, bool skip_header = false);

/// Single-column CSV.
Vector load_vector_csv(const std::string& path, bool skip_header = false);

void save_matrix_csv(const std::string& path, const Matrix& m);
void save_vector_csv(const std::string& path, const Vector& v);

/// One group per line: whitespace-separated 0-based indices, where a
/// token "a-b" expands to the inclusive range. Blank lines are skipped.
std::vector<std::vector<int>> load_groups(const std::string& path);

/// Writes maximal contiguous runs in "a-b" form.
void save_groups(const std::string& path,
                 const std::vector<std::vector<int>>& groups);

}  // namespace ogl

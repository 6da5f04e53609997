#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"

#include "anumrad/matrix.hpp"

namespace anumrad::harness {

using Json = nlohmann::ordered_json;

/// {"rows": r, "cols": c, "data": [[re, im], ...]} in row-major order.
Json matrix_to_json(const ComplexMatrix& m);
/// Throws Error(parse) on any schema violation.
ComplexMatrix matrix_from_json(const Json& j);

ComplexMatrix read_matrix_file(const std::filesystem::path& path);
void write_matrix_file(const std::filesystem::path& path, const ComplexMatrix& m);

Json read_json_file(const std::filesystem::path& path);
/// Writes `j` with two-space indentation and a trailing newline.
void write_json_file(const std::filesystem::path& path, const Json& j);

}  // namespace anumrad::harness

#pragma once

#include <string>

#include <nlohmann/json_fwd.hpp>

#include "matrixcs/types.hpp"

namespace matrixcs {

/// Shared wire format: {"rows": n, "cols": m, "data": [[re, im], ...]}
/// row-major, IEEE-754 doubles.
nlohmann::json matrix_to_json(const CMatrix &m);
CMatrix matrix_from_json(const nlohmann::json &j);

std::string matrix_to_string(const CMatrix &m);
CMatrix matrix_from_string(const std::string &text);

CMatrix load_matrix(const std::string &path);
void save_matrix(const std::string &path, const CMatrix &m);

} // namespace matrixcs

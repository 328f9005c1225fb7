#pragma once

// JSON matrix format {"dim": d, "re": [[...]], "im": [[...]]}, row-major.

#include <json.hpp>
#include <string>

#include "coatom/herm.hpp"

namespace coatom {

nlohmann::json matrix_to_json(const HermitianMatrix& m);
/// Throws std::invalid_argument on malformed input or a non-hermitian matrix.
HermitianMatrix matrix_from_json(const nlohmann::json& j);

HermitianMatrix read_matrix_file(const std::string& path);
void write_matrix_file(const std::string& path, const HermitianMatrix& m);

}  // namespace coatom

#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "tsspec/matrixkit.hpp"

namespace tsspec::jsonio {

using Json = nlohmann::ordered_json;

Json complex_to_json(const Complex& z);
Complex complex_from_json(const Json& j, const std::string& where);
Json matrix_to_json(const CMatrix& m);
CMatrix matrix_from_json(const Json& j, const std::string& where);
const Json& require_field(const Json& j, const std::string& name);
std::vector<CMatrix> matrix_list_from_json(const Json& j, const std::string& where);
Json matrix_list_to_json(const std::vector<CMatrix>& ms);

}  // namespace tsspec::jsonio

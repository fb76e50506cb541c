#pragma once

// JSON encoding of matrices, descriptors and reports. Matrices are row-major
// nested arrays of [re, im] pairs; plain numbers are accepted on input.

#include <json.hpp>

#include "hroot/canonical.hpp"
#include "hroot/construction.hpp"
#include "hroot/descriptor.hpp"
#include "hroot/existence.hpp"
#include "hroot/verify.hpp"

namespace hroot {

using Json = nlohmann::json;

inline constexpr const char* kSchemaVersion = "1";

Json complex_to_json(Complex z);
/// Accepts [re, im] or a number. Throws InvalidInput naming `what`.
Complex complex_from_json(const Json& j, const std::string& what);

Json matrix_to_json(const Matrix& a);
Matrix matrix_from_json(const Json& j, const std::string& what);

Json descriptor_to_json(const Descriptor& d);
/// Checks the schema and the descriptor invariants.
Descriptor descriptor_from_json(const Json& j);

bool is_descriptor_json(const Json& j);
bool is_pair_json(const Json& j);
MatrixPair pair_from_json(const Json& j);

Json decision_to_json(const DecisionReport& r);
Json root_to_json(const RootResult& r);
Json residuals_to_json(const ResidualReport& r);
Json canonicalization_to_json(const CanonicalizationResult& r);

}  // namespace hroot

#pragma once

#include <json.hpp>

#include "mqmi/qmatrix.hpp"

namespace mqmi {

using Json = nlohmann::json;

/// Malformed JSON input or a schema violation.
class ParseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Matrices are nested row arrays of [re, im] pairs; vectors are flat arrays of
// [re, im] pairs. A bare number is accepted as a real entry on input.
Json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const Json& j);
Json vector_to_json(const ComplexVector& v);
ComplexVector vector_from_json(const Json& j);

Json state_to_json(const MultipartiteState& state);

}  // namespace mqmi

#pragma once

#include <string>

#include <nlohmann/json_fwd.hpp>

#include "qficoh/states.hpp"

namespace qficoh::io {

using Json = nlohmann::ordered_json;

// File layouts (all JSON, complex entries as [re, im] pairs, row-major):
//   matrix file:  {"dim": d, "matrix": [[[re, im], ...], ...]}
//   povm file:    {"dim": d, "elements": [matrix-payload, ...]}
// Emission uses shortest-round-trip double formatting, so emit-then-parse
// reproduces the numeric payload bit for bit.

Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j);

Json matrix_file(const Matrix& m);
Json povm_file(const std::vector<Matrix>& elements);

// Raw payloads; throw ParseError on malformed documents.
Matrix parse_matrix_file(const Json& doc);
std::vector<Matrix> parse_povm_file(const Json& doc);

Json load_json(const std::string& path);

// Validated loaders used by the CLI.
DensityMatrix load_state(const std::string& path, const TolerancePolicy& tol = {});
Povm load_povm(const std::string& path, const TolerancePolicy& tol = {});
Matrix load_observable(const std::string& path, const TolerancePolicy& tol = {});

} // namespace qficoh::io

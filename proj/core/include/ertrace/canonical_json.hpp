#pragma once

#include <string>

#include <nlohmann/json.hpp>

namespace ertrace {

// Canonical text form shared by logs, query exports and run configs:
// two-space indentation, object keys in the order held by the value,
// arrays of scalars kept on one line, floats with 9 significant digits,
// trailing newline. Non-finite floats are rejected.
std::string to_canonical_json(const nlohmann::ordered_json& value);

// A float rendered the way canonical JSON renders it ("%.9g").
std::string format_float(double value);

}  // namespace ertrace

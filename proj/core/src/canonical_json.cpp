#include "ertrace/canonical_json.hpp"

#include <cmath>
#include <cstdio>

#include "ertrace/error.hpp"

namespace ertrace {
namespace {

bool is_scalar(const nlohmann::ordered_json& value) {
  return !value.is_object() && !value.is_array();
}

void emit(const nlohmann::ordered_json& value, int indent, std::string& out) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
  switch (value.type()) {
    case nlohmann::ordered_json::value_t::object: {
      if (value.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [key, item] : value.items()) {
        if (!first) out += ",\n";
        first = false;
        out += inner;
        out += nlohmann::ordered_json(key).dump();
        out += ": ";
        emit(item, indent + 1, out);
      }
      out += "\n" + pad + "}";
      return;
    }
    case nlohmann::ordered_json::value_t::array: {
      if (value.empty()) {
        out += "[]";
        return;
      }
      bool flat = true;
      for (const auto& item : value) flat = flat && is_scalar(item);
      if (flat) {
        out += "[";
        for (std::size_t i = 0; i < value.size(); ++i) {
          if (i) out += ", ";
          emit(value[i], indent + 1, out);
        }
        out += "]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < value.size(); ++i) {
        if (i) out += ",\n";
        out += inner;
        emit(value[i], indent + 1, out);
      }
      out += "\n" + pad + "]";
      return;
    }
    case nlohmann::ordered_json::value_t::number_float:
      out += format_float(value.get<double>());
      return;
    default:
      out += value.dump(-1, ' ', false,
                        nlohmann::ordered_json::error_handler_t::strict);
      return;
  }
}

}  // namespace

std::string format_float(double value) {
  if (!std::isfinite(value)) {
    throw Error(ErrorCode::kInvariantViolation,
                "non-finite float cannot be serialized");
  }
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.9g", value);
  return buffer;
}

std::string to_canonical_json(const nlohmann::ordered_json& value) {
  std::string out;
  emit(value, 0, out);
  out += "\n";
  return out;
}

}  // namespace ertrace

#include "ertrace/hyperparameters.hpp"

#include <algorithm>
#include <vector>

#include "ertrace/error.hpp"

namespace ertrace {

Hyperparameters::Hyperparameters(const nlohmann::ordered_json& object) {
  if (!object.is_object()) {
    throw Error(ErrorCode::kInvalidConfig, "hyperparameters must be an object");
  }
  values_ = object;
  sort_keys();
}

Hyperparameters& Hyperparameters::set(std::string key,
                                      nlohmann::ordered_json value) {
  values_[std::move(key)] = std::move(value);
  sort_keys();
  return *this;
}

Hyperparameters& Hyperparameters::merge(const Hyperparameters& other) {
  for (const auto& [key, value] : other.values_.items()) values_[key] = value;
  sort_keys();
  return *this;
}

const nlohmann::ordered_json* Hyperparameters::find(std::string_view key) const {
  auto it = values_.find(std::string(key));
  return it == values_.end() ? nullptr : &*it;
}

std::optional<std::size_t> Hyperparameters::dim() const {
  const auto* value = find(kDim);
  if (value == nullptr) return std::nullopt;
  if (!value->is_number_unsigned() && !value->is_number_integer()) {
    throw Error(ErrorCode::kInvalidConfig, "hyperparameter 'dim' must be an integer");
  }
  const auto dim = value->get<long long>();
  if (dim <= 0) {
    throw Error(ErrorCode::kInvalidConfig, "hyperparameter 'dim' must be positive");
  }
  return static_cast<std::size_t>(dim);
}

std::optional<std::string> Hyperparameters::backend() const {
  const auto* value = find(kBackend);
  if (value == nullptr || !value->is_string()) return std::nullopt;
  return value->get<std::string>();
}

void Hyperparameters::sort_keys() {
  std::vector<std::pair<std::string, nlohmann::ordered_json>> items;
  for (const auto& [key, value] : values_.items()) items.emplace_back(key, value);
  std::sort(items.begin(), items.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  values_ = nlohmann::ordered_json::object();
  for (auto& [key, value] : items) values_[key] = std::move(value);
}

}  // namespace ertrace

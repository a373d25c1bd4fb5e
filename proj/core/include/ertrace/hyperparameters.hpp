#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

namespace ertrace {

// Run-wide settings recorded in every predicted log header. Keys are kept
// sorted so the serialized block is canonical regardless of insertion order.
class Hyperparameters {
 public:
  static constexpr std::string_view kDim = "dim";
  static constexpr std::string_view kBackend = "backend";

  Hyperparameters() = default;
  // Throws kInvalidConfig unless `object` is a JSON object.
  explicit Hyperparameters(const nlohmann::ordered_json& object);

  Hyperparameters& set(std::string key, nlohmann::ordered_json value);
  Hyperparameters& merge(const Hyperparameters& other);

  const nlohmann::ordered_json* find(std::string_view key) const;
  std::optional<std::size_t> dim() const;
  std::optional<std::string> backend() const;

  const nlohmann::ordered_json& json() const noexcept { return values_; }

  friend bool operator==(const Hyperparameters& a, const Hyperparameters& b) {
    return a.values_ == b.values_;
  }

 private:
  void sort_keys();

  nlohmann::ordered_json values_ = nlohmann::ordered_json::object();
};

}  // namespace ertrace

#include <cmath>

#include <nlohmann/json.hpp>

#include "ertrace/matcher.hpp"
#include "http_json.hpp"

namespace ertrace {
namespace {

class RemoteMatcher final : public MatcherBackend {
 public:
  explicit RemoteMatcher(detail::Endpoint endpoint) : endpoint_(std::move(endpoint)) {
    const auto response = detail::post_json(endpoint_, {{"op", "dim"}});
    if (!response.is_object() || !response.contains("dim") ||
        !response.at("dim").is_number_integer() || response.at("dim").get<long long>() <= 0) {
      throw Error(ErrorCode::kMalformedResponse, "dimension probe returned no positive 'dim'");
    }
    dim_ = response.at("dim").get<std::size_t>();
  }

  PredictionRecord predict(const SerializedPair& pair) const override {
    const auto response = detail::post_json(endpoint_, {{"serialized", pair.text}});
    if (!response.is_object()) {
      throw Error(ErrorCode::kMalformedResponse, "matcher response must be an object");
    }
    const auto expect = [&](const char* key) -> const nlohmann::json& {
      if (!response.contains(key)) {
        throw Error(ErrorCode::kMalformedResponse,
                    std::string("matcher response lacks '") + key + "'");
      }
      return response.at(key);
    };

    const auto& label = expect("label");
    if (!label.is_number_integer()) {
      throw Error(ErrorCode::kMalformedResponse, "'label' must be an integer");
    }
    const auto code = label.get<long long>();
    if (code != 0 && code != 1) {
      throw Error(ErrorCode::kContractViolation, "label " + std::to_string(code) + " is not 0/1");
    }

    const auto& confidence = expect("confidence");
    if (!confidence.is_number()) {
      throw Error(ErrorCode::kMalformedResponse, "'confidence' must be a number");
    }
    const double c = confidence.get<double>();
    if (!std::isfinite(c) || c < 0.0 || c > 1.0) {
      throw Error(ErrorCode::kContractViolation,
                  "confidence " + std::to_string(c) + " outside [0,1]");
    }

    const auto& embedding = expect("embedding");
    if (!embedding.is_array()) {
      throw Error(ErrorCode::kMalformedResponse, "'embedding' must be an array");
    }
    if (embedding.size() != dim_) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "embedding has length " + std::to_string(embedding.size()) +
                      ", probed dim is " + std::to_string(dim_));
    }
    std::vector<double> values;
    values.reserve(dim_);
    for (const auto& v : embedding) {
      if (!v.is_number() || !std::isfinite(v.get<double>())) {
        throw Error(ErrorCode::kMalformedResponse, "embedding values must be finite numbers");
      }
      values.push_back(v.get<double>());
    }
    return {pair.row_id, pair.method, label_from_code(code), c, std::move(values)};
  }

  std::size_t embedding_dim() const override { return dim_; }

  Hyperparameters describe() const override {
    Hyperparameters hp;
    hp.set(std::string(Hyperparameters::kBackend), "remote");
    hp.set(std::string(Hyperparameters::kDim), dim_);
    hp.set("endpoint", endpoint_.base() + endpoint_.path);
    return hp;
  }

 private:
  detail::Endpoint endpoint_;
  std::size_t dim_ = 0;
};

}  // namespace

std::unique_ptr<MatcherBackend> remote_matcher(const std::string& endpoint) {
  return std::make_unique<RemoteMatcher>(detail::parse_endpoint(endpoint));
}

}  // namespace ertrace

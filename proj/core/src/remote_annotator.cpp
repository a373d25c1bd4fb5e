#include <nlohmann/json.hpp>

#include "ertrace/augment.hpp"
#include "http_json.hpp"

namespace ertrace {
namespace {

nlohmann::json encode_request(const DataEntry& entry) {
  nlohmann::json columns = nlohmann::json::array();
  for (const auto& column : entry.columns) {
    columns.push_back({{"name", column.name}, {"value", column.value}});
  }
  return {{"columns", std::move(columns)}};
}

const nlohmann::json& require(const nlohmann::json& object, const char* key,
                              bool (nlohmann::json::*is_kind)() const noexcept) {
  if (!object.is_object() || !object.contains(key) || !(object.at(key).*is_kind)()) {
    throw Error(ErrorCode::kMalformedResponse,
                std::string("annotator response: missing or mistyped '") + key + "'");
  }
  return object.at(key);
}

class RemoteAnnotator final : public Annotator {
 public:
  RemoteAnnotator(detail::Endpoint endpoint, AnnotatorKind kind)
      : endpoint_(std::move(endpoint)), kind_(kind) {}

  std::vector<ColumnTypeAnnotation> annotate_columns(
      const DataEntry& entry) const override {
    std::vector<ColumnTypeAnnotation> out;
    if (kind_ != AnnotatorKind::kColumn) return out;
    const auto response = detail::post_json(endpoint_, encode_request(entry));
    const auto& list = require(response, "column_types", &nlohmann::json::is_array);
    for (const auto& item : list) {
      const auto& column = require(item, "column", &nlohmann::json::is_string);
      const auto& type = require(item, "type", &nlohmann::json::is_string);
      out.push_back({column.get<std::string>(), type.get<std::string>()});
    }
    check_annotations(entry, out, {});
    return out;
  }

  std::vector<EntityMentionAnnotation> annotate_entities(
      const DataEntry& entry) const override {
    std::vector<EntityMentionAnnotation> out;
    if (kind_ != AnnotatorKind::kEntity) return out;
    const auto response = detail::post_json(endpoint_, encode_request(entry));
    const auto& list = require(response, "mentions", &nlohmann::json::is_array);
    for (const auto& item : list) {
      const auto column = require(item, "column", &nlohmann::json::is_string)
                              .get<std::string>();
      const auto start = require(item, "start", &nlohmann::json::is_number_integer)
                             .get<long long>();
      const auto end = require(item, "end", &nlohmann::json::is_number_integer)
                           .get<long long>();
      const auto type = require(item, "type", &nlohmann::json::is_string)
                            .get<std::string>();
      const Column* target = entry.find(column);
      if (target == nullptr) {
        throw Error(ErrorCode::kAnnotationMismatch,
                    "annotator referenced unknown column '" + column + "'");
      }
      if (start < 0 || end <= start ||
          static_cast<std::size_t>(end) > target->value.size()) {
        throw Error(ErrorCode::kAnnotationMismatch,
                    "annotator span out of range in column '" + column + "'");
      }
      const auto begin = static_cast<std::size_t>(start);
      const auto stop = static_cast<std::size_t>(end);
      out.push_back({column, begin, stop, target->value.substr(begin, stop - begin),
                     type});
    }
    check_annotations(entry, {}, out);
    return out;
  }

 private:
  detail::Endpoint endpoint_;
  AnnotatorKind kind_;
};

}  // namespace

std::unique_ptr<Annotator> remote_annotator(const std::string& endpoint,
                                            AnnotatorKind kind) {
  return std::make_unique<RemoteAnnotator>(detail::parse_endpoint(endpoint), kind);
}

}  // namespace ertrace

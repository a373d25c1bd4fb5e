#include "run_config.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <ertrace/canonical_json.hpp>

namespace ertrace::cli {
namespace {

using Json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& where, const std::string& why) {
  throw Error(ErrorCode::kInvalidConfig, where + ": " + why);
}

void only_keys(const Json& object, std::initializer_list<std::string_view> keys,
               const std::string& where) {
  for (const auto& [key, value] : object.items()) {
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      fail(where, "unknown key '" + key + "'");
    }
  }
}

std::string get_string(const Json& object, const char* key, const std::string& where,
                       std::optional<std::string> fallback = std::nullopt) {
  if (!object.contains(key)) {
    if (fallback) return *fallback;
    fail(where, std::string("missing '") + key + "'");
  }
  const auto& value = object.at(key);
  if (!value.is_string()) fail(where, std::string("'") + key + "' must be a string");
  return value.get<std::string>();
}

template <typename T>
T get_number(const Json& object, const char* key, const std::string& where, T fallback) {
  if (!object.contains(key)) return fallback;
  const auto& value = object.at(key);
  if constexpr (std::is_integral_v<T>) {
    if (!value.is_number_integer() || value.get<long long>() < 0) {
      fail(where, std::string("'") + key + "' must be a non-negative integer");
    }
  } else {
    if (!value.is_number()) fail(where, std::string("'") + key + "' must be a number");
  }
  return value.get<T>();
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& path) {
  std::filesystem::path p(path);
  return p.is_absolute() ? p : (base / p).lexically_normal();
}

AnnotatorSpec parse_annotator(const Json& node, const std::filesystem::path& base,
                              const std::string& where) {
  if (!node.is_object()) fail(where, "annotator must be an object");
  AnnotatorSpec spec;
  const auto kind = get_string(node, "kind", where);
  if (kind == "dictionary") {
    only_keys(node, {"kind", "path", "column_types", "mentions"}, where);
    spec.kind = AnnotatorSpec::Kind::kDictionary;
    if (node.contains("path")) {
      if (node.contains("column_types") || node.contains("mentions")) {
        fail(where, "give either 'path' or inline tables, not both");
      }
      try {
        spec.dictionary = load_dictionary_config(resolve(base, get_string(node, "path", where)));
      } catch (const Error& e) {
        fail(where, e.what());
      }
    } else {
      Json inline_tables = Json::object();
      if (node.contains("column_types")) inline_tables["column_types"] = node.at("column_types");
      if (node.contains("mentions")) inline_tables["mentions"] = node.at("mentions");
      try {
        spec.dictionary = parse_dictionary_config(inline_tables.dump());
      } catch (const Error& e) {
        fail(where, e.what());
      }
    }
  } else if (kind == "remote") {
    only_keys(node, {"kind", "endpoint"}, where);
    spec.kind = AnnotatorSpec::Kind::kRemote;
    spec.endpoint = get_string(node, "endpoint", where);
  } else {
    fail(where, "annotator kind must be 'dictionary' or 'remote'");
  }
  return spec;
}

BackendSpec parse_backend(const Json& node) {
  const std::string where = "backend";
  if (!node.is_object()) fail(where, "must be an object");
  BackendSpec spec;
  const auto kind = get_string(node, "kind", where);
  if (kind == "builtin") {
    only_keys(node, {"kind", "dim", "threshold", "ngram", "seed"}, where);
    spec.kind = BackendSpec::Kind::kBuiltin;
    spec.builtin.dim = get_number<std::size_t>(node, "dim", where, spec.builtin.dim);
    spec.builtin.threshold = get_number<double>(node, "threshold", where, spec.builtin.threshold);
    spec.builtin.ngram = get_number<std::size_t>(node, "ngram", where, spec.builtin.ngram);
    spec.builtin.seed = get_number<std::uint64_t>(node, "seed", where, spec.builtin.seed);
    if (spec.builtin.dim < 8) fail(where, "'dim' must be at least 8");
    if (!(spec.builtin.threshold > 0.0 && spec.builtin.threshold < 1.0)) {
      fail(where, "'threshold' must lie in (0, 1)");
    }
    if (spec.builtin.ngram < 2) fail(where, "'ngram' must be at least 2");
  } else if (kind == "remote") {
    only_keys(node, {"kind", "endpoint"}, where);
    spec.kind = BackendSpec::Kind::kRemote;
    spec.endpoint = get_string(node, "endpoint", where);
  } else {
    fail(where, "kind must be 'builtin' or 'remote'");
  }
  return spec;
}

Json dictionary_json(const DictionaryConfig& config) {
  Json out = Json::object();
  Json columns = Json::object();
  for (const auto& [k, v] : config.column_types) columns[k] = v;
  Json mentions = Json::object();
  for (const auto& [k, v] : config.mentions) mentions[k] = v;
  out["column_types"] = std::move(columns);
  out["mentions"] = std::move(mentions);
  return out;
}

Json annotator_json(const std::optional<AnnotatorSpec>& spec) {
  if (!spec) return nullptr;
  Json out = Json::object();
  if (spec->kind == AnnotatorSpec::Kind::kDictionary) {
    out["kind"] = "dictionary";
    out["tables"] = dictionary_json(spec->dictionary);
  } else {
    out["kind"] = "remote";
    out["endpoint"] = spec->endpoint;
  }
  return out;
}

}  // namespace

RunConfig parse_run_config(const std::string& text, const std::filesystem::path& base_dir) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::kInvalidConfig, std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) fail("config", "top level must be an object");
  only_keys(doc,
            {"dataset", "split", "dataset_name", "output_dir", "created_at", "backend",
             "hyperparameters", "methods", "workers"},
            "config");

  RunConfig config;
  config.dataset_dir = resolve(base_dir, get_string(doc, "dataset", "config"));
  config.split = get_string(doc, "split", "config", "test");
  config.dataset_name = get_string(doc, "dataset_name", "config", "");
  if (config.dataset_name.empty()) {
    config.dataset_name = std::filesystem::absolute(config.dataset_dir).lexically_normal()
                              .filename().string();
  }
  config.output_dir = resolve(base_dir, get_string(doc, "output_dir", "config", "logs"));
  if (doc.contains("created_at")) config.created_at = get_string(doc, "created_at", "config");
  if (!doc.contains("backend")) fail("config", "missing 'backend'");
  config.backend = parse_backend(doc.at("backend"));
  if (doc.contains("hyperparameters")) {
    if (!doc.at("hyperparameters").is_object()) fail("hyperparameters", "must be an object");
    config.extra_hyperparameters = Hyperparameters(doc.at("hyperparameters"));
  }
  config.workers = get_number<std::size_t>(doc, "workers", "config", 1);
  if (config.workers == 0) fail("config", "'workers' must be at least 1");

  if (!doc.contains("methods") || !doc.at("methods").is_array() || doc.at("methods").empty()) {
    fail("config", "'methods' must be a non-empty array");
  }
  std::set<std::string> names;
  for (std::size_t i = 0; i < doc.at("methods").size(); ++i) {
    const auto& node = doc.at("methods")[i];
    const std::string where = "methods[" + std::to_string(i) + "]";
    if (!node.is_object()) fail(where, "must be an object");
    only_keys(node, {"name", "style", "column_annotator", "entity_annotator"}, where);
    MethodSpec method;
    const auto name = get_string(node, "name", where);
    if (name.empty() || name.find_first_of("/\\") != std::string::npos || name.front() == '.') {
      fail(where, "'name' must be a non-empty file-name-safe identifier");
    }
    if (!names.insert(name).second) fail(where, "duplicate method '" + name + "'");
    method.name = MethodId(name);
    try {
      method.style = prompt_style_from_string(get_string(node, "style", where, "slash"));
    } catch (const Error& e) {
      fail(where, e.what());
    }
    if (node.contains("column_annotator")) {
      method.column_annotator =
          parse_annotator(node.at("column_annotator"), base_dir, where + ".column_annotator");
    }
    if (node.contains("entity_annotator")) {
      method.entity_annotator =
          parse_annotator(node.at("entity_annotator"), base_dir, where + ".entity_annotator");
    }
    config.methods.push_back(std::move(method));
  }
  return config;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kInvalidConfig, "cannot open config " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_run_config(buffer.str(), std::filesystem::absolute(path).parent_path());
}

std::unique_ptr<Annotator> make_annotator(const AnnotatorSpec& spec, AnnotatorKind kind) {
  if (spec.kind == AnnotatorSpec::Kind::kDictionary) return dictionary_annotator(spec.dictionary);
  return remote_annotator(spec.endpoint, kind);
}

std::unique_ptr<MatcherBackend> make_backend(const BackendSpec& spec) {
  if (spec.kind == BackendSpec::Kind::kBuiltin) return builtin_matcher(spec.builtin);
  return remote_matcher(spec.endpoint);
}

std::string annotator_digest(const MethodSpec& method) {
  Json doc = Json::object();
  doc["column_annotator"] = annotator_json(method.column_annotator);
  doc["entity_annotator"] = annotator_json(method.entity_annotator);
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx",
                static_cast<unsigned long long>(fnv1a64(to_canonical_json(doc))));
  return hex;
}

}  // namespace ertrace::cli

#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <ertrace/augment.hpp>
#include <ertrace/hyperparameters.hpp>
#include <ertrace/matcher.hpp>

namespace ertrace::cli {

struct AnnotatorSpec {
  enum class Kind { kDictionary, kRemote };
  Kind kind = Kind::kDictionary;
  DictionaryConfig dictionary;  // loaded eagerly for kDictionary
  std::string endpoint;         // kRemote
};

struct MethodSpec {
  MethodId name;
  PromptStyle style = PromptStyle::kSlash;
  std::optional<AnnotatorSpec> column_annotator;
  std::optional<AnnotatorSpec> entity_annotator;
};

struct BackendSpec {
  enum class Kind { kBuiltin, kRemote };
  Kind kind = Kind::kBuiltin;
  BuiltinMatcherOptions builtin;
  std::string endpoint;
};

// The declarative run file. Relative paths resolve against the directory
// holding the file.
struct RunConfig {
  std::filesystem::path dataset_dir;
  std::string split = "test";
  std::string dataset_name;  // defaults to the dataset directory name
  std::filesystem::path output_dir;
  std::optional<std::string> created_at;
  BackendSpec backend;
  Hyperparameters extra_hyperparameters;
  std::vector<MethodSpec> methods;
  std::size_t workers = 1;
};

// Throws Error(kInvalidConfig) with a diagnostic naming the offending key.
RunConfig parse_run_config(const std::string& text, const std::filesystem::path& base_dir);
RunConfig load_run_config(const std::filesystem::path& path);

std::unique_ptr<Annotator> make_annotator(const AnnotatorSpec& spec, AnnotatorKind kind);
std::unique_ptr<MatcherBackend> make_backend(const BackendSpec& spec);

// Hex FNV-1a digest of the method's annotator configuration.
std::string annotator_digest(const MethodSpec& method);

}  // namespace ertrace::cli

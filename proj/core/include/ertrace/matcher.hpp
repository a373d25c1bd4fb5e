#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ertrace/augment.hpp"
#include "ertrace/hyperparameters.hpp"
#include "ertrace/model.hpp"
#include "ertrace/provenance_log.hpp"
#include "ertrace/serialize.hpp"

namespace ertrace {

struct PredictionRecord {
  RowId row_id = 0;
  MethodId method;
  MatchLabel predicted = MatchLabel::kNotMatch;
  double confidence = 0.0;
  std::vector<double> embedding;

  friend bool operator==(const PredictionRecord&, const PredictionRecord&) = default;
};

// Turns a serialized pair into a label, a confidence in [0,1] and one pair
// embedding of fixed dimension. predict must be deterministic and safe to
// call from several threads at once.
class MatcherBackend {
 public:
  virtual ~MatcherBackend() = default;
  virtual PredictionRecord predict(const SerializedPair& pair) const = 0;
  virtual std::size_t embedding_dim() const = 0;
  // Settings recorded in log headers; always includes "backend" and "dim".
  virtual Hyperparameters describe() const = 0;
};

// Token-overlap blocking. Each key column's value is lowercased, split on
// whitespace, and stripped of ASCII punctuation; a left/right pair becomes
// a candidate when they share a token in any key column. Without keys the
// cross product is returned, truncated to max_pairs. Pairs are ordered by
// (left index, right index) and numbered from 0.
std::vector<CandidatePair> block(std::span<const DataEntry> left_table,
                                 std::span<const DataEntry> right_table,
                                 std::span<const std::string> key_columns,
                                 std::size_t max_pairs);

// 64-bit FNV-1a with the offset basis xor-ed with `seed`.
std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed = 0) noexcept;

struct BuiltinMatcherOptions {
  std::size_t dim = 64;
  double threshold = 0.5;
  std::size_t ngram = 3;
  std::uint64_t seed = 0;
};

// Hashed character n-gram counts (bytes, hashed mod dim). A side shorter
// than n counts as a single gram. confidence = (cosine + 1) / 2 over the
// raw count vectors; Match iff confidence >= threshold. The pair embedding
// is the mean of the two unit side vectors, rescaled to unit length.
std::unique_ptr<MatcherBackend> builtin_matcher(const BuiltinMatcherOptions& options);

// Count vector of `text` under `options`, exposed for tests and benchmarks.
std::vector<double> ngram_counts(std::string_view text,
                                 const BuiltinMatcherOptions& options);

// Client for a matcher service speaking the JSON matcher protocol over HTTP
// POST. The dimension probe runs at construction; kServiceUnavailable if
// the service cannot be reached.
std::unique_ptr<MatcherBackend> remote_matcher(const std::string& endpoint);

struct ExperimentSetup {
  std::string dataset_name;
  MethodId method;
  const Annotator* column_annotator = nullptr;
  const Annotator* entity_annotator = nullptr;
  PromptStyle style = PromptStyle::kSlash;
  std::size_t workers = 1;
};

struct ExperimentRecords {
  std::vector<InputDataRecord> inputs;
  std::vector<PredictedDataRecord> predictions;
};

// Annotate, serialize and predict every pair, in input order. The first
// failing row aborts the run; its Error carries the row id and the stage
// ("annotate", "serialize" or "predict"). `hp` must declare the backend's
// dimension.
ExperimentRecords run_experiment(std::span<const CandidatePair> pairs,
                                 const ExperimentSetup& setup,
                                 const MatcherBackend& backend,
                                 const Hyperparameters& hp);

}  // namespace ertrace

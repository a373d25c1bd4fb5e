#include <algorithm>
#include <cmath>

#include "ertrace/matcher.hpp"

namespace ertrace {
namespace {

constexpr std::uint64_t kFnvOffsetBasis = 14695981039346656037ull;
constexpr std::uint64_t kFnvPrime = 1099511628211ull;

double dot(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum;
}

std::vector<double> unit(std::vector<double> v) {
  const double norm = std::sqrt(dot(v, v));
  for (double& x : v) x /= norm;
  return v;
}

class BuiltinMatcher final : public MatcherBackend {
 public:
  explicit BuiltinMatcher(const BuiltinMatcherOptions& options) : options_(options) {
    if (options_.dim < 8) {
      throw Error(ErrorCode::kInvalidArgument, "builtin matcher needs dim >= 8");
    }
    if (!(options_.threshold > 0.0 && options_.threshold < 1.0)) {
      throw Error(ErrorCode::kInvalidArgument, "threshold must lie in (0, 1)");
    }
    if (options_.ngram < 2) {
      throw Error(ErrorCode::kInvalidArgument, "ngram must be >= 2");
    }
  }

  PredictionRecord predict(const SerializedPair& pair) const override {
    const auto left = ngram_counts(pair.left, options_);
    const auto right = ngram_counts(pair.right, options_);
    // Counts are small integers, so dot and the norm product are exact and
    // identical texts give exactly 1.
    const double cosine =
        std::clamp(dot(left, right) / std::sqrt(dot(left, left) * dot(right, right)),
                   -1.0, 1.0);
    const double confidence = (cosine + 1.0) / 2.0;

    const auto left_unit = unit(left);
    const auto right_unit = unit(right);
    std::vector<double> embedding(options_.dim);
    for (std::size_t i = 0; i < options_.dim; ++i) {
      embedding[i] = (left_unit[i] + right_unit[i]) / 2.0;
    }
    embedding = unit(std::move(embedding));

    return {pair.row_id, pair.method,
            confidence >= options_.threshold ? MatchLabel::kMatch : MatchLabel::kNotMatch,
            confidence, std::move(embedding)};
  }

  std::size_t embedding_dim() const override { return options_.dim; }

  Hyperparameters describe() const override {
    Hyperparameters hp;
    hp.set(std::string(Hyperparameters::kBackend), "builtin");
    hp.set(std::string(Hyperparameters::kDim), options_.dim);
    hp.set("threshold", options_.threshold);
    hp.set("ngram", options_.ngram);
    hp.set("hash", "fnv1a64");
    hp.set("hash_seed", options_.seed);
    return hp;
  }

 private:
  BuiltinMatcherOptions options_;
};

}  // namespace

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed) noexcept {
  std::uint64_t hash = kFnvOffsetBasis ^ seed;
  for (char c : bytes) {
    hash ^= static_cast<unsigned char>(c);
    hash *= kFnvPrime;
  }
  return hash;
}

std::vector<double> ngram_counts(std::string_view text,
                                 const BuiltinMatcherOptions& options) {
  std::vector<double> counts(options.dim, 0.0);
  const auto bump = [&](std::string_view gram) {
    counts[fnv1a64(gram, options.seed) % options.dim] += 1.0;
  };
  if (text.size() < options.ngram) {
    bump(text);
    return counts;
  }
  for (std::size_t i = 0; i + options.ngram <= text.size(); ++i) {
    bump(text.substr(i, options.ngram));
  }
  return counts;
}

std::unique_ptr<MatcherBackend> builtin_matcher(const BuiltinMatcherOptions& options) {
  return std::make_unique<BuiltinMatcher>(options);
}

}  // namespace ertrace

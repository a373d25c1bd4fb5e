#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include <ertrace/canonical_json.hpp>
#include <ertrace/matcher.hpp>

#include "expect_error.hpp"
#include "test_support.hpp"

using namespace ertrace;
using ertrace::testing::FixtureServer;

namespace {

SerializedPair pair_of(std::string left, std::string right, RowId row = 0) {
  SerializedPair p;
  p.text = left + " " + right;
  p.left = std::move(left);
  p.right = std::move(right);
  p.row_id = row;
  p.method = MethodId("m");
  return p;
}

double norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

Hyperparameters hp_for(const MatcherBackend& backend) { return backend.describe(); }

std::string random_text(std::mt19937_64& rng) {
  static const std::string kAlphabet = "abcdefgh COLVAL/.";
  std::string s;
  const auto n = rng() % 30;
  for (std::size_t i = 0; i < n; ++i) s += kAlphabet[rng() % kAlphabet.size()];
  return s;
}

}  // namespace

TEST(Block, IdenticalTitles) {
  const std::vector<DataEntry> l{DataEntry{{{"title", "Data Bases!"}}}};
  const std::vector<DataEntry> r{DataEntry{{{"title", "data bases"}}}};
  const std::vector<std::string> keys{"title"};
  const auto pairs = block(l, r, keys, 10);
  ASSERT_EQ(pairs.size(), 1u);
  EXPECT_EQ(pairs[0].row_id, 0u);
  EXPECT_FALSE(pairs[0].ground_truth.has_value());
}

TEST(Block, DisjointTokens) {
  const std::vector<DataEntry> l{DataEntry{{{"title", "alpha beta"}}}};
  const std::vector<DataEntry> r{DataEntry{{{"title", "gamma delta"}}}};
  const std::vector<std::string> keys{"title"};
  EXPECT_TRUE(block(l, r, keys, 10).empty());
}

TEST(Block, CrossProductWithoutKeys) {
  std::vector<DataEntry> l(3, DataEntry{{{"a", "x"}}});
  std::vector<DataEntry> r(4, DataEntry{{{"a", "y"}}});
  const auto pairs = block(l, r, {}, 100);
  ASSERT_EQ(pairs.size(), 12u);
  for (std::size_t i = 0; i < pairs.size(); ++i) EXPECT_EQ(pairs[i].row_id, i);
  EXPECT_EQ(block(l, r, {}, 5).size(), 5u);
}

TEST(Block, KeyedOverflowAndUnknownColumn) {
  std::vector<DataEntry> l(3, DataEntry{{{"title", "same"}}});
  std::vector<DataEntry> r(3, DataEntry{{{"title", "same"}}});
  const std::vector<std::string> keys{"title"};
  EXPECT_ERROR_CODE(block(l, r, keys, 8), ErrorCode::kBlockingOverflow);
  const std::vector<std::string> missing{"venue"};
  EXPECT_ERROR_CODE(block(l, r, missing, 100), ErrorCode::kUnknownColumn);
}

TEST(Fnv, KnownVectors) {
  // Reference values of the standard 64-bit FNV-1a.
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ull);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cull);
  EXPECT_EQ(fnv1a64("foobar"), 0x85944171f73967e8ull);
  EXPECT_NE(fnv1a64("a", 1), fnv1a64("a", 0));
}

TEST(Builtin, IdenticalTextsAreCertainMatches) {
  const auto m = builtin_matcher({64, 0.99, 3, 0});
  const auto p = m->predict(pair_of("COL title VAL vldb j.", "COL title VAL vldb j."));
  EXPECT_EQ(p.confidence, 1.0);
  EXPECT_EQ(p.predicted, MatchLabel::kMatch);
}

TEST(Builtin, DisjointGramsWithoutCollisions) {
  BuiltinMatcherOptions o{1u << 20, 0.5, 2, 0};
  std::set<std::uint64_t> buckets;
  for (const char* g : {"ab", "bc", "xy", "yz"}) buckets.insert(fnv1a64(g) % o.dim);
  ASSERT_EQ(buckets.size(), 4u) << "choose another dim: grams collide";
  const auto p = builtin_matcher(o)->predict(pair_of("abc", "xyz"));
  EXPECT_DOUBLE_EQ(p.confidence, 0.5);
}

TEST(Builtin, MatchesUnhashedBigramOracle) {
  // Oracle: {ab:1, bc:1} . {ab:1, bd:1} = 1, norms sqrt(2) each.
  const double oracle_cosine = 1.0 / (std::sqrt(2.0) * std::sqrt(2.0));
  ASSERT_DOUBLE_EQ(oracle_cosine, 0.5);
  BuiltinMatcherOptions o{1u << 20, 0.7, 2, 0};
  std::set<std::uint64_t> buckets;
  for (const char* g : {"ab", "bc", "bd"}) buckets.insert(fnv1a64(g) % o.dim);
  ASSERT_EQ(buckets.size(), 3u);
  const auto p = builtin_matcher(o)->predict(pair_of("abc", "abd"));
  EXPECT_DOUBLE_EQ(p.confidence, 0.75);
  EXPECT_EQ(p.predicted, MatchLabel::kMatch);
}

TEST(Builtin, ShortTextIsOneGram) {
  BuiltinMatcherOptions o{64, 0.5, 3, 0};
  const auto counts = ngram_counts("ab", o);
  EXPECT_EQ(std::accumulate(counts.begin(), counts.end(), 0.0), 1.0);
  EXPECT_EQ(counts[fnv1a64("ab") % 64], 1.0);
  const auto empty = ngram_counts("", o);
  EXPECT_EQ(std::accumulate(empty.begin(), empty.end(), 0.0), 1.0);
}

TEST(Builtin, RejectsBadOptions) {
  EXPECT_ERROR_CODE(builtin_matcher({4, 0.5, 3, 0}), ErrorCode::kInvalidArgument);
  EXPECT_ERROR_CODE(builtin_matcher({64, 1.0, 3, 0}), ErrorCode::kInvalidArgument);
  EXPECT_ERROR_CODE(builtin_matcher({64, 0.0, 3, 0}), ErrorCode::kInvalidArgument);
  EXPECT_ERROR_CODE(builtin_matcher({64, 0.5, 1, 0}), ErrorCode::kInvalidArgument);
}

TEST(Builtin, DescribeDeclaresSettings) {
  const auto hp = builtin_matcher({32, 0.6, 4, 9})->describe();
  EXPECT_EQ(hp.backend(), "builtin");
  EXPECT_EQ(hp.dim(), 32u);
  EXPECT_EQ(hp.find("hash")->get<std::string>(), "fnv1a64");
  EXPECT_EQ(hp.find("hash_seed")->get<int>(), 9);
  EXPECT_EQ(hp.find("ngram")->get<int>(), 4);
}

TEST(BuiltinProperties, SymmetryBoundsNormAndMonotonicity) {
  std::mt19937_64 rng(21);
  const auto low = builtin_matcher({16, 0.3, 2, 5});
  const auto high = builtin_matcher({16, 0.8, 2, 5});
  for (int i = 0; i < 500; ++i) {
    const auto a = random_text(rng);
    const auto b = random_text(rng);
    const auto ab = low->predict(pair_of(a, b));
    const auto ba = low->predict(pair_of(b, a));
    EXPECT_EQ(ab.confidence, ba.confidence);
    EXPECT_EQ(ab.embedding, ba.embedding);
    EXPECT_GE(ab.confidence, 0.0);
    EXPECT_LE(ab.confidence, 1.0);
    EXPECT_NEAR(norm(ab.embedding), 1.0, 1e-6);
    EXPECT_EQ(ab.embedding.size(), 16u);
    // Raising the threshold never turns a non-match into a match.
    if (ab.predicted == MatchLabel::kNotMatch) {
      EXPECT_EQ(high->predict(pair_of(a, b)).predicted, MatchLabel::kNotMatch);
    }
    EXPECT_EQ(low->predict(pair_of(a, b)), ab);
  }
}

namespace {

FixtureServer::Handler echo_matcher(std::size_t dim, double confidence,
                                    std::size_t embedding_length, int label = 1) {
  return [=](const nlohmann::json& request) -> std::optional<std::string> {
    if (request.contains("op")) return nlohmann::json{{"dim", dim}}.dump();
    if (!request.contains("serialized")) return std::nullopt;
    std::vector<double> embedding(embedding_length, 0.5);
    return nlohmann::json{{"label", label}, {"confidence", confidence}, {"embedding", embedding}}
        .dump();
  };
}

}  // namespace

TEST(RemoteMatcher, WellFormedPrediction) {
  std::string seen;
  FixtureServer server([&seen](const nlohmann::json& request) -> std::optional<std::string> {
    if (request.contains("op")) return R"({"dim": 3})";
    seen = request.at("serialized").get<std::string>();
    return R"({"label": 1, "confidence": 0.875, "embedding": [0.1, 0.2, 0.3]})";
  });
  const auto m = remote_matcher(server.endpoint());
  EXPECT_EQ(m->embedding_dim(), 3u);
  const auto p = m->predict(pair_of("COL a VAL x", "COL a VAL y", 4));
  EXPECT_EQ(seen, "COL a VAL x COL a VAL y");
  EXPECT_EQ(p.row_id, 4u);
  EXPECT_EQ(p.predicted, MatchLabel::kMatch);
  EXPECT_EQ(p.confidence, 0.875);
  EXPECT_EQ(p.embedding, (std::vector<double>{0.1, 0.2, 0.3}));
  const auto hp = m->describe();
  EXPECT_EQ(hp.backend(), "remote");
  EXPECT_EQ(hp.dim(), 3u);
}

TEST(RemoteMatcher, WrongEmbeddingLength) {
  FixtureServer server(echo_matcher(4, 0.5, 3));
  const auto m = remote_matcher(server.endpoint());
  EXPECT_ERROR_CODE(m->predict(pair_of("a", "b")), ErrorCode::kDimensionMismatch);
}

TEST(RemoteMatcher, ConfidenceOutOfRange) {
  FixtureServer server(echo_matcher(4, 1.2, 4));
  const auto m = remote_matcher(server.endpoint());
  EXPECT_ERROR_CODE(m->predict(pair_of("a", "b")), ErrorCode::kContractViolation);
}

TEST(RemoteMatcher, NonBinaryLabel) {
  FixtureServer server(echo_matcher(4, 0.5, 4, 2));
  const auto m = remote_matcher(server.endpoint());
  EXPECT_ERROR_CODE(m->predict(pair_of("a", "b")), ErrorCode::kContractViolation);
}

TEST(RemoteMatcher, UnreachableAtConstruction) {
  EXPECT_ERROR_CODE(remote_matcher(ertrace::testing::dead_endpoint()),
                    ErrorCode::kServiceUnavailable);
}

TEST(RemoteMatcher, BadProbe) {
  FixtureServer server([](const nlohmann::json&) -> std::optional<std::string> {
    return R"({"dimension": 4})";
  });
  EXPECT_ERROR_CODE(remote_matcher(server.endpoint()), ErrorCode::kMalformedResponse);
}

namespace {

CandidatePair candidate(RowId id, DataEntry l, DataEntry r, MatchLabel truth) {
  return {id, std::move(l), std::move(r), truth};
}

ExperimentSetup setup_for(const char* method, const Annotator* column = nullptr,
                          const Annotator* entity = nullptr, std::size_t workers = 1) {
  ExperimentSetup s;
  s.dataset_name = "unit";
  s.method = MethodId(method);
  s.column_annotator = column;
  s.entity_annotator = entity;
  s.workers = workers;
  return s;
}

std::vector<CandidatePair> three_pairs() {
  return {candidate(0, DataEntry{{{"venue", "acm sigmod record"}, {"year", "1998"}}},
                    DataEntry{{{"venue", "sigmod record"}, {"year", "1998"}}}, MatchLabel::kMatch),
          candidate(1, DataEntry{{{"venue", "vldb j."}, {"year", "2002"}}},
                    DataEntry{{{"venue", "very large data bases"}, {"year", "2001"}}},
                    MatchLabel::kMatch),
          candidate(5, DataEntry{{{"venue", "tods"}, {"year", "1990"}}},
                    DataEntry{{{"venue", "sigmod"}, {"year", "2010"}}}, MatchLabel::kNotMatch)};
}

}  // namespace

TEST(RunExperiment, NoPairs) {
  const auto m = builtin_matcher({});
  const auto out = run_experiment({}, setup_for("original"), *m, hp_for(*m));
  EXPECT_TRUE(out.inputs.empty());
  EXPECT_TRUE(out.predictions.empty());
}

TEST(RunExperiment, IdenticalSidesMatchWithCertainty) {
  const auto m = builtin_matcher({});
  const DataEntry e{{{"title", "reminiscences on influential papers"}}};
  const std::vector<CandidatePair> pairs{candidate(0, e, e, MatchLabel::kMatch)};
  const auto out = run_experiment(pairs, setup_for("original"), *m, hp_for(*m));
  ASSERT_EQ(out.predictions.size(), 1u);
  EXPECT_EQ(out.predictions[0].predicted, MatchLabel::kMatch);
  EXPECT_EQ(out.predictions[0].confidence, 1.0);
  EXPECT_EQ(out.inputs[0].left_entry, "COL title VAL reminiscences on influential papers");
}

TEST(RunExperiment, DictionaryPipelineMatchesManualComposition) {
  const auto dict = dictionary_annotator({{{"venue", "organization.organization"}},
                                          {{"sigmod", "album"}, {"vldb", "periodical"}}});
  const auto m = builtin_matcher({32, 0.6, 3, 1});
  const auto pairs = three_pairs();
  const auto out =
      run_experiment(pairs, setup_for("dict", dict.get(), dict.get()), *m, hp_for(*m));
  ASSERT_EQ(out.inputs.size(), 3u);
  ASSERT_EQ(out.predictions.size(), 3u);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto left = annotate(pairs[i].left, dict.get(), dict.get(), MethodId("dict"));
    const auto right = annotate(pairs[i].right, dict.get(), dict.get(), MethodId("dict"));
    const auto sp = serialize_pair(pairs[i].row_id, left, right, PromptStyle::kSlash);
    const auto want = m->predict(sp);
    EXPECT_EQ(out.inputs[i].row_id, pairs[i].row_id);
    EXPECT_EQ(out.inputs[i].method.str(), "dict");
    EXPECT_EQ(out.inputs[i].dataset_name, "unit");
    EXPECT_EQ(out.inputs[i].left_entry, sp.left);
    EXPECT_EQ(out.inputs[i].right_entry, sp.right);
    EXPECT_EQ(out.inputs[i].ground_truth, *pairs[i].ground_truth);
    EXPECT_EQ(out.predictions[i].input, out.inputs[i]);
    EXPECT_EQ(out.predictions[i].predicted, want.predicted);
    EXPECT_EQ(out.predictions[i].confidence, want.confidence);
    EXPECT_EQ(out.predictions[i].embedding, want.embedding);
  }
  EXPECT_EQ(out.inputs[0].left_entry,
            "COL venue / organization.organization VAL acm sigmod / album record COL year VAL 1998");
}

TEST(RunExperiment, DeterministicAcrossRunsAndWorkers) {
  const auto dict = dictionary_annotator({{{"year", "time.event"}}, {{"sigmod", "album"}}});
  const auto m = builtin_matcher({});
  const auto hp = hp_for(*m);
  std::vector<CandidatePair> pairs;
  for (int k = 0; k < 8; ++k) {
    for (auto p : three_pairs()) {
      p.row_id = pairs.size();
      pairs.push_back(std::move(p));
    }
  }
  const auto text = [&](std::size_t workers) {
    const auto out = run_experiment(pairs, setup_for("d", dict.get(), nullptr, workers), *m, hp);
    LogHeader h{"unit", MethodId("d"), RecordKind::kPredicted, hp, "t"};
    return to_canonical_text(LogFile::predicted(h, out.predictions));
  };
  const auto once = text(1);
  EXPECT_EQ(text(1), once);
  EXPECT_EQ(text(4), once);
}

TEST(RunExperiment, RequiresGroundTruth) {
  const auto m = builtin_matcher({});
  std::vector<CandidatePair> pairs{{3, DataEntry{{{"a", "x"}}}, DataEntry{{{"a", "x"}}}, {}}};
  try {
    run_experiment(pairs, setup_for("original"), *m, hp_for(*m));
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidArgument);
    EXPECT_EQ(e.row_id(), 3u);
  }
}

TEST(RunExperiment, HyperparametersMustDeclareDimension) {
  const auto m = builtin_matcher({});
  Hyperparameters hp;
  hp.set("dim", 7);
  EXPECT_ERROR_CODE(run_experiment({}, setup_for("original"), *m, hp),
                    ErrorCode::kDimensionMismatch);
}

TEST(RunExperiment, FirstFailingRowCarriesStage) {
  FixtureServer server([](const nlohmann::json& request) -> std::optional<std::string> {
    if (request["columns"][0]["value"] == "2002") return std::nullopt;
    return R"({"column_types": []})";
  });
  const auto remote = remote_annotator(server.endpoint(), AnnotatorKind::kColumn);
  const auto m = builtin_matcher({});
  std::vector<CandidatePair> pairs{
      candidate(0, DataEntry{{{"year", "1998"}}}, DataEntry{{{"year", "1998"}}},
                MatchLabel::kMatch),
      candidate(4, DataEntry{{{"year", "2002"}}}, DataEntry{{{"year", "2001"}}},
                MatchLabel::kMatch),
      candidate(9, DataEntry{{{"year", "2002"}}}, DataEntry{{{"year", "1990"}}},
                MatchLabel::kNotMatch)};
  for (std::size_t workers : {1u, 3u}) {
    try {
      run_experiment(pairs, setup_for("sherlock", remote.get(), nullptr, workers), *m,
                     hp_for(*m));
      FAIL() << "expected an error";
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kServiceUnavailable);
      EXPECT_EQ(e.stage(), "annotate");
      EXPECT_EQ(e.row_id(), 4u);
    }
  }
}

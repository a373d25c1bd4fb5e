#include <algorithm>
#include <exception>
#include <optional>
#include <thread>

#include "ertrace/matcher.hpp"

namespace ertrace {
namespace {

struct RowOutcome {
  InputDataRecord input;
  PredictedDataRecord prediction;
};

RowOutcome process_row(const CandidatePair& pair, const ExperimentSetup& setup,
                       const MatcherBackend& backend, std::size_t dim) {
  const char* stage = "annotate";
  try {
    const auto left = annotate(pair.left, setup.column_annotator,
                               setup.entity_annotator, setup.method);
    const auto right = annotate(pair.right, setup.column_annotator,
                                setup.entity_annotator, setup.method);
    stage = "serialize";
    const auto serialized = serialize_pair(pair.row_id, left, right, setup.style);
    stage = "predict";
    auto prediction = backend.predict(serialized);
    if (prediction.embedding.size() != dim) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "backend returned an embedding of length " +
                      std::to_string(prediction.embedding.size()) + ", expected " +
                      std::to_string(dim));
    }
    InputDataRecord input{setup.dataset_name, setup.method, pair.row_id,
                          serialized.left, serialized.right, *pair.ground_truth};
    PredictedDataRecord predicted{input, prediction.predicted, prediction.confidence,
                                  std::move(prediction.embedding)};
    return {std::move(input), std::move(predicted)};
  } catch (Error& e) {
    if (e.stage().empty()) e.in_stage(stage);
    e.at_row(pair.row_id);
    throw;
  }
}

}  // namespace

ExperimentRecords run_experiment(std::span<const CandidatePair> pairs,
                                 const ExperimentSetup& setup,
                                 const MatcherBackend& backend,
                                 const Hyperparameters& hp) {
  if (setup.method.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "experiment needs a method id");
  }
  const auto declared = hp.dim();
  if (!declared || *declared != backend.embedding_dim()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "hyperparameters must declare the backend's dim " +
                    std::to_string(backend.embedding_dim()));
  }
  for (const auto& pair : pairs) {
    if (!pair.ground_truth) {
      throw Error(ErrorCode::kInvalidArgument, "pair has no ground truth")
          .at_row(pair.row_id)
          .in_stage("input");
    }
  }

  const std::size_t n = pairs.size();
  std::vector<std::optional<RowOutcome>> outcomes(n);
  std::vector<std::exception_ptr> failures(n);
  const std::size_t workers = std::clamp<std::size_t>(setup.workers, 1, std::max<std::size_t>(n, 1));

  const auto work = [&](std::size_t first) {
    for (std::size_t i = first; i < n; i += workers) {
      try {
        outcomes[i] = process_row(pairs[i], setup, backend, *declared);
      } catch (...) {
        failures[i] = std::current_exception();
        return;
      }
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> threads;
    threads.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) threads.emplace_back(work, w);
  }

  ExperimentRecords records;
  records.inputs.reserve(n);
  records.predictions.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (failures[i]) std::rethrow_exception(failures[i]);
    if (!outcomes[i]) continue;  // a worker stopped after an earlier failure
    records.inputs.push_back(std::move(outcomes[i]->input));
    records.predictions.push_back(std::move(outcomes[i]->prediction));
  }
  return records;
}

}  // namespace ertrace

#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "ertrace/model.hpp"

namespace ertrace {

struct PairReference {
  std::string left_id;
  std::string right_id;
  MatchLabel label = MatchLabel::kNotMatch;
};

// A Magellan-style dataset: two entity tables keyed by their "id" column
// and labelled pair lists per split (train / valid / test).
struct PairedDataset {
  std::string name;
  std::map<std::string, DataEntry> left_table;
  std::map<std::string, DataEntry> right_table;
  std::map<std::string, std::vector<PairReference>> splits;
};

// Reads tableA.csv, tableB.csv and whichever of train.csv, valid.csv and
// test.csv exist. Cell text is kept verbatim; the id column is dropped from
// the entries. Throws kMissingFile, kMalformed, kDanglingReference or
// kNonBinaryLabel.
PairedDataset load_magellan(const std::filesystem::path& dir);

// row_id is the pair's line index within the split file (0-based, header
// excluded). Throws kUnknownSplit.
std::vector<CandidatePair> to_candidate_pairs(const PairedDataset& dataset,
                                              const std::string& split);

}  // namespace ertrace

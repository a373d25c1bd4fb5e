#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace ertrace {

// A whitespace-delimited token with its byte range in the source text.
struct Token {
  std::string text;
  std::size_t start = 0;
  std::size_t end = 0;

  friend bool operator==(const Token&, const Token&) = default;
};

std::vector<Token> tokenize(std::string_view text);

enum class DiffOp { kKeep, kInsert, kDelete };

// kInsert tokens index into the "after" text, kKeep and kDelete into the
// "before" text.
struct DiffEntry {
  DiffOp op;
  Token token;

  friend bool operator==(const DiffEntry&, const DiffEntry&) = default;
};

struct TokenDiff {
  std::vector<DiffEntry> entries;

  bool empty() const;  // no insertions and no deletions
  std::vector<Token> inserted() const;
  std::vector<Token> deleted() const;
  // "+tok" / "-tok" for each change, space-joined; keeps are omitted.
  std::string render() const;

  friend bool operator==(const TokenDiff&, const TokenDiff&) = default;
};

// Longest-common-subsequence diff over whitespace tokens. When both are
// possible, an insertion is emitted before a deletion.
TokenDiff diff_tokens(std::string_view before, std::string_view after);

}  // namespace ertrace

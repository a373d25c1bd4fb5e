#include "ertrace/token_diff.hpp"

#include <algorithm>
#include <cstdint>

namespace ertrace {
namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

}  // namespace

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    if (i == text.size()) break;
    const std::size_t start = i;
    while (i < text.size() && !is_space(text[i])) ++i;
    tokens.push_back({std::string(text.substr(start, i - start)), start, i});
  }
  return tokens;
}

bool TokenDiff::empty() const {
  for (const auto& entry : entries) {
    if (entry.op != DiffOp::kKeep) return false;
  }
  return true;
}

std::vector<Token> TokenDiff::inserted() const {
  std::vector<Token> out;
  for (const auto& entry : entries) {
    if (entry.op == DiffOp::kInsert) out.push_back(entry.token);
  }
  return out;
}

std::vector<Token> TokenDiff::deleted() const {
  std::vector<Token> out;
  for (const auto& entry : entries) {
    if (entry.op == DiffOp::kDelete) out.push_back(entry.token);
  }
  return out;
}

std::string TokenDiff::render() const {
  std::string out;
  for (const auto& entry : entries) {
    if (entry.op == DiffOp::kKeep) continue;
    if (!out.empty()) out += ' ';
    out += entry.op == DiffOp::kInsert ? '+' : '-';
    out += entry.token.text;
  }
  return out;
}

TokenDiff diff_tokens(std::string_view before, std::string_view after) {
  const auto a = tokenize(before);
  const auto b = tokenize(after);
  const std::size_t n = a.size();
  const std::size_t m = b.size();

  // lcs[i][j] = LCS length of a[i..] and b[j..].
  std::vector<std::uint32_t> lcs((n + 1) * (m + 1), 0);
  const auto at = [&](std::size_t i, std::size_t j) -> std::uint32_t& {
    return lcs[i * (m + 1) + j];
  };
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t j = m; j-- > 0;) {
      at(i, j) = a[i].text == b[j].text ? at(i + 1, j + 1) + 1
                                        : std::max(at(i + 1, j), at(i, j + 1));
    }
  }

  TokenDiff diff;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < n || j < m) {
    if (i < n && j < m && a[i].text == b[j].text) {
      diff.entries.push_back({DiffOp::kKeep, a[i]});
      ++i;
      ++j;
    } else if (j < m && (i == n || at(i, j + 1) >= at(i + 1, j))) {
      diff.entries.push_back({DiffOp::kInsert, b[j]});
      ++j;
    } else {
      diff.entries.push_back({DiffOp::kDelete, a[i]});
      ++i;
    }
  }
  return diff;
}

}  // namespace ertrace

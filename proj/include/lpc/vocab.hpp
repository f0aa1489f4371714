#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "lpc/io_util.hpp"

namespace lpc {

// Ordered set of unique tokens; a token's index is its position.
// Tokens are kept in first-appearance order, so construction is deterministic
// given the input stream order.
class Vocabulary {
 public:
  Vocabulary() = default;

  // Adds a token if unseen; returns its index either way.
  int add(std::string_view token) {
    auto it = index_.find(std::string(token));
    if (it != index_.end()) return it->second;
    int idx = static_cast<int>(tokens_.size());
    tokens_.emplace_back(token);
    index_.emplace(tokens_.back(), idx);
    return idx;
  }

  std::optional<int> lookup(std::string_view token) const {
    auto it = index_.find(std::string(token));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  const std::string& name(int index) const {
    if (index < 0 || index >= size())
      throw std::out_of_range("Vocabulary::name: index " + std::to_string(index));
    return tokens_[static_cast<std::size_t>(index)];
  }

  int size() const { return static_cast<int>(tokens_.size()); }
  const std::vector<std::string>& tokens() const { return tokens_; }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, int> index_;
};

template <typename... Streams>
Vocabulary build_vocab(const Streams&... streams) {
  Vocabulary vocab;
  (..., [&vocab](const auto& stream) {
    for (const auto& token : stream) vocab.add(token);
  }(streams));
  return vocab;
}

// Vocab file format: one token per line, line number - 1 = index.
inline std::string serialize_vocab(const Vocabulary& vocab) {
  std::string out;
  for (const auto& tok : vocab.tokens()) {
    out += tok;
    out += '\n';
  }
  return out;
}

inline Vocabulary parse_vocab(std::string_view content) {
  Vocabulary vocab;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < content.size()) {
    std::size_t eol = content.find('\n', pos);
    if (eol == std::string_view::npos) eol = content.size();
    ++line_no;
    std::string_view token = content.substr(pos, eol - pos);
    if (!token.empty() && token.back() == '\r') token.remove_suffix(1);
    if (token.empty()) throw ParseError("empty vocabulary token", line_no);
    if (vocab.lookup(token)) throw ParseError("duplicate vocabulary token", line_no);
    vocab.add(token);
    pos = eol + 1;
  }
  return vocab;
}

}  // namespace lpc

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "lpc/vocab.hpp"

namespace lpc {

// Sparse nonnegative count vector over a vocabulary. `dim` records the size
// of the vocabulary the indices refer to and stands in for vocabulary
// identity when two bags meet in an operation. Entries are sorted by index
// and never hold zeros.
struct SparseBag {
  int dim = 0;
  std::vector<std::pair<int, double>> entries;

  double value_at(int index) const {
    auto it = std::lower_bound(
        entries.begin(), entries.end(), index,
        [](const auto& e, int i) { return e.first < i; });
    return (it != entries.end() && it->first == index) ? it->second : 0.0;
  }

  double total() const {
    double s = 0.0;
    for (const auto& [i, v] : entries) s += v;
    return s;
  }

  bool empty() const { return entries.empty(); }

  bool operator==(const SparseBag&) const = default;
};

// Builds a bag from arbitrary (index, value) accumulation; drops zeros,
// rejects negatives and out-of-range indices.
inline SparseBag make_bag(int dim, const std::map<int, double>& accum) {
  SparseBag bag;
  bag.dim = dim;
  bag.entries.reserve(accum.size());
  for (const auto& [idx, val] : accum) {
    if (idx < 0 || idx >= dim)
      throw std::invalid_argument("make_bag: index out of range: " +
                                  std::to_string(idx));
    if (val < 0.0)
      throw std::invalid_argument("make_bag: negative count at index " +
                                  std::to_string(idx));
    if (val != 0.0) bag.entries.emplace_back(idx, val);
  }
  return bag;
}

enum class OovPolicy { drop, error };

// Token list -> count bag. Out-of-vocabulary tokens are dropped (tallied via
// `dropped` when given) or raise, per policy.
inline SparseBag bag_of(const std::vector<std::string>& tokens,
                        const Vocabulary& vocab,
                        OovPolicy oov = OovPolicy::drop,
                        std::size_t* dropped = nullptr) {
  std::map<int, double> accum;
  std::size_t miss = 0;
  for (const auto& tok : tokens) {
    if (auto idx = vocab.lookup(tok)) {
      accum[*idx] += 1.0;
    } else if (oov == OovPolicy::error) {
      throw std::invalid_argument("bag_of: token not in vocabulary: " + tok);
    } else {
      ++miss;
    }
  }
  if (dropped) *dropped = miss;
  return make_bag(vocab.size(), accum);
}

// Name -> count map (symbolic sprite records) -> count bag.
inline SparseBag bag_of(const std::map<std::string, std::int64_t>& counts,
                        const Vocabulary& vocab,
                        OovPolicy oov = OovPolicy::drop,
                        std::size_t* dropped = nullptr) {
  std::map<int, double> accum;
  std::size_t miss = 0;
  for (const auto& [name, count] : counts) {
    if (count < 0)
      throw std::invalid_argument("bag_of: negative count for " + name);
    if (count == 0) continue;
    if (auto idx = vocab.lookup(name)) {
      accum[*idx] += static_cast<double>(count);
    } else if (oov == OovPolicy::error) {
      throw std::invalid_argument("bag_of: name not in vocabulary: " + name);
    } else {
      ++miss;
    }
  }
  if (dropped) *dropped = miss;
  return make_bag(vocab.size(), accum);
}

// Element-wise sum. Empty input yields the empty bag of dimension `dim_hint`.
inline SparseBag combine_bags(std::span<const SparseBag> bags, int dim_hint = 0) {
  if (bags.empty()) return SparseBag{dim_hint, {}};
  std::map<int, double> accum;
  int dim = bags.front().dim;
  for (const auto& bag : bags) {
    if (bag.dim != dim)
      throw std::invalid_argument("combine_bags: mixed vocabularies (dim " +
                                  std::to_string(bag.dim) + " vs " +
                                  std::to_string(dim) + ")");
    for (const auto& [idx, val] : bag.entries) accum[idx] += val;
  }
  return make_bag(dim, accum);
}

inline SparseBag combine_bags(const std::vector<SparseBag>& bags, int dim_hint = 0) {
  return combine_bags(std::span<const SparseBag>(bags), dim_hint);
}

// Re-indexes a bag from one vocabulary into another by token name.
inline SparseBag remap_bag(const SparseBag& bag, const Vocabulary& from,
                           const Vocabulary& to, OovPolicy oov = OovPolicy::drop,
                           std::size_t* dropped = nullptr) {
  if (bag.dim != from.size())
    throw std::invalid_argument("remap_bag: bag does not match source vocabulary");
  std::map<int, double> accum;
  std::size_t miss = 0;
  for (const auto& [idx, val] : bag.entries) {
    const std::string& name = from.name(idx);
    if (auto to_idx = to.lookup(name)) {
      accum[*to_idx] += val;
    } else if (oov == OovPolicy::error) {
      throw std::invalid_argument("remap_bag: token not in target vocabulary: " +
                                  name);
    } else {
      ++miss;
    }
  }
  if (dropped) *dropped = miss;
  return make_bag(to.size(), accum);
}

inline double dot(const SparseBag& a, const SparseBag& b) {
  double s = 0.0;
  auto ia = a.entries.begin();
  auto ib = b.entries.begin();
  while (ia != a.entries.end() && ib != b.entries.end()) {
    if (ia->first < ib->first) {
      ++ia;
    } else if (ib->first < ia->first) {
      ++ib;
    } else {
      s += ia->second * ib->second;
      ++ia;
      ++ib;
    }
  }
  return s;
}

inline double l2_norm(const SparseBag& a) {
  double s = 0.0;
  for (const auto& [i, v] : a.entries) s += v * v;
  return std::sqrt(s);
}

}  // namespace lpc

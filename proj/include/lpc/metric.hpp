#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lpc/bag.hpp"
#include "lpc/corpus.hpp"

namespace lpc {

// Comment similarity is weighted 75% against 25% for frame similarity: a
// shared pair of comments says more about closeness than shared sprites,
// which adjacent video frames exhibit constantly.
struct DistanceConfig {
  double text_weight = 0.75;
  double frame_weight = 0.25;

  void validate() const {
    if (text_weight < 0.0 || frame_weight < 0.0 ||
        std::abs(text_weight + frame_weight - 1.0) > 1e-9)
      throw std::invalid_argument(
          "DistanceConfig: weights must be non-negative and sum to 1");
  }
};

// 1 - cos(a, b) in [0, 1]. A single all-zero bag is treated as maximally far
// (distance 1); two all-zero bags as identical (distance 0), so empty
// comments cluster together instead of faulting.
inline double cosine_distance(const SparseBag& a, const SparseBag& b) {
  if (a.dim != b.dim)
    throw std::invalid_argument("cosine_distance: vocabulary mismatch (dim " +
                                std::to_string(a.dim) + " vs " +
                                std::to_string(b.dim) + ")");
  const bool a_zero = a.empty(), b_zero = b.empty();
  if (a_zero && b_zero) return 0.0;
  if (a_zero || b_zero) return 1.0;
  if (a.entries == b.entries) return 0.0;  // exact zero for identical bags
  double d = 1.0 - dot(a, b) / (l2_norm(a) * l2_norm(b));
  return std::clamp(d, 0.0, 1.0);
}

inline double paired_distance(const PairedExample& x, const PairedExample& y,
                              const DistanceConfig& cfg = {}) {
  return cfg.text_weight * cosine_distance(x.comment_bag, y.comment_bag) +
         cfg.frame_weight * cosine_distance(x.sprite_bag, y.sprite_bag);
}

// Frame-only distance, used when text is unavailable (test-time cluster
// assignment).
inline double frame_distance(const PairedExample& x, const PairedExample& y) {
  return cosine_distance(x.sprite_bag, y.sprite_bag);
}

}  // namespace lpc

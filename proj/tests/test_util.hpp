#pragma once

#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "lpc/bag.hpp"
#include "lpc/cluster.hpp"
#include "lpc/corpus.hpp"
#include "lpc/rng.hpp"

namespace lpc_test {

inline lpc::SparseBag random_bag(lpc::Rng& rng, int dim, int max_nnz,
                                 int max_count = 9) {
  std::map<int, double> accum;
  int nnz = static_cast<int>(rng.below(static_cast<std::uint64_t>(max_nnz) + 1));
  for (int i = 0; i < nnz; ++i) {
    int idx = static_cast<int>(rng.below(static_cast<std::uint64_t>(dim)));
    accum[idx] += 1.0 + static_cast<double>(rng.below(
                            static_cast<std::uint64_t>(max_count)));
  }
  return lpc::make_bag(dim, accum);
}

// Hand-built corpus: one row per example as (sprite counts, comment text).
inline lpc::Corpus corpus_from(
    const std::vector<std::pair<std::map<std::string, std::int64_t>, std::string>>&
        rows) {
  std::vector<lpc::RawExample> raws;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    lpc::RawExample raw;
    char buf[16];
    std::snprintf(buf, sizeof(buf), "ex%04zu", i);
    raw.id = buf;
    raw.frame_timestamps = {static_cast<std::int64_t>(3 * i),
                            static_cast<std::int64_t>(3 * i + 1)};
    raw.sprite_counts = rows[i].first;
    raw.comment_text = rows[i].second;
    raws.push_back(std::move(raw));
  }
  return lpc::finalize_corpus(raws);
}

// Random corpus of sparse sprite/word bags, loose cluster-ish structure.
inline lpc::Corpus random_corpus(lpc::Rng& rng, std::size_t n) {
  static const char* sprite_names[] = {"goomba", "koopa", "pipe", "block",
                                       "coin", "mario", "cloud", "bush"};
  static const char* word_names[] = {"jump",  "watch", "level", "there",
                                     "whoa",  "okay",  "nice",  "again",
                                     "close", "bowser"};
  std::vector<std::pair<std::map<std::string, std::int64_t>, std::string>> rows;
  for (std::size_t i = 0; i < n; ++i) {
    std::map<std::string, std::int64_t> sprites;
    auto ns = 1 + rng.below(4);
    for (std::uint64_t s = 0; s < ns; ++s)
      sprites[sprite_names[rng.below(8)]] += 1 + static_cast<std::int64_t>(rng.below(3));
    std::string comment;
    auto nw = 1 + rng.below(5);
    for (std::uint64_t w = 0; w < nw; ++w) {
      if (!comment.empty()) comment += ' ';
      comment += word_names[rng.below(10)];
    }
    rows.emplace_back(std::move(sprites), std::move(comment));
  }
  return corpus_from(rows);
}

// Exhaustive k-medoids reference: the best total cost over all C(n, k)
// medoid subsets, summing each point's distance to its nearest medoid.
inline double brute_force_kmedoids_cost(const lpc::DistanceMatrix& dist, int k) {
  const int n = static_cast<int>(dist.size());
  std::vector<int> pick(static_cast<std::size_t>(k));
  double best = std::numeric_limits<double>::infinity();
  auto recurse = [&](auto&& self, int start, int depth) -> void {
    if (depth == k) {
      double cost = 0.0;
      for (int j = 0; j < n; ++j) {
        double d = std::numeric_limits<double>::infinity();
        for (int m : pick)
          d = std::min(d, dist(static_cast<std::size_t>(m),
                               static_cast<std::size_t>(j)));
        cost += d;
      }
      best = std::min(best, cost);
      return;
    }
    for (int i = start; i <= n - (k - depth); ++i) {
      pick[static_cast<std::size_t>(depth)] = i;
      self(self, i + 1, depth + 1);
    }
  };
  recurse(recurse, 0, 0);
  return best;
}

inline std::vector<double> dense(const lpc::SparseBag& bag) {
  std::vector<double> v(static_cast<std::size_t>(bag.dim), 0.0);
  for (const auto& [idx, val] : bag.entries)
    v[static_cast<std::size_t>(idx)] = val;
  return v;
}

// Independent dense-vector reference for the cosine distance.
inline double dense_cosine_distance(const std::vector<double>& a,
                                    const std::vector<double>& b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 && nb == 0.0) return 0.0;
  if (na == 0.0 || nb == 0.0) return 1.0;
  return 1.0 - dot / (std::sqrt(na) * std::sqrt(nb));
}

}  // namespace lpc_test

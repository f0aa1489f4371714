#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "lpc/corpus.hpp"
#include "lpc/io_util.hpp"
#include "lpc/metric.hpp"
#include "lpc/parallel.hpp"

namespace lpc {

class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  explicit DistanceMatrix(std::size_t n) : n_(n), d_(n * n, 0.0) {}

  double operator()(std::size_t i, std::size_t j) const { return d_[i * n_ + j]; }
  void set(std::size_t i, std::size_t j, double v) {
    d_[i * n_ + j] = v;
    d_[j * n_ + i] = v;
  }
  std::size_t size() const { return n_; }

 private:
  std::size_t n_ = 0;
  std::vector<double> d_;
};

inline DistanceMatrix build_distance_matrix(const Corpus& corpus,
                                            const DistanceConfig& cfg = {},
                                            int threads = 1) {
  cfg.validate();
  const std::size_t n = corpus.size();
  DistanceMatrix mat(n);
  parallel_for(n, threads, [&](std::size_t i) {
    for (std::size_t j = i + 1; j < n; ++j)
      mat.set(i, j, paired_distance(corpus.examples[i], corpus.examples[j], cfg));
  });
  return mat;
}

struct KMedoidsResult {
  std::vector<int> medoids;     // ascending example indices
  std::vector<int> assignment;  // example index -> cluster index
  double total_cost = 0.0;      // sum of distance to nearest medoid
  double distortion = 0.0;      // sum of SQUARED distance to nearest medoid
};

// PAM over a precomputed distance matrix.
//
// BUILD: the first medoid minimizes total distance to all points; each
// further medoid maximizes the total distance reduction. SWAP: repeatedly
// apply the single medoid<->non-medoid exchange with the largest cost
// reduction until none reduces the cost. Every tie breaks toward the lowest
// example index, so the procedure is deterministic for a given input order.
inline KMedoidsResult kmedoids_matrix(const DistanceMatrix& dist, int k) {
  const std::size_t n = dist.size();
  if (k < 1 || static_cast<std::size_t>(k) > n)
    throw std::invalid_argument("kmedoids: k must be in [1, n], got " +
                                std::to_string(k));

  std::vector<int> medoids;
  medoids.reserve(static_cast<std::size_t>(k));
  std::vector<char> is_medoid(n, 0);
  std::vector<double> nearest(n, std::numeric_limits<double>::infinity());

  // BUILD
  {
    std::size_t best = 0;
    double best_sum = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      double sum = 0.0;
      for (std::size_t j = 0; j < n; ++j) sum += dist(i, j);
      if (sum < best_sum) {
        best_sum = sum;
        best = i;
      }
    }
    medoids.push_back(static_cast<int>(best));
    is_medoid[best] = 1;
    for (std::size_t j = 0; j < n; ++j) nearest[j] = dist(best, j);
  }
  while (medoids.size() < static_cast<std::size_t>(k)) {
    std::size_t best = n;
    double best_gain = -1.0;
    for (std::size_t c = 0; c < n; ++c) {
      if (is_medoid[c]) continue;
      double gain = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        double diff = nearest[j] - dist(c, j);
        if (diff > 0.0) gain += diff;
      }
      if (gain > best_gain) {
        best_gain = gain;
        best = c;
      }
    }
    medoids.push_back(static_cast<int>(best));
    is_medoid[best] = 1;
    for (std::size_t j = 0; j < n; ++j)
      nearest[j] = std::min(nearest[j], dist(best, j));
  }
  std::sort(medoids.begin(), medoids.end());

  // Nearest/second-nearest bookkeeping for O(n) swap deltas.
  std::vector<int> nearest_idx(n, 0);  // position in the medoid list
  std::vector<double> second(n, 0.0);
  auto recompute = [&]() {
    for (std::size_t j = 0; j < n; ++j) {
      double d1 = std::numeric_limits<double>::infinity();
      double d2 = std::numeric_limits<double>::infinity();
      int i1 = 0;
      for (std::size_t m = 0; m < medoids.size(); ++m) {
        double d = dist(static_cast<std::size_t>(medoids[m]), j);
        if (d < d1) {
          d2 = d1;
          d1 = d;
          i1 = static_cast<int>(m);
        } else if (d < d2) {
          d2 = d;
        }
      }
      nearest[j] = d1;
      second[j] = d2;
      nearest_idx[j] = i1;
    }
  };
  recompute();

  // SWAP
  if (static_cast<std::size_t>(k) < n) {
    for (;;) {
      double best_delta = -1e-12;  // strict improvement, with float guard
      std::size_t best_m = medoids.size();
      std::size_t best_h = n;
      for (std::size_t m = 0; m < medoids.size(); ++m) {
        for (std::size_t h = 0; h < n; ++h) {
          if (is_medoid[h]) continue;
          double delta = 0.0;
          for (std::size_t j = 0; j < n; ++j) {
            double dh = dist(h, j);
            if (nearest_idx[j] == static_cast<int>(m)) {
              delta += std::min(dh, second[j]) - nearest[j];
            } else if (dh < nearest[j]) {
              delta += dh - nearest[j];
            }
          }
          if (delta < best_delta) {
            best_delta = delta;
            best_m = m;
            best_h = h;
          }
        }
      }
      if (best_m == medoids.size()) break;
      is_medoid[static_cast<std::size_t>(medoids[best_m])] = 0;
      is_medoid[best_h] = 1;
      medoids[best_m] = static_cast<int>(best_h);
      std::sort(medoids.begin(), medoids.end());
      recompute();
    }
  }

  KMedoidsResult result;
  result.medoids = medoids;
  result.assignment.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    result.assignment[j] = nearest_idx[j];
    result.total_cost += nearest[j];
    result.distortion += nearest[j] * nearest[j];
  }
  // A medoid always belongs to its own cluster, even when another medoid
  // sits at distance zero.
  for (std::size_t m = 0; m < medoids.size(); ++m)
    result.assignment[static_cast<std::size_t>(medoids[m])] = static_cast<int>(m);
  return result;
}

struct SelectionTraceRow {
  int k = 0;
  double distortion = 0.0;  // S_k
  double alpha = 0.0;       // weight factor, 0 for k = 1
  double f = 1.0;           // distortion ratio f(k)
};

struct SelectKResult {
  int k_star = 1;
  std::vector<SelectionTraceRow> trace;
};

// Distortion-ratio selection. S_k is the total within-cluster squared
// distance to the medoid; f(1) = 1 and
//   f(k) = S_k / (alpha_k * S_{k-1}),
//   alpha_2 = 1 - 3 / (4 D),  alpha_k = alpha_{k-1} + (1 - alpha_{k-1}) / 6,
// with D the combined vocabulary dimensionality. k* is the argmin of f over
// candidates with f < threshold; when nothing falls below the threshold the
// data carries no exploitable structure and k* = 1.
inline SelectKResult select_k_matrix(const DistanceMatrix& dist, int k_max,
                                     int dimensionality,
                                     double threshold = 0.85) {
  if (k_max < 1 || static_cast<std::size_t>(k_max) > dist.size())
    throw std::invalid_argument("select_k: k_max must be in [1, n]");
  if (dimensionality < 1)
    throw std::invalid_argument("select_k: dimensionality must be positive");

  SelectKResult result;
  std::vector<double> s(static_cast<std::size_t>(k_max) + 1, 0.0);
  double alpha_prev = 0.0;
  for (int k = 1; k <= k_max; ++k) {
    s[static_cast<std::size_t>(k)] = kmedoids_matrix(dist, k).distortion;
    SelectionTraceRow row;
    row.k = k;
    row.distortion = s[static_cast<std::size_t>(k)];
    if (k == 1) {
      row.alpha = 0.0;
      row.f = 1.0;
    } else {
      double alpha = (k == 2) ? 1.0 - 3.0 / (4.0 * dimensionality)
                              : alpha_prev + (1.0 - alpha_prev) / 6.0;
      row.alpha = alpha;
      double prev = s[static_cast<std::size_t>(k) - 1];
      row.f = prev > 0.0 ? row.distortion / (alpha * prev) : 1.0;
      alpha_prev = alpha;
    }
    result.trace.push_back(row);
  }

  double best_f = std::numeric_limits<double>::infinity();
  int best_k = 1;
  bool found = false;
  for (const auto& row : result.trace) {
    if (row.f < threshold && row.f < best_f) {
      best_f = row.f;
      best_k = row.k;
      found = true;
    }
  }
  result.k_star = found ? best_k : 1;
  return result;
}

struct ClusterModel {
  int k = 0;
  std::vector<std::string> medoid_ids;
  std::map<std::string, int> assignment;  // example id -> cluster index
  DistanceConfig distance{};
  std::vector<SelectionTraceRow> selection_trace;
  std::uint64_t seed = 0;
  double selection_threshold = 0.85;
};

inline ClusterModel model_from_result(const Corpus& corpus,
                                      const KMedoidsResult& res,
                                      const DistanceConfig& cfg,
                                      std::uint64_t seed) {
  ClusterModel model;
  model.k = static_cast<int>(res.medoids.size());
  for (int m : res.medoids)
    model.medoid_ids.push_back(corpus.examples[static_cast<std::size_t>(m)].id);
  for (std::size_t j = 0; j < corpus.size(); ++j)
    model.assignment[corpus.examples[j].id] = res.assignment[j];
  model.distance = cfg;
  model.seed = seed;
  return model;
}

// PAM itself is deterministic; the seed is carried through for provenance in
// serialized models.
inline ClusterModel kmedoids(const Corpus& corpus, int k,
                             const DistanceConfig& cfg = {},
                             std::uint64_t seed = 0, int threads = 1) {
  DistanceMatrix dist = build_distance_matrix(corpus, cfg, threads);
  return model_from_result(corpus, kmedoids_matrix(dist, k), cfg, seed);
}

inline SelectKResult select_k(const Corpus& corpus, int k_max,
                              const DistanceConfig& cfg = {},
                              std::uint64_t seed = 0, double threshold = 0.85,
                              int threads = 1) {
  (void)seed;
  DistanceMatrix dist = build_distance_matrix(corpus, cfg, threads);
  return select_k_matrix(dist, k_max,
                         corpus.sprite_vocab.size() + corpus.word_vocab.size(),
                         threshold);
}

// select_k + final PAM fit at k*, sharing one distance matrix.
inline ClusterModel cluster_corpus(const Corpus& corpus, int k_max,
                                   const DistanceConfig& cfg = {},
                                   std::uint64_t seed = 0,
                                   double threshold = 0.85, int threads = 1) {
  DistanceMatrix dist = build_distance_matrix(corpus, cfg, threads);
  SelectKResult sel = select_k_matrix(
      dist, k_max, corpus.sprite_vocab.size() + corpus.word_vocab.size(),
      threshold);
  ClusterModel model =
      model_from_result(corpus, kmedoids_matrix(dist, sel.k_star), cfg, seed);
  model.selection_trace = sel.trace;
  model.selection_threshold = threshold;
  return model;
}

// Frame-only assignment: the cluster of the medoid nearest in sprite-bag
// cosine distance; ties go to the lowest cluster index. The bag must already
// live in the model's training sprite vocabulary.
inline int assign_test_bag(const SparseBag& sprite_bag,
                           const std::vector<SparseBag>& medoid_sprite_bags) {
  if (medoid_sprite_bags.empty())
    throw std::invalid_argument("assign_test: empty cluster model");
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t m = 0; m < medoid_sprite_bags.size(); ++m) {
    double d = cosine_distance(sprite_bag, medoid_sprite_bags[m]);
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(m);
    }
  }
  return best;
}

inline std::vector<SparseBag> medoid_sprite_bags(const ClusterModel& model,
                                                 const Corpus& train) {
  std::map<std::string, const PairedExample*> by_id;
  for (const auto& ex : train.examples) by_id[ex.id] = &ex;
  std::vector<SparseBag> bags;
  bags.reserve(model.medoid_ids.size());
  for (const auto& id : model.medoid_ids) {
    auto it = by_id.find(id);
    if (it == by_id.end())
      throw std::invalid_argument("cluster model medoid id not in corpus: " + id);
    bags.push_back(it->second->sprite_bag);
  }
  return bags;
}

inline int assign_test(const PairedExample& test, const ClusterModel& model,
                       const Corpus& train) {
  return assign_test_bag(test.sprite_bag, medoid_sprite_bags(model, train));
}

inline nlohmann::json cluster_model_to_json(const ClusterModel& model) {
  nlohmann::json trace = nlohmann::json::array();
  for (const auto& row : model.selection_trace)
    trace.push_back({{"k", row.k},
                     {"distortion", row.distortion},
                     {"alpha", row.alpha},
                     {"f", row.f}});
  nlohmann::json assignment = nlohmann::json::object();
  for (const auto& [id, c] : model.assignment) assignment[id] = c;
  return nlohmann::json{{"k", model.k},
                        {"medoids", model.medoid_ids},
                        {"assignment", assignment},
                        {"distance",
                         {{"text_weight", model.distance.text_weight},
                          {"frame_weight", model.distance.frame_weight}}},
                        {"selection_trace", trace},
                        {"selection_threshold", model.selection_threshold},
                        {"seed", model.seed}};
}

inline ClusterModel cluster_model_from_json(const nlohmann::json& obj) {
  ClusterModel model;
  try {
    model.k = obj.at("k").get<int>();
    model.medoid_ids = obj.at("medoids").get<std::vector<std::string>>();
    for (const auto& [id, c] : obj.at("assignment").items())
      model.assignment[id] = c.get<int>();
    model.distance.text_weight = obj.at("distance").at("text_weight").get<double>();
    model.distance.frame_weight =
        obj.at("distance").at("frame_weight").get<double>();
    for (const auto& row : obj.at("selection_trace")) {
      model.selection_trace.push_back({row.at("k").get<int>(),
                                       row.at("distortion").get<double>(),
                                       row.at("alpha").get<double>(),
                                       row.at("f").get<double>()});
    }
    model.selection_threshold = obj.at("selection_threshold").get<double>();
    model.seed = obj.at("seed").get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid cluster model: ") + e.what());
  }
  if (model.k != static_cast<int>(model.medoid_ids.size()))
    throw ParseError("cluster model: k does not match medoid count");
  for (const auto& [id, c] : model.assignment)
    if (c < 0 || c >= model.k)
      throw ParseError("cluster model: assignment out of range for " + id);
  return model;
}

inline std::string serialize_cluster_model(const ClusterModel& model) {
  return cluster_model_to_json(model).dump(2) + "\n";
}

inline ClusterModel parse_cluster_model(std::string_view content) {
  nlohmann::json obj;
  try {
    obj = nlohmann::json::parse(content);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid cluster model JSON: ") + e.what());
  }
  return cluster_model_from_json(obj);
}

}  // namespace lpc

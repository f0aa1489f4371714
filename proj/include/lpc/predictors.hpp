#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "lpc/cluster.hpp"
#include "lpc/corpus.hpp"
#include "lpc/metric.hpp"
#include "lpc/rng.hpp"

namespace lpc {

enum class PredictorKind { random, forest, knn };

struct PredictorSpec {
  PredictorKind kind = PredictorKind::forest;
  int knn_k = 5;
  int trees = 10;
  int max_depth = 200;
  std::uint64_t seed = 0;
  bool bootstrap = true;  // test hook: off enables exact single-tree oracles

  void validate() const {
    if (knn_k < 1) throw std::invalid_argument("PredictorSpec: knn_k must be >= 1");
    if (trees < 1) throw std::invalid_argument("PredictorSpec: trees must be >= 1");
    if (max_depth < 1)
      throw std::invalid_argument("PredictorSpec: max_depth must be >= 1");
  }
};

// ---------------------------------------------------------------------------
// Random: ignores the input, returns a uniformly sampled training comment
// bag. Draw i is derived from (seed, i), so a sequence of predictions is
// reproducible and draws can be made for any index independently of order.
// ---------------------------------------------------------------------------
class RandomPredictor {
 public:
  RandomPredictor() = default;
  RandomPredictor(std::vector<SparseBag> comment_bags, std::uint64_t seed)
      : bags_(std::move(comment_bags)), seed_(seed) {
    if (bags_.empty())
      throw std::invalid_argument("RandomPredictor: empty training set");
  }

  const SparseBag& predict_at(std::size_t draw_index) const {
    Rng rng(derive_seed(seed_, draw_index));
    return bags_[static_cast<std::size_t>(rng.below(bags_.size()))];
  }

  const SparseBag& predict() { return predict_at(next_draw_++); }

  const std::vector<SparseBag>& bags() const { return bags_; }
  std::uint64_t seed() const { return seed_; }

 private:
  std::vector<SparseBag> bags_;
  std::uint64_t seed_ = 0;
  std::size_t next_draw_ = 0;
};

// ---------------------------------------------------------------------------
// Random forest regressor mapping sprite-count vectors to word-count
// vectors. Each tree sees a bootstrap resample; each node considers
// ceil(sqrt(F)) candidate features and picks the axis-aligned split
// (feature <= threshold at midpoints of consecutive distinct values)
// minimizing the size-weighted per-dimension output variance, which equals
// the summed squared error of the two children. Leaves store the mean output
// vector of their rows.
// ---------------------------------------------------------------------------
struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  SparseBag mean;  // leaves only
};

struct Tree {
  std::vector<TreeNode> nodes;  // node 0 is the root
};

class ForestModel {
 public:
  ForestModel() = default;
  ForestModel(std::vector<Tree> trees, int feature_dim, int output_dim)
      : trees_(std::move(trees)), feature_dim_(feature_dim), output_dim_(output_dim) {}

  // Average of the per-tree leaf vectors.
  SparseBag predict(const SparseBag& sprite_bag) const {
    std::map<int, double> accum;
    for (const auto& tree : trees_) {
      int node = 0;
      while (tree.nodes[static_cast<std::size_t>(node)].feature >= 0) {
        const auto& nd = tree.nodes[static_cast<std::size_t>(node)];
        node = sprite_bag.value_at(nd.feature) <= nd.threshold ? nd.left : nd.right;
      }
      for (const auto& [idx, v] : tree.nodes[static_cast<std::size_t>(node)].mean.entries)
        accum[idx] += v;
    }
    const double scale = 1.0 / static_cast<double>(trees_.size());
    for (auto& [idx, v] : accum) v *= scale;
    return make_bag(output_dim_, accum);
  }

  const std::vector<Tree>& trees() const { return trees_; }
  int feature_dim() const { return feature_dim_; }
  int output_dim() const { return output_dim_; }

 private:
  std::vector<Tree> trees_;
  int feature_dim_ = 0;
  int output_dim_ = 0;
};

namespace detail {

struct TreeBuilder {
  const std::vector<std::vector<double>>& x;  // dense features, n x F
  const std::vector<SparseBag>& y;            // outputs
  int feature_dim;
  int output_dim;
  int max_depth;
  int candidates_per_node;
  Rng& rng;
  Tree tree;

  // Dense scratch over output dims, reset between uses via touched lists.
  std::vector<double> sum_total;
  std::vector<double> sum_left;

  TreeBuilder(const std::vector<std::vector<double>>& x_,
              const std::vector<SparseBag>& y_, int feature_dim_, int output_dim_,
              int max_depth_, Rng& rng_)
      : x(x_),
        y(y_),
        feature_dim(feature_dim_),
        output_dim(output_dim_),
        max_depth(max_depth_),
        candidates_per_node(static_cast<int>(
            std::ceil(std::sqrt(static_cast<double>(feature_dim_))))),
        rng(rng_),
        sum_total(static_cast<std::size_t>(output_dim_), 0.0),
        sum_left(static_cast<std::size_t>(output_dim_), 0.0) {}

  int build(std::vector<std::size_t>& rows, int depth) {
    const std::size_t m = rows.size();

    // Node output statistics: total sum vector, its squared norm, and the
    // summed squared row norms.
    std::vector<int> touched;
    double sq_rows = 0.0;
    for (std::size_t r : rows) {
      for (const auto& [idx, v] : y[r].entries) {
        if (sum_total[static_cast<std::size_t>(idx)] == 0.0) touched.push_back(idx);
        sum_total[static_cast<std::size_t>(idx)] += v;
        sq_rows += v * v;
      }
    }
    double norm_total = 0.0;
    for (int idx : touched) {
      double v = sum_total[static_cast<std::size_t>(idx)];
      norm_total += v * v;
    }
    const double sse_total = std::max(0.0, sq_rows - norm_total / static_cast<double>(m));

    auto make_leaf = [&]() {
      std::map<int, double> mean;
      for (int idx : touched)
        mean[idx] = sum_total[static_cast<std::size_t>(idx)] / static_cast<double>(m);
      for (int idx : touched) sum_total[static_cast<std::size_t>(idx)] = 0.0;
      TreeNode node;
      node.mean = make_bag(output_dim, mean);
      tree.nodes.push_back(std::move(node));
      return static_cast<int>(tree.nodes.size() - 1);
    };

    if (depth >= max_depth || m < 2 || sse_total <= 1e-12) return make_leaf();

    // Per-row dot products with the node sum vector, for incremental
    // right-child norms.
    std::vector<double> row_dot_total(m, 0.0);
    std::vector<double> row_sq(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      for (const auto& [idx, v] : y[rows[i]].entries) {
        row_dot_total[i] += v * sum_total[static_cast<std::size_t>(idx)];
        row_sq[i] += v * v;
      }
    }

    int best_feature = -1;
    double best_threshold = 0.0;
    double best_cost = std::numeric_limits<double>::infinity();

    auto candidates = rng.sample_without_replacement(
        static_cast<std::size_t>(feature_dim),
        static_cast<std::size_t>(candidates_per_node));

    std::vector<std::size_t> order(m);
    for (std::size_t f_pos = 0; f_pos < candidates.size(); ++f_pos) {
      const int f = static_cast<int>(candidates[f_pos]);
      std::iota(order.begin(), order.end(), std::size_t{0});
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t a, std::size_t b) {
                         return x[rows[a]][static_cast<std::size_t>(f)] <
                                x[rows[b]][static_cast<std::size_t>(f)];
                       });
      if (x[rows[order.front()]][static_cast<std::size_t>(f)] ==
          x[rows[order.back()]][static_cast<std::size_t>(f)])
        continue;

      double q_left = 0.0;
      double norm_left = 0.0;
      double dot_total_left = 0.0;
      std::vector<int> left_touched;
      for (std::size_t i = 0; i + 1 < m; ++i) {
        const std::size_t r = rows[order[i]];
        double cross = 0.0;
        for (const auto& [idx, v] : y[r].entries) {
          cross += v * sum_left[static_cast<std::size_t>(idx)];
          if (sum_left[static_cast<std::size_t>(idx)] == 0.0)
            left_touched.push_back(idx);
          sum_left[static_cast<std::size_t>(idx)] += v;
        }
        norm_left += 2.0 * cross + row_sq[order[i]];
        q_left += row_sq[order[i]];
        dot_total_left += row_dot_total[order[i]];

        const double v_here = x[r][static_cast<std::size_t>(f)];
        const double v_next = x[rows[order[i + 1]]][static_cast<std::size_t>(f)];
        if (v_here == v_next) continue;

        const double n_left = static_cast<double>(i + 1);
        const double n_right = static_cast<double>(m - i - 1);
        const double norm_right = norm_total - 2.0 * dot_total_left + norm_left;
        const double sse_left = std::max(0.0, q_left - norm_left / n_left);
        const double sse_right =
            std::max(0.0, (sq_rows - q_left) - norm_right / n_right);
        const double cost = sse_left + sse_right;
        if (cost < best_cost) {
          best_cost = cost;
          best_feature = f;
          best_threshold = (v_here + v_next) / 2.0;
        }
      }
      for (int idx : left_touched) sum_left[static_cast<std::size_t>(idx)] = 0.0;
    }

    if (best_feature < 0) return make_leaf();

    for (int idx : touched) sum_total[static_cast<std::size_t>(idx)] = 0.0;

    std::vector<std::size_t> left_rows, right_rows;
    for (std::size_t r : rows) {
      if (x[r][static_cast<std::size_t>(best_feature)] <= best_threshold)
        left_rows.push_back(r);
      else
        right_rows.push_back(r);
    }
    rows.clear();
    rows.shrink_to_fit();

    tree.nodes.emplace_back();
    const int node_index = static_cast<int>(tree.nodes.size() - 1);
    tree.nodes[static_cast<std::size_t>(node_index)].feature = best_feature;
    tree.nodes[static_cast<std::size_t>(node_index)].threshold = best_threshold;
    const int left = build(left_rows, depth + 1);
    const int right = build(right_rows, depth + 1);
    tree.nodes[static_cast<std::size_t>(node_index)].left = left;
    tree.nodes[static_cast<std::size_t>(node_index)].right = right;
    return node_index;
  }
};

}  // namespace detail

// Trains on (sprite bag, word bag) pairs; bags must share the training
// vocabularies. Per-tree seeds derive from (spec.seed, tree index), so
// parallel and serial training agree bit for bit.
inline ForestModel train_forest(const std::vector<SparseBag>& features,
                                const std::vector<SparseBag>& outputs,
                                const PredictorSpec& spec) {
  spec.validate();
  if (features.empty() || features.size() != outputs.size())
    throw std::invalid_argument("train_forest: empty or mismatched training set");
  const int feature_dim = features.front().dim;
  const int output_dim = outputs.front().dim;
  const std::size_t n = features.size();

  std::vector<std::vector<double>> x(n,
                                     std::vector<double>(static_cast<std::size_t>(
                                         std::max(feature_dim, 1))));
  for (std::size_t i = 0; i < n; ++i) {
    if (features[i].dim != feature_dim || outputs[i].dim != output_dim)
      throw std::invalid_argument("train_forest: mixed vocabularies");
    for (const auto& [idx, v] : features[i].entries)
      x[i][static_cast<std::size_t>(idx)] = v;
  }

  std::vector<Tree> trees(static_cast<std::size_t>(spec.trees));
  for (int t = 0; t < spec.trees; ++t) {
    Rng rng(derive_seed(spec.seed, "tree", static_cast<std::uint64_t>(t)));
    std::vector<std::size_t> rows;
    rows.reserve(n);
    if (spec.bootstrap) {
      for (std::size_t i = 0; i < n; ++i)
        rows.push_back(static_cast<std::size_t>(rng.below(n)));
    } else {
      for (std::size_t i = 0; i < n; ++i) rows.push_back(i);
    }
    detail::TreeBuilder builder(x, outputs, std::max(feature_dim, 1), output_dim,
                                spec.max_depth, rng);
    builder.build(rows, 0);
    trees[static_cast<std::size_t>(t)] = std::move(builder.tree);
  }
  return ForestModel(std::move(trees), feature_dim, output_dim);
}

// ---------------------------------------------------------------------------
// KNN: the knn_k nearest training elements by frame distance (ties to the
// lowest training index); the prediction is the set union of their words,
// each present word valued 1. A knn_k above the training size clamps to it,
// and the clamp is recorded on the model.
// ---------------------------------------------------------------------------
class KnnModel {
 public:
  KnnModel() = default;
  KnnModel(std::vector<SparseBag> sprite_bags, std::vector<SparseBag> word_bags,
           std::vector<std::string> comments, int k)
      : sprite_bags_(std::move(sprite_bags)),
        word_bags_(std::move(word_bags)),
        comments_(std::move(comments)),
        k_requested_(k),
        k_effective_(std::min<std::size_t>(static_cast<std::size_t>(k),
                                           sprite_bags_.size())) {
    if (sprite_bags_.empty())
      throw std::invalid_argument("KnnModel: empty training set");
    if (sprite_bags_.size() != word_bags_.size() ||
        sprite_bags_.size() != comments_.size())
      throw std::invalid_argument("KnnModel: mismatched training arrays");
  }

  std::vector<std::size_t> neighbors(const SparseBag& sprite_bag,
                                     std::size_t count) const {
    std::vector<std::pair<double, std::size_t>> dists;
    dists.reserve(sprite_bags_.size());
    for (std::size_t i = 0; i < sprite_bags_.size(); ++i)
      dists.emplace_back(cosine_distance(sprite_bag, sprite_bags_[i]), i);
    count = std::min(count, dists.size());
    std::partial_sort(dists.begin(), dists.begin() + static_cast<std::ptrdiff_t>(count),
                      dists.end());
    std::vector<std::size_t> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) out.push_back(dists[i].second);
    return out;
  }

  SparseBag predict(const SparseBag& sprite_bag) const {
    std::map<int, double> accum;
    for (std::size_t i : neighbors(sprite_bag, static_cast<std::size_t>(k_effective_)))
      for (const auto& [idx, v] : word_bags_[i].entries) accum[idx] = 1.0;
    return make_bag(word_bags_.front().dim, accum);
  }

  // k=1 retrieval: the nearest training example's original comment text.
  const std::string& retrieve_comment(const SparseBag& sprite_bag) const {
    return comments_[neighbors(sprite_bag, 1).front()];
  }

  int k_requested() const { return k_requested_; }
  int k_effective() const { return static_cast<int>(k_effective_); }
  const std::vector<SparseBag>& sprite_bags() const { return sprite_bags_; }
  const std::vector<SparseBag>& word_bags() const { return word_bags_; }
  const std::vector<std::string>& comments() const { return comments_; }

 private:
  std::vector<SparseBag> sprite_bags_;
  std::vector<SparseBag> word_bags_;
  std::vector<std::string> comments_;
  int k_requested_ = 1;
  std::size_t k_effective_ = 1;
};

// ---------------------------------------------------------------------------
// Suite: one predictor trained on the whole corpus ("standard") or one per
// cluster with frame-only test assignment ("per-cluster").
// ---------------------------------------------------------------------------
enum class TrainMode { standard, per_cluster };

using PredictorUnit = std::variant<RandomPredictor, ForestModel, KnnModel>;

class PredictorSuite {
 public:
  struct Prediction {
    SparseBag bag;
    int cluster = -1;  // -1 in standard mode
  };

  PredictorSuite() = default;

  static PredictorSuite train(const Corpus& train_corpus,
                              const std::optional<ClusterModel>& clusters,
                              const PredictorSpec& spec, TrainMode mode) {
    spec.validate();
    if (train_corpus.examples.empty())
      throw std::invalid_argument("train_suite: empty training corpus");
    if (mode == TrainMode::per_cluster && !clusters)
      throw std::invalid_argument("train_suite: per-cluster mode needs a cluster model");

    PredictorSuite suite;
    suite.spec_ = spec;
    suite.mode_ = mode;
    suite.sprite_vocab_ = train_corpus.sprite_vocab;
    suite.word_vocab_ = train_corpus.word_vocab;

    std::vector<std::vector<std::size_t>> groups;
    if (mode == TrainMode::standard) {
      groups.emplace_back(train_corpus.size());
      std::iota(groups.front().begin(), groups.front().end(), std::size_t{0});
    } else {
      suite.clusters_ = *clusters;
      suite.medoid_bags_ = medoid_sprite_bags(*clusters, train_corpus);
      groups.resize(static_cast<std::size_t>(clusters->k));
      for (std::size_t i = 0; i < train_corpus.size(); ++i) {
        auto it = clusters->assignment.find(train_corpus.examples[i].id);
        if (it == clusters->assignment.end())
          throw std::invalid_argument("train_suite: example not in cluster model: " +
                                      train_corpus.examples[i].id);
        groups[static_cast<std::size_t>(it->second)].push_back(i);
      }
      for (std::size_t c = 0; c < groups.size(); ++c)
        if (groups[c].empty())
          throw std::invalid_argument("train_suite: cluster " + std::to_string(c) +
                                      " has no members");
    }

    for (std::size_t g = 0; g < groups.size(); ++g) {
      PredictorSpec unit_spec = spec;
      unit_spec.seed = derive_seed(spec.seed, "unit", g);
      suite.units_.push_back(train_unit(train_corpus, groups[g], unit_spec));
    }
    return suite;
  }

  // Prediction for the example at `example_index` of an evaluation pass; the
  // index feeds the Random predictor's draw stream so parallel evaluation
  // stays deterministic.
  Prediction predict_at(const SparseBag& sprite_bag_train_vocab,
                        std::size_t example_index) const {
    if (mode_ == TrainMode::standard)
      return {unit_predict(units_.front(), sprite_bag_train_vocab, example_index), -1};
    int cluster = assign_test_bag(sprite_bag_train_vocab, medoid_bags_);
    return predict_in_cluster(sprite_bag_train_vocab, cluster, example_index);
  }

  Prediction predict_in_cluster(const SparseBag& sprite_bag_train_vocab,
                                int cluster, std::size_t example_index) const {
    if (cluster < 0 || static_cast<std::size_t>(cluster) >= units_.size())
      throw std::invalid_argument("predict_in_cluster: bad cluster index");
    return {unit_predict(units_[static_cast<std::size_t>(cluster)],
                         sprite_bag_train_vocab, example_index),
            cluster};
  }

  // Raw-comment retrieval through the suite's KNN unit(s).
  const std::string& retrieve_comment(const SparseBag& sprite_bag_train_vocab) const {
    const PredictorUnit* unit = &units_.front();
    if (mode_ == TrainMode::per_cluster) {
      int cluster = assign_test_bag(sprite_bag_train_vocab, medoid_bags_);
      unit = &units_[static_cast<std::size_t>(cluster)];
    }
    const auto* knn = std::get_if<KnnModel>(unit);
    if (!knn)
      throw std::invalid_argument("retrieve_comment: suite is not KNN-based");
    return knn->retrieve_comment(sprite_bag_train_vocab);
  }

  const PredictorSpec& spec() const { return spec_; }
  TrainMode mode() const { return mode_; }
  const Vocabulary& sprite_vocab() const { return sprite_vocab_; }
  const Vocabulary& word_vocab() const { return word_vocab_; }
  const std::optional<ClusterModel>& clusters() const { return clusters_; }
  const std::vector<SparseBag>& medoid_bags() const { return medoid_bags_; }
  const std::vector<PredictorUnit>& units() const { return units_; }
  int cluster_count() const { return static_cast<int>(units_.size()); }

  // Deserialization support.
  PredictorSuite(PredictorSpec spec, TrainMode mode, Vocabulary sprites,
                 Vocabulary words, std::optional<ClusterModel> clusters,
                 std::vector<SparseBag> medoid_bags, std::vector<PredictorUnit> units)
      : spec_(spec),
        mode_(mode),
        sprite_vocab_(std::move(sprites)),
        word_vocab_(std::move(words)),
        clusters_(std::move(clusters)),
        medoid_bags_(std::move(medoid_bags)),
        units_(std::move(units)) {}

 private:
  static PredictorUnit train_unit(const Corpus& corpus,
                                  const std::vector<std::size_t>& members,
                                  const PredictorSpec& spec) {
    std::vector<SparseBag> sprites, words;
    std::vector<std::string> comments;
    sprites.reserve(members.size());
    words.reserve(members.size());
    comments.reserve(members.size());
    for (std::size_t i : members) {
      sprites.push_back(corpus.examples[i].sprite_bag);
      words.push_back(corpus.examples[i].comment_bag);
      comments.push_back(corpus.examples[i].comment_text);
    }
    switch (spec.kind) {
      case PredictorKind::random:
        return RandomPredictor(std::move(words), spec.seed);
      case PredictorKind::forest:
        return train_forest(sprites, words, spec);
      case PredictorKind::knn:
        return KnnModel(std::move(sprites), std::move(words), std::move(comments),
                        spec.knn_k);
    }
    throw std::logic_error("train_unit: unreachable");
  }

  static SparseBag unit_predict(const PredictorUnit& unit, const SparseBag& bag,
                                std::size_t example_index) {
    if (const auto* rnd = std::get_if<RandomPredictor>(&unit))
      return rnd->predict_at(example_index);
    if (const auto* forest = std::get_if<ForestModel>(&unit))
      return forest->predict(bag);
    return std::get<KnnModel>(unit).predict(bag);
  }

  PredictorSpec spec_{};
  TrainMode mode_ = TrainMode::standard;
  Vocabulary sprite_vocab_;
  Vocabulary word_vocab_;
  std::optional<ClusterModel> clusters_;
  std::vector<SparseBag> medoid_bags_;
  std::vector<PredictorUnit> units_;
};

inline PredictorSuite train_suite(const Corpus& train_corpus,
                                  const std::optional<ClusterModel>& clusters,
                                  const PredictorSpec& spec,
                                  TrainMode mode = TrainMode::standard) {
  return PredictorSuite::train(train_corpus, clusters, spec, mode);
}

}  // namespace lpc

#include "lpc/cluster.hpp"

#include <gtest/gtest.h>

#include "lpc/synth.hpp"
#include "test_util.hpp"

using lpc::build_distance_matrix;
using lpc::cluster_corpus;
using lpc::Corpus;
using lpc::DistanceConfig;
using lpc::DistanceMatrix;
using lpc::kmedoids;
using lpc::kmedoids_matrix;
using lpc::KMedoidsResult;
using lpc::select_k_matrix;
using lpc_test::brute_force_kmedoids_cost;
using lpc_test::corpus_from;

namespace {

DistanceMatrix random_distance_matrix(lpc::Rng& rng, std::size_t n) {
  DistanceMatrix dist(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      dist.set(i, j, static_cast<double>(rng.below(10000)) / 10000.0);
  return dist;
}

}  // namespace

TEST(KMedoids, SingleMedoidMinimizesSummedDistance) {
  lpc::Rng rng(3);
  auto dist = random_distance_matrix(rng, 9);
  auto result = kmedoids_matrix(dist, 1);
  ASSERT_EQ(result.medoids.size(), 1u);
  double best = std::numeric_limits<double>::infinity();
  int expected = -1;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < dist.size(); ++j) sum += dist(i, j);
    if (sum < best) {
      best = sum;
      expected = static_cast<int>(i);
    }
  }
  EXPECT_EQ(result.medoids[0], expected);
  for (int c : result.assignment) EXPECT_EQ(c, 0);
}

TEST(KMedoids, TwoTightPairsSplitApart) {
  // Two tight pairs (within ~0, across ~1): k=2 must partition them, which the
  // exhaustive search over all C(4,2) medoid sets confirms.
  Corpus corpus = corpus_from({
      {{{"a", 10}}, "left left left"},
      {{{"a", 10}, {"b", 1}}, "left left side"},
      {{{"z", 10}}, "right right right"},
      {{{"z", 10}, {"y", 1}}, "right right flank"},
  });
  auto dist = build_distance_matrix(corpus);
  auto result = kmedoids_matrix(dist, 2);
  EXPECT_DOUBLE_EQ(result.total_cost, brute_force_kmedoids_cost(dist, 2));
  EXPECT_EQ(result.assignment[0], result.assignment[1]);
  EXPECT_EQ(result.assignment[2], result.assignment[3]);
  EXPECT_NE(result.assignment[0], result.assignment[2]);
}

TEST(KMedoids, KEqualsNHasZeroCost) {
  lpc::Rng rng(5);
  auto dist = random_distance_matrix(rng, 6);
  auto result = kmedoids_matrix(dist, 6);
  EXPECT_DOUBLE_EQ(result.total_cost, 0.0);
  EXPECT_EQ(result.medoids, (std::vector<int>{0, 1, 2, 3, 4, 5}));
  for (std::size_t j = 0; j < 6; ++j)
    EXPECT_EQ(result.assignment[j], static_cast<int>(j));
}

TEST(KMedoids, KOutOfRangeRejected) {
  lpc::Rng rng(6);
  auto dist = random_distance_matrix(rng, 4);
  EXPECT_THROW(kmedoids_matrix(dist, 0), std::invalid_argument);
  EXPECT_THROW(kmedoids_matrix(dist, 5), std::invalid_argument);
}

TEST(KMedoids, NoSingleSwapImproves) {
  // Local-optimality scan: recompute the cost of every medoid<->non-medoid
  // exchange from scratch and verify none beats the PAM result.
  lpc::Rng rng(17);
  for (int trial = 0; trial < 25; ++trial) {
    std::size_t n = 8 + rng.below(23);  // up to 30
    int k = 2 + static_cast<int>(rng.below(4));
    auto dist = random_distance_matrix(rng, n);
    auto result = kmedoids_matrix(dist, k);

    auto cost_of = [&](const std::vector<int>& medoids) {
      double cost = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        double d = std::numeric_limits<double>::infinity();
        for (int m : medoids)
          d = std::min(d, dist(static_cast<std::size_t>(m), j));
        cost += d;
      }
      return cost;
    };
    double base = cost_of(result.medoids);
    EXPECT_NEAR(base, result.total_cost, 1e-12);
    for (std::size_t mi = 0; mi < result.medoids.size(); ++mi) {
      for (std::size_t h = 0; h < n; ++h) {
        if (std::find(result.medoids.begin(), result.medoids.end(),
                      static_cast<int>(h)) != result.medoids.end())
          continue;
        auto swapped = result.medoids;
        swapped[mi] = static_cast<int>(h);
        EXPECT_GE(cost_of(swapped), base - 1e-12);
      }
    }
  }
}

TEST(KMedoids, MatchesBruteForceOnSmallInstances) {
  // Random sparse-bag instances under the paired distance, the geometry PAM
  // actually runs on.
  lpc::Rng rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    std::size_t n = 6 + rng.below(7);  // up to 12
    int k = 1 + static_cast<int>(rng.below(3));
    Corpus corpus = lpc_test::random_corpus(rng, n);
    auto dist = build_distance_matrix(corpus);
    auto result = kmedoids_matrix(dist, k);
    EXPECT_DOUBLE_EQ(result.total_cost, brute_force_kmedoids_cost(dist, k));
  }
}

TEST(KMedoids, MedoidsBelongToOwnClusters) {
  lpc::SynthConfig cfg;
  cfg.topics = 3;
  cfg.train_n = 40;
  cfg.test_n = 3;
  cfg.seed = 9;
  auto [train, test] = lpc::generate_synthetic_corpus(cfg);
  auto model = kmedoids(train, 3);
  for (std::size_t m = 0; m < model.medoid_ids.size(); ++m)
    EXPECT_EQ(model.assignment.at(model.medoid_ids[m]), static_cast<int>(m));
}

TEST(SelectK, RecoversThreePlantedGroups) {
  lpc::SynthConfig cfg;
  cfg.topics = 3;
  cfg.train_n = 60;
  cfg.test_n = 3;
  cfg.seed = 21;
  cfg.noise = 0.0;
  auto [train, test] = lpc::generate_synthetic_corpus(cfg);
  auto dist = build_distance_matrix(train);
  auto sel = select_k_matrix(
      dist, 8, train.sprite_vocab.size() + train.word_vocab.size());
  EXPECT_EQ(sel.k_star, 3);
  ASSERT_EQ(sel.trace.size(), 8u);
  EXPECT_DOUBLE_EQ(sel.trace[0].f, 1.0);
  EXPECT_LT(sel.trace[2].f, 0.85);
  for (const auto& row : sel.trace)
    if (row.k != 3 && row.f < 0.85) EXPECT_GT(row.f, sel.trace[2].f);
}

TEST(SelectK, AllIdenticalExamplesPickOne) {
  Corpus corpus = corpus_from({
      {{{"a", 2}}, "same words"},
      {{{"a", 2}}, "same words"},
      {{{"a", 2}}, "same words"},
      {{{"a", 2}}, "same words"},
  });
  auto dist = build_distance_matrix(corpus);
  auto sel = select_k_matrix(dist, 4, 3);
  EXPECT_EQ(sel.k_star, 1);
  for (const auto& row : sel.trace) EXPECT_DOUBLE_EQ(row.f, 1.0);
  EXPECT_DOUBLE_EQ(sel.trace[0].distortion, 0.0);
}

TEST(SelectK, DeterministicAndNoEmptyClusters) {
  lpc::SynthConfig cfg;
  cfg.topics = 4;
  cfg.train_n = 80;
  cfg.test_n = 4;
  cfg.seed = 33;
  auto [train, test] = lpc::generate_synthetic_corpus(cfg);
  auto model_a = cluster_corpus(train, 8, {}, 5);
  auto model_b = cluster_corpus(train, 8, {}, 5);
  EXPECT_EQ(lpc::serialize_cluster_model(model_a),
            lpc::serialize_cluster_model(model_b));

  std::vector<int> sizes(static_cast<std::size_t>(model_a.k), 0);
  for (const auto& [id, c] : model_a.assignment)
    ++sizes[static_cast<std::size_t>(c)];
  for (int s : sizes) EXPECT_GT(s, 0);
}

TEST(AssignTest, NearestMedoidByFrameOnly) {
  std::vector<lpc::SparseBag> medoid_bags{
      lpc::make_bag(4, {{0, 2.0}}),
      lpc::make_bag(4, {{1, 2.0}}),
      lpc::make_bag(4, {{2, 2.0}}),
  };
  // identical to medoid 2
  EXPECT_EQ(lpc::assign_test_bag(lpc::make_bag(4, {{2, 5.0}}), medoid_bags), 2);
  // equidistant from medoids 0 and 1 -> lowest cluster index
  EXPECT_EQ(lpc::assign_test_bag(lpc::make_bag(4, {{0, 1.0}, {1, 1.0}}),
                                 medoid_bags),
            0);
}

TEST(AssignTest, PlantedTopicGoesToItsCluster) {
  lpc::SynthConfig cfg;
  cfg.topics = 3;
  cfg.train_n = 60;
  cfg.test_n = 30;
  cfg.seed = 77;
  cfg.noise = 0.0;
  auto [train, test] = lpc::generate_synthetic_corpus(cfg);
  auto model = cluster_corpus(train, 6, {}, 0);
  ASSERT_EQ(model.k, 3);

  // Map each cluster to the topic of its medoid.
  std::map<std::string, std::string> medoid_topic;
  for (const auto& ex : train.examples) medoid_topic[ex.id] = *ex.topic_label;

  for (const auto& ex : test.examples) {
    lpc::PairedExample probe = ex;
    probe.sprite_bag =
        lpc::remap_bag(ex.sprite_bag, test.sprite_vocab, train.sprite_vocab);
    int cluster = lpc::assign_test(probe, model, train);
    EXPECT_EQ(medoid_topic[model.medoid_ids[static_cast<std::size_t>(cluster)]],
              *ex.topic_label);
  }
}

TEST(ClusterModel, JsonRoundTrip) {
  lpc::SynthConfig cfg;
  cfg.topics = 2;
  cfg.train_n = 20;
  cfg.test_n = 2;
  cfg.seed = 4;
  auto [train, test] = lpc::generate_synthetic_corpus(cfg);
  auto model = cluster_corpus(train, 5, {}, 42);
  auto text = lpc::serialize_cluster_model(model);
  auto reload = lpc::parse_cluster_model(text);
  EXPECT_EQ(lpc::serialize_cluster_model(reload), text);
  EXPECT_EQ(reload.k, model.k);
  EXPECT_EQ(reload.medoid_ids, model.medoid_ids);
  EXPECT_EQ(reload.assignment, model.assignment);
  EXPECT_THROW(lpc::parse_cluster_model("{"), lpc::ParseError);
}

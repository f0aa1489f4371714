#pragma once

#include <cmath>
#include <cstdio>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "lpc/cluster.hpp"
#include "lpc/corpus.hpp"
#include "lpc/io_util.hpp"
#include "lpc/metric.hpp"
#include "lpc/parallel.hpp"
#include "lpc/predictors.hpp"
#include "lpc/suite_io.hpp"

namespace lpc {

struct ReportRow {
  std::string approach;  // random | forest | knn5 | knn10 | medoid
  std::string mode;
  std::vector<double> distances;  // one per test example, in corpus order
  double mean = 0.0;
  double stddev = 0.0;  // population standard deviation
};

struct EvalReport {
  std::vector<ReportRow> rows;
  std::uint64_t seed = 0;
  std::string train_fingerprint;  // fnv1a64 over canonical corpus JSONL
  std::string test_fingerprint;
  int clusters = 0;  // k used, when clustering was involved
};

inline void finalize_row(ReportRow& row) {
  const double n = static_cast<double>(row.distances.size());
  double sum = 0.0;
  for (double d : row.distances) sum += d;
  row.mean = sum / n;
  double sq = 0.0;
  for (double d : row.distances) sq += (d - row.mean) * (d - row.mean);
  row.stddev = std::sqrt(sq / n);
}

// Evaluation word space: the training vocabulary extended (in first-appearance
// order) by test-only words. Predictions can never emit test-only words, so
// the metric charges them for it instead of silently shrinking the space.
struct EvalContext {
  Vocabulary eval_word_vocab;
  std::vector<SparseBag> test_sprites;  // test sprite bags in the TRAIN sprite vocab
  std::vector<SparseBag> truths;        // test comment bags in the eval word vocab
};

inline SparseBag widen_bag(const SparseBag& bag, int dim) {
  SparseBag out = bag;
  out.dim = dim;
  return out;
}

inline EvalContext make_eval_context(const Vocabulary& train_sprite_vocab,
                                     const Vocabulary& train_word_vocab,
                                     const Corpus& test) {
  if (test.examples.empty())
    throw std::invalid_argument("evaluate: empty test corpus");
  EvalContext ctx;
  ctx.eval_word_vocab = train_word_vocab;
  for (const auto& ex : test.examples)
    for (const auto& [idx, v] : ex.comment_bag.entries)
      ctx.eval_word_vocab.add(test.word_vocab.name(idx));

  ctx.test_sprites.reserve(test.size());
  ctx.truths.reserve(test.size());
  for (const auto& ex : test.examples) {
    ctx.test_sprites.push_back(
        remap_bag(ex.sprite_bag, test.sprite_vocab, train_sprite_vocab));
    ctx.truths.push_back(
        remap_bag(ex.comment_bag, test.word_vocab, ctx.eval_word_vocab));
  }
  return ctx;
}

// Per-example cosine distance between the predicted and true comment bags.
inline std::vector<double> evaluate(const PredictorSuite& suite, const Corpus& test,
                                    int threads = 1) {
  EvalContext ctx =
      make_eval_context(suite.sprite_vocab(), suite.word_vocab(), test);
  const int dim = ctx.eval_word_vocab.size();
  std::vector<double> distances(test.size());
  parallel_for(test.size(), threads, [&](std::size_t i) {
    SparseBag pred = suite.predict_at(ctx.test_sprites[i], i).bag;
    distances[i] = cosine_distance(widen_bag(pred, dim), ctx.truths[i]);
  });
  return distances;
}

struct ExperimentConfig {
  std::uint64_t seed = 0;
  int k_max = 10;
  double selection_threshold = 0.85;
  DistanceConfig distance{};
  int trees = 10;
  int max_depth = 200;
  int threads = 1;
};

namespace detail {

struct KindSpec {
  std::string name;
  PredictorKind kind;
  int knn_k;
};

inline std::vector<KindSpec> table_kinds() {
  return {{"random", PredictorKind::random, 0},
          {"forest", PredictorKind::forest, 0},
          {"knn5", PredictorKind::knn, 5},
          {"knn10", PredictorKind::knn, 10}};
}

inline PredictorSpec spec_for(const KindSpec& ks, const ExperimentConfig& cfg,
                              std::uint64_t seed) {
  PredictorSpec spec;
  spec.kind = ks.kind;
  if (ks.knn_k > 0) spec.knn_k = ks.knn_k;
  spec.trees = cfg.trees;
  spec.max_depth = cfg.max_depth;
  spec.seed = seed;
  return spec;
}

inline void stamp(EvalReport& report, const Corpus& train, const Corpus& test,
                  std::uint64_t seed, int k) {
  report.seed = seed;
  report.train_fingerprint = to_hex(fnv1a64(serialize_corpus_jsonl(train)));
  report.test_fingerprint = to_hex(fnv1a64(serialize_corpus_jsonl(test)));
  report.clusters = k;
}

}  // namespace detail

// Table-1 harness: every predictor kind trained on the whole corpus and once
// per cluster; 8 rows of mean +/- std test distance.
inline EvalReport experiment_standard_vs_percluster(const Corpus& train,
                                                    const Corpus& test,
                                                    const ExperimentConfig& cfg) {
  ClusterModel model =
      cluster_corpus(train, cfg.k_max, cfg.distance, derive_seed(cfg.seed, "cluster"),
                     cfg.selection_threshold, cfg.threads);
  EvalReport report;
  detail::stamp(report, train, test, cfg.seed, model.k);

  // One training seed per predictor kind, shared by both modes: on a k* = 1
  // corpus the per-cluster rows then reproduce the standard rows exactly, and
  // the table-2 true-cluster column reproduces the per-cluster column here.
  const auto kinds = detail::table_kinds();
  for (std::size_t ki = 0; ki < kinds.size(); ++ki) {
    for (TrainMode mode : {TrainMode::standard, TrainMode::per_cluster}) {
      PredictorSpec spec =
          detail::spec_for(kinds[ki], cfg, derive_seed(cfg.seed, "train", ki));
      PredictorSuite suite =
          train_suite(train, mode == TrainMode::per_cluster
                                 ? std::optional<ClusterModel>(model)
                                 : std::nullopt,
                      spec, mode);
      ReportRow row;
      row.approach = kinds[ki].name;
      row.mode = to_string(mode);
      row.distances = evaluate(suite, test, cfg.threads);
      finalize_row(row);
      report.rows.push_back(std::move(row));
    }
  }
  return report;
}

// Table-2 harness: per-cluster suites evaluated with the frame-assigned
// cluster and with a seeded uniformly random cluster per test element.
inline EvalReport experiment_true_vs_random_cluster(const Corpus& train,
                                                    const Corpus& test,
                                                    const ExperimentConfig& cfg) {
  ClusterModel model =
      cluster_corpus(train, cfg.k_max, cfg.distance, derive_seed(cfg.seed, "cluster"),
                     cfg.selection_threshold, cfg.threads);
  EvalReport report;
  detail::stamp(report, train, test, cfg.seed, model.k);

  const auto kinds = detail::table_kinds();
  for (std::size_t ki = 0; ki < kinds.size(); ++ki) {
    PredictorSpec spec =
        detail::spec_for(kinds[ki], cfg, derive_seed(cfg.seed, "train", ki));
    PredictorSuite suite =
        train_suite(train, std::optional<ClusterModel>(model), spec,
                    TrainMode::per_cluster);
    EvalContext ctx =
        make_eval_context(suite.sprite_vocab(), suite.word_vocab(), test);
    const int dim = ctx.eval_word_vocab.size();

    ReportRow true_row{kinds[ki].name, "true-cluster", {}, 0, 0};
    ReportRow random_row{kinds[ki].name, "random-cluster", {}, 0, 0};
    true_row.distances.resize(test.size());
    random_row.distances.resize(test.size());
    const std::uint64_t draw_seed = derive_seed(cfg.seed, "random-cluster", ki);
    parallel_for(test.size(), cfg.threads, [&](std::size_t i) {
      SparseBag truth = ctx.truths[i];
      SparseBag pred_true = suite.predict_at(ctx.test_sprites[i], i).bag;
      true_row.distances[i] = cosine_distance(widen_bag(pred_true, dim), truth);
      Rng rng(derive_seed(draw_seed, i));
      int cluster = static_cast<int>(rng.below(static_cast<std::uint64_t>(model.k)));
      SparseBag pred_rand =
          suite.predict_in_cluster(ctx.test_sprites[i], cluster, i).bag;
      random_row.distances[i] = cosine_distance(widen_bag(pred_rand, dim), truth);
    });
    finalize_row(true_row);
    finalize_row(random_row);
    report.rows.push_back(std::move(true_row));
    report.rows.push_back(std::move(random_row));
  }
  return report;
}

// Medoid-comment baseline: the true comment against (a) the comment of the
// frame-nearest medoid and (b) the comment of a seeded random medoid.
inline EvalReport medoid_comment_baseline(const ClusterModel& model,
                                          const Corpus& train, const Corpus& test,
                                          std::uint64_t seed, int threads = 1) {
  if (model.k < 1) throw std::invalid_argument("medoid baseline: empty model");
  EvalContext ctx = make_eval_context(train.sprite_vocab, train.word_vocab, test);
  const int dim = ctx.eval_word_vocab.size();

  std::map<std::string, const PairedExample*> by_id;
  for (const auto& ex : train.examples) by_id[ex.id] = &ex;
  std::vector<SparseBag> medoid_sprites;
  std::vector<SparseBag> medoid_comments;
  for (const auto& id : model.medoid_ids) {
    auto it = by_id.find(id);
    if (it == by_id.end())
      throw std::invalid_argument("medoid baseline: medoid id not in corpus: " + id);
    medoid_sprites.push_back(it->second->sprite_bag);
    medoid_comments.push_back(widen_bag(it->second->comment_bag, dim));
  }

  EvalReport report;
  detail::stamp(report, train, test, seed, model.k);
  ReportRow nearest_row{"medoid", "frame-nearest", {}, 0, 0};
  ReportRow random_row{"medoid", "random", {}, 0, 0};
  nearest_row.distances.resize(test.size());
  random_row.distances.resize(test.size());
  const std::uint64_t draw_seed = derive_seed(seed, "random-medoid");
  parallel_for(test.size(), threads, [&](std::size_t i) {
    int nearest = assign_test_bag(ctx.test_sprites[i], medoid_sprites);
    nearest_row.distances[i] = cosine_distance(
        medoid_comments[static_cast<std::size_t>(nearest)], ctx.truths[i]);
    Rng rng(derive_seed(draw_seed, i));
    int random_medoid =
        static_cast<int>(rng.below(static_cast<std::uint64_t>(model.k)));
    random_row.distances[i] = cosine_distance(
        medoid_comments[static_cast<std::size_t>(random_medoid)], ctx.truths[i]);
  });
  finalize_row(nearest_row);
  finalize_row(random_row);
  report.rows.push_back(std::move(nearest_row));
  report.rows.push_back(std::move(random_row));
  return report;
}

// CSV layout: header `approach,mode,mean,std,n,seed`, one row per report row,
// numbers at fixed 9-decimal precision so reruns are byte-identical.
inline std::string serialize_report_csv(const EvalReport& report) {
  std::string out = "approach,mode,mean,std,n,seed\n";
  char buf[160];
  for (const auto& row : report.rows) {
    std::snprintf(buf, sizeof(buf), "%s,%s,%.9f,%.9f,%zu,%llu\n",
                  row.approach.c_str(), row.mode.c_str(), row.mean, row.stddev,
                  row.distances.size(),
                  static_cast<unsigned long long>(report.seed));
    out += buf;
  }
  return out;
}

// Companion JSONL: a meta line (seed, corpus fingerprints, k) followed by one
// line per row carrying the per-example distances.
inline std::string serialize_report_details(const EvalReport& report) {
  std::string out;
  nlohmann::json meta{{"type", "meta"},
                      {"seed", report.seed},
                      {"train_fnv1a64", report.train_fingerprint},
                      {"test_fnv1a64", report.test_fingerprint},
                      {"clusters", report.clusters}};
  out += meta.dump();
  out += '\n';
  for (const auto& row : report.rows) {
    nlohmann::json obj{{"approach", row.approach},
                       {"mode", row.mode},
                       {"mean", row.mean},
                       {"std", row.stddev},
                       {"distances", row.distances}};
    out += obj.dump();
    out += '\n';
  }
  return out;
}

}  // namespace lpc

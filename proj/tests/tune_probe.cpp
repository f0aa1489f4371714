// Scratch driver for inspecting select_k traces and experiment margins on
// synthetic corpora. Not part of the test suite.

#include <algorithm>
#include <cstdio>
#include "lpc/metric.hpp"
#include <cstdlib>
#include <string>

#include "lpc/cluster.hpp"
#include "lpc/experiments.hpp"
#include "lpc/synth.hpp"

using namespace lpc;

static void trace_for(SynthConfig cfg, int k_max) {
  auto [train, test] = generate_synthetic_corpus(cfg);
  auto dist = build_distance_matrix(train, {}, 2);
  auto sel = select_k_matrix(dist, k_max,
                             train.sprite_vocab.size() + train.word_vocab.size());
  std::printf("topics=%d n=%d noise=%.2f seed=%llu  k*=%d   [",
              cfg.topics, cfg.train_n, cfg.noise,
              (unsigned long long)cfg.seed, sel.k_star);
  for (const auto& row : sel.trace) std::printf(" %d:%.3f", row.k, row.f);
  std::printf(" ]\n");
}

// Fraction of examples whose cluster matches the planted topic under the
// best label permutation (k == topics assumed).
static double best_permutation_agreement(const Corpus& corpus,
                                         const ClusterModel& model, int topics) {
  std::vector<int> perm(static_cast<std::size_t>(model.k));
  for (int i = 0; i < model.k; ++i) perm[static_cast<std::size_t>(i)] = i;
  std::size_t best = 0;
  do {
    std::size_t hits = 0;
    for (const auto& ex : corpus.examples) {
      int cluster = model.assignment.at(ex.id);
      int topic = std::stoi(ex.topic_label->substr(1));
      if (perm[static_cast<std::size_t>(cluster)] == topic) ++hits;
    }
    best = std::max(best, hits);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return static_cast<double>(best) / static_cast<double>(corpus.size());
}

static void dashboard_c3(double noise, int topics) {
  int hits = 0;
  double min_agree = 1.0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    SynthConfig cfg;
    cfg.topics = topics;
    cfg.train_n = 333;
    cfg.test_n = 10;
    cfg.seed = seed;
    cfg.noise = noise;
    auto [train, test] = generate_synthetic_corpus(cfg);
    auto model = cluster_corpus(train, 10, {}, seed, 0.85, 2);
    if (model.k == topics) {
      ++hits;
      min_agree =
          std::min(min_agree, best_permutation_agreement(train, model, topics));
    }
  }
  std::printf("C3 t=%d noise=%.2f: hits=%d/10 min_agree=%.3f\n", topics, noise,
              hits, hits ? min_agree : 0.0);
}

int main(int argc, char** argv) {
  std::string mode = argc > 1 ? argv[1] : "selectk";

  if (mode == "stats") {
    SynthConfig cfg;
    cfg.topics = 6;
    cfg.train_n = 333;
    cfg.test_n = 10;
    cfg.seed = 1;
    cfg.noise = argc > 2 ? std::atof(argv[2]) : 0.1;
    auto [train, test] = generate_synthetic_corpus(cfg);
    const auto& ex = train.examples;
    double ww = 0, wx = 0, fw = 0, fx = 0;
    std::size_t nw = 0, nx = 0;
    for (std::size_t i = 0; i < ex.size(); ++i) {
      for (std::size_t j = i + 1; j < ex.size(); ++j) {
        double dw = cosine_distance(ex[i].comment_bag, ex[j].comment_bag);
        double df = cosine_distance(ex[i].sprite_bag, ex[j].sprite_bag);
        if (ex[i].topic_label == ex[j].topic_label) {
          ww += dw; fw += df; ++nw;
        } else {
          wx += dw; fx += df; ++nx;
        }
      }
    }
    std::printf("word: within=%.3f cross=%.3f gap=%.3f\n", ww / nw, wx / nx,
                wx / nx - ww / nw);
    std::printf("frame: within=%.3f cross=%.3f\n", fw / nw, fx / nx);
    // distance to the best per-topic word center (medoid proxy)
    for (int t = 0; t < 6 && t < 2; ++t) {
      double best = 1e9;
      std::size_t best_i = 0;
      for (std::size_t i = 0; i < ex.size(); ++i) {
        if (*ex[i].topic_label != "t" + std::to_string(t)) continue;
        double sum = 0;
        for (std::size_t j = 0; j < ex.size(); ++j) {
          if (*ex[j].topic_label != "t" + std::to_string(t)) continue;
          sum += cosine_distance(ex[i].comment_bag, ex[j].comment_bag);
        }
        if (sum < best) { best = sum; best_i = i; }
      }
      double to_med = 0; std::size_t cnt = 0;
      for (std::size_t j = 0; j < ex.size(); ++j) {
        if (*ex[j].topic_label != "t" + std::to_string(t) || j == best_i) continue;
        to_med += cosine_distance(ex[j].comment_bag, ex[best_i].comment_bag);
        ++cnt;
      }
      std::printf("topic %d: word medoid '%s' mean dist to members %.3f\n", t,
                  ex[best_i].comment_text.c_str(), to_med / cnt);
    }
    trace_for(cfg, 10);
    return 0;
  }

  if (mode == "dash") {
    for (int topics : {2, 3, 4}) dashboard_c3(0.10, topics);
    dashboard_c3(0.10, 6);
    dashboard_c3(0.05, 6);
    dashboard_c3(0.00, 6);
    return 0;
  }

  if (mode == "selectk") {
    for (int topics : {2, 3, 4, 6}) {
      for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        SynthConfig cfg;
        cfg.topics = topics;
        cfg.train_n = 333;
        cfg.test_n = 10;
        cfg.seed = seed;
        cfg.noise = 0.1;
        trace_for(cfg, 10);
      }
      std::printf("\n");
    }
  } else if (mode == "small") {
    for (int topics : {3, 6}) {
      for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        SynthConfig cfg;
        cfg.topics = topics;
        cfg.train_n = topics * 20;
        cfg.test_n = 10;
        cfg.seed = seed;
        cfg.noise = 0.0;
        trace_for(cfg, 8);
      }
    }
  } else if (mode == "margins") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      SynthConfig cfg;
      cfg.topics = 6;
      cfg.train_n = 333;
      cfg.test_n = 306;
      cfg.seed = seed;
      cfg.noise = 0.1;
      auto [train, test] = generate_synthetic_corpus(cfg);
      ExperimentConfig xcfg;
      xcfg.seed = seed;
      xcfg.threads = 2;
      auto t1 = experiment_standard_vs_percluster(train, test, xcfg);
      std::printf("seed=%llu k=%d\n", (unsigned long long)seed, t1.clusters);
      for (std::size_t ki = 0; ki < 4; ++ki) {
        const auto& s = t1.rows[ki * 2];
        const auto& p = t1.rows[ki * 2 + 1];
        std::printf("  %-7s std=%.4f per=%.4f margin=%+.4f\n",
                    s.approach.c_str(), s.mean, p.mean, s.mean - p.mean);
      }
      auto t2 = experiment_true_vs_random_cluster(train, test, xcfg);
      for (std::size_t ki = 0; ki < 4; ++ki) {
        const auto& t = t2.rows[ki * 2];
        const auto& r = t2.rows[ki * 2 + 1];
        std::printf("  %-7s true=%.4f rand=%.4f margin=%+.4f (table2)\n",
                    t.approach.c_str(), t.mean, r.mean, r.mean - t.mean);
      }
    }
  } else if (mode == "medoid") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      SynthConfig cfg;
      cfg.topics = 6;
      cfg.train_n = 333;
      cfg.test_n = 306;
      cfg.seed = seed;
      cfg.noise = 0.0;
      auto [train, test] = generate_synthetic_corpus(cfg);
      auto model = cluster_corpus(train, 10, {}, seed, 0.85, 2);
      auto rep = medoid_comment_baseline(model, train, test, seed, 2);
      std::printf("seed=%llu k=%d nearest=%.4f random=%.4f margin=%+.4f\n",
                  (unsigned long long)seed, model.k, rep.rows[0].mean,
                  rep.rows[1].mean, rep.rows[1].mean - rep.rows[0].mean);
    }
  }
  return 0;
}

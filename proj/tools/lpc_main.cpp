// lpc: corpus-to-commentary experiment pipeline.
//
// Subcommands cover the full flow: synthesize or ingest a corpus, detect
// sprites in frame images, cluster the training corpus, train predictors,
// evaluate a trained suite, and run the two comparison experiments plus the
// medoid baseline. Every randomized step takes an explicit --seed and every
// output is written atomically, so each invocation is a pure function of its
// inputs, flags, and seed.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "lpc/cluster.hpp"
#include "lpc/corpus.hpp"
#include "lpc/experiments.hpp"
#include "lpc/io_util.hpp"
#include "lpc/predictors.hpp"
#include "lpc/sprites.hpp"
#include "lpc/suite_io.hpp"
#include "lpc/synth.hpp"
#include "lpc/transcript.hpp"
#include "lpc/vocab.hpp"

namespace {

namespace fs = std::filesystem;

// Exit codes, also listed in --help:
//   0 success, 2 usage error, 3 file/I-O error, 4 malformed input,
//   5 invalid parameter value, 1 unexpected failure.
constexpr int kExitOk = 0;
constexpr int kExitUnexpected = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitFormat = 4;
constexpr int kExitParams = 5;

constexpr const char* kExitCodeHelp =
    "Exit codes:\n"
    "  0  success\n"
    "  2  usage error (unknown flag or subcommand, missing required option)\n"
    "  3  file not found or unreadable/unwritable\n"
    "  4  malformed input (transcript, JSONL, JSON schema)\n"
    "  5  parameter outside its valid range\n"
    "  1  unexpected internal failure\n";

lpc::Corpus load_corpus_file(const fs::path& path) {
  return lpc::parse_corpus_jsonl(lpc::read_file(path));
}

lpc::TranscriptFormat parse_format(const std::string& format,
                                   const fs::path& transcript_path) {
  if (format == "srt") return lpc::TranscriptFormat::srt;
  if (format == "vtt") return lpc::TranscriptFormat::vtt;
  if (format == "auto") {
    auto ext = transcript_path.extension().string();
    if (ext == ".srt") return lpc::TranscriptFormat::srt;
    if (ext == ".vtt") return lpc::TranscriptFormat::vtt;
    throw std::invalid_argument(
        "cannot infer transcript format from extension '" + ext +
        "'; pass --format srt|vtt");
  }
  throw std::invalid_argument("unknown transcript format: " + format);
}

struct CommonOpts {
  std::uint64_t seed = 0;
  int threads = static_cast<int>(std::thread::hardware_concurrency());
};

void write_vocab_files(const lpc::Corpus& corpus, const fs::path& base) {
  fs::path sprites = base;
  sprites += ".sprites.vocab";
  fs::path words = base;
  words += ".words.vocab";
  lpc::atomic_write_file(sprites, lpc::serialize_vocab(corpus.sprite_vocab));
  lpc::atomic_write_file(words, lpc::serialize_vocab(corpus.word_vocab));
}

int run(int argc, char** argv) {
  CLI::App app{"lpc: Let's Play corpus-to-commentary experiment pipeline"};
  app.footer(kExitCodeHelp);
  app.set_help_all_flag("--help-all", "Print help for all subcommands");
  app.set_config("--config", "", "Read options from an INI file (flags win)");
  app.require_subcommand(1);

  CommonOpts common;
  app.add_option("--threads", common.threads,
                 "Worker thread cap (results identical for any value)")
      ->capture_default_str();

  // --- synth -------------------------------------------------------------
  auto* synth = app.add_subcommand(
      "synth", "Generate a seeded synthetic train/test corpus pair");
  lpc::SynthConfig synth_cfg;
  std::string synth_out_dir;
  bool synth_vocabs = false;
  synth->add_option("--topics", synth_cfg.topics, "Planted topic count")
      ->capture_default_str();
  synth->add_option("--train-n", synth_cfg.train_n, "Training corpus size")
      ->capture_default_str();
  synth->add_option("--test-n", synth_cfg.test_n, "Testing corpus size")
      ->capture_default_str();
  synth->add_option("--seed", synth_cfg.seed, "Generator seed")->required();
  synth->add_option("--noise", synth_cfg.noise,
                    "Shared-pool draw probability in [0,1]")
      ->capture_default_str();
  synth->add_option("--out-dir", synth_out_dir,
                    "Directory for train.jsonl / test.jsonl")
      ->required();
  synth->add_flag("--write-vocabs", synth_vocabs,
                  "Also write .sprites.vocab / .words.vocab files");

  // --- ingest ------------------------------------------------------------
  auto* ingest = app.add_subcommand(
      "ingest", "Pair a timed transcript with symbolic frames into a corpus");
  std::string ingest_transcript, ingest_frames, ingest_out;
  std::string ingest_format = "auto";
  bool ingest_vocabs = false;
  ingest->add_option("--transcript", ingest_transcript, "SRT or WebVTT file")
      ->required();
  ingest->add_option("--format", ingest_format, "srt | vtt | auto")
      ->capture_default_str();
  ingest->add_option("--frames", ingest_frames, "Symbolic frames JSONL")
      ->required();
  ingest->add_option("--out", ingest_out, "Output corpus JSONL")->required();
  ingest->add_flag("--write-vocabs", ingest_vocabs,
                   "Also write .sprites.vocab / .words.vocab files");

  // --- detect ------------------------------------------------------------
  auto* detect = app.add_subcommand(
      "detect", "Detect spritesheet sprites in frame PNGs -> frames JSONL");
  std::string detect_frames_dir, detect_sheet, detect_out;
  int detect_tolerance = 0;
  detect->add_option("--frames-dir", detect_frames_dir,
                     "Directory of <seconds>.png frames")
      ->required();
  detect->add_option("--sheet", detect_sheet,
                     "Spritesheet directory (stem = sprite name)")
      ->required();
  detect->add_option("--tolerance", detect_tolerance,
                     "Per-channel max absolute pixel difference")
      ->capture_default_str();
  detect->add_option("--out", detect_out, "Output frames JSONL")->required();

  // --- cluster -----------------------------------------------------------
  auto* cluster = app.add_subcommand(
      "cluster", "K-medoids with automatic k selection by distortion ratio");
  std::string cluster_corpus_path, cluster_out;
  int cluster_kmax = 10;
  double cluster_threshold = 0.85;
  lpc::DistanceConfig cluster_distance;
  std::uint64_t cluster_seed = 0;
  cluster->add_option("--corpus", cluster_corpus_path, "Training corpus JSONL")
      ->required();
  cluster->add_option("--kmax", cluster_kmax, "Largest k to consider")
      ->capture_default_str();
  cluster->add_option("--seed", cluster_seed, "Recorded run seed")->required();
  cluster->add_option("--threshold", cluster_threshold,
                      "f(k) acceptance threshold")
      ->capture_default_str();
  cluster->add_option("--text-weight", cluster_distance.text_weight,
                      "Comment-distance weight")
      ->capture_default_str();
  cluster->add_option("--frame-weight", cluster_distance.frame_weight,
                      "Sprite-distance weight")
      ->capture_default_str();
  cluster->add_option("--out", cluster_out, "Output cluster model JSON")
      ->required();

  // --- train -------------------------------------------------------------
  auto* train = app.add_subcommand(
      "train", "Train a predictor suite (standard or per-cluster)");
  std::string train_corpus_path, train_clusters_path, train_out;
  std::string train_predictor = "forest", train_mode = "standard";
  int train_trees = 10, train_max_depth = 200;
  std::uint64_t train_seed = 0;
  train->add_option("--corpus", train_corpus_path, "Training corpus JSONL")
      ->required();
  train->add_option("--clusters", train_clusters_path,
                    "Cluster model JSON (required for per-cluster mode)");
  train->add_option("--predictor", train_predictor,
                    "random | forest | knn5 | knn10")
      ->capture_default_str();
  train->add_option("--mode", train_mode, "standard | per-cluster")
      ->capture_default_str();
  train->add_option("--trees", train_trees, "Forest size")->capture_default_str();
  train->add_option("--max-depth", train_max_depth, "Forest depth cap")
      ->capture_default_str();
  train->add_option("--seed", train_seed, "Training seed")->required();
  train->add_option("--out", train_out, "Output suite JSON")->required();

  // --- evaluate ----------------------------------------------------------
  auto* evaluate = app.add_subcommand(
      "evaluate", "Evaluate a trained suite against a test corpus");
  std::string eval_suite_path, eval_test_path, eval_out;
  evaluate->add_option("--suite", eval_suite_path, "Trained suite JSON")
      ->required();
  evaluate->add_option("--test", eval_test_path, "Test corpus JSONL")->required();
  evaluate->add_option("--out", eval_out, "Output report CSV")->required();

  // --- experiment --------------------------------------------------------
  auto* experiment = app.add_subcommand(
      "experiment", "Run table1 | table2 | medoid on a train/test pair");
  std::string exp_which, exp_train, exp_test, exp_out;
  lpc::ExperimentConfig exp_cfg;
  experiment->add_option("which", exp_which, "table1 | table2 | medoid")
      ->required();
  experiment->add_option("--train", exp_train, "Training corpus JSONL")
      ->required();
  experiment->add_option("--test", exp_test, "Test corpus JSONL")->required();
  experiment->add_option("--seed", exp_cfg.seed, "Experiment seed")->required();
  experiment->add_option("--kmax", exp_cfg.k_max, "Largest k to consider")
      ->capture_default_str();
  experiment->add_option("--threshold", exp_cfg.selection_threshold,
                         "f(k) acceptance threshold")
      ->capture_default_str();
  experiment->add_option("--text-weight", exp_cfg.distance.text_weight,
                         "Comment-distance weight")
      ->capture_default_str();
  experiment->add_option("--frame-weight", exp_cfg.distance.frame_weight,
                         "Sprite-distance weight")
      ->capture_default_str();
  experiment->add_option("--trees", exp_cfg.trees, "Forest size")
      ->capture_default_str();
  experiment->add_option("--max-depth", exp_cfg.max_depth, "Forest depth cap")
      ->capture_default_str();
  experiment->add_option("--out", exp_out, "Output report CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);  // prints the message or requested help text
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (common.threads < 1) common.threads = 1;

  if (synth->parsed()) {
    auto [train_corpus, test_corpus] = lpc::generate_synthetic_corpus(synth_cfg);
    fs::path dir(synth_out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    lpc::atomic_write_file(dir / "train.jsonl",
                           lpc::serialize_corpus_jsonl(train_corpus));
    lpc::atomic_write_file(dir / "test.jsonl",
                           lpc::serialize_corpus_jsonl(test_corpus));
    if (synth_vocabs) {
      write_vocab_files(train_corpus, dir / "train");
      write_vocab_files(test_corpus, dir / "test");
    }
    std::cout << "synth: wrote " << train_corpus.size() << " train / "
              << test_corpus.size() << " test examples to " << dir.string()
              << "\n";
    return kExitOk;
  }

  if (ingest->parsed()) {
    auto format = parse_format(ingest_format, ingest_transcript);
    auto cues = lpc::parse_transcript(lpc::read_file(ingest_transcript), format);
    auto frames = lpc::parse_frames_jsonl(lpc::read_file(ingest_frames));
    lpc::IngestResult result = lpc::assemble_corpus(cues, frames);
    lpc::atomic_write_file(ingest_out,
                           lpc::serialize_corpus_jsonl(result.corpus));
    if (ingest_vocabs) write_vocab_files(result.corpus, fs::path(ingest_out));
    std::cout << "ingest: " << result.corpus.size() << " examples ("
              << result.dropped_cues << " cues dropped: no overlapping frames)\n";
    return kExitOk;
  }

  if (detect->parsed()) {
    auto sheet = lpc::load_spritesheet(detect_sheet);
    auto records = lpc::detect_directory(detect_frames_dir, sheet,
                                         detect_tolerance, common.threads);
    lpc::atomic_write_file(detect_out, lpc::serialize_frames_jsonl(records));
    std::cout << "detect: " << records.size() << " frames, " << sheet.size()
              << " sprites\n";
    return kExitOk;
  }

  if (cluster->parsed()) {
    lpc::Corpus corpus = load_corpus_file(cluster_corpus_path);
    lpc::ClusterModel model =
        lpc::cluster_corpus(corpus, cluster_kmax, cluster_distance, cluster_seed,
                            cluster_threshold, common.threads);
    lpc::atomic_write_file(cluster_out, lpc::serialize_cluster_model(model));
    std::cout << "cluster: selected k=" << model.k << " over " << corpus.size()
              << " examples\n";
    return kExitOk;
  }

  if (train->parsed()) {
    lpc::Corpus corpus = load_corpus_file(train_corpus_path);
    lpc::PredictorSpec spec;
    if (train_predictor == "random") {
      spec.kind = lpc::PredictorKind::random;
    } else if (train_predictor == "forest") {
      spec.kind = lpc::PredictorKind::forest;
    } else if (train_predictor == "knn5") {
      spec.kind = lpc::PredictorKind::knn;
      spec.knn_k = 5;
    } else if (train_predictor == "knn10") {
      spec.kind = lpc::PredictorKind::knn;
      spec.knn_k = 10;
    } else {
      throw std::invalid_argument("unknown predictor: " + train_predictor);
    }
    spec.trees = train_trees;
    spec.max_depth = train_max_depth;
    spec.seed = train_seed;

    lpc::TrainMode mode;
    if (train_mode == "standard") {
      mode = lpc::TrainMode::standard;
    } else if (train_mode == "per-cluster") {
      mode = lpc::TrainMode::per_cluster;
    } else {
      throw std::invalid_argument("unknown mode: " + train_mode);
    }
    std::optional<lpc::ClusterModel> clusters;
    if (!train_clusters_path.empty())
      clusters = lpc::parse_cluster_model(lpc::read_file(train_clusters_path));
    lpc::PredictorSuite suite = lpc::train_suite(corpus, clusters, spec, mode);
    lpc::atomic_write_file(train_out, lpc::serialize_suite(suite));
    std::cout << "train: " << train_predictor << " (" << train_mode << ", "
              << suite.units().size() << " unit(s))\n";
    return kExitOk;
  }

  if (evaluate->parsed()) {
    lpc::PredictorSuite suite = lpc::parse_suite(lpc::read_file(eval_suite_path));
    lpc::Corpus test = load_corpus_file(eval_test_path);
    lpc::ReportRow row;
    row.approach = lpc::to_string(suite.spec().kind);
    if (suite.spec().kind == lpc::PredictorKind::knn)
      row.approach += std::to_string(suite.spec().knn_k);
    row.mode = lpc::to_string(suite.mode());
    row.distances = lpc::evaluate(suite, test, common.threads);
    lpc::finalize_row(row);

    lpc::EvalReport report;
    report.seed = suite.spec().seed;
    report.test_fingerprint =
        lpc::to_hex(lpc::fnv1a64(lpc::serialize_corpus_jsonl(test)));
    report.clusters = suite.clusters() ? suite.clusters()->k : 0;
    report.rows.push_back(std::move(row));
    lpc::atomic_write_file(eval_out, lpc::serialize_report_csv(report));
    fs::path details(eval_out);
    details.replace_extension(".jsonl");
    lpc::atomic_write_file(details, lpc::serialize_report_details(report));
    std::cout << "evaluate: mean " << report.rows.front().mean << " +/- "
              << report.rows.front().stddev << " over "
              << report.rows.front().distances.size() << " examples\n";
    return kExitOk;
  }

  if (experiment->parsed()) {
    lpc::Corpus train_corpus = load_corpus_file(exp_train);
    lpc::Corpus test_corpus = load_corpus_file(exp_test);
    exp_cfg.threads = common.threads;
    lpc::EvalReport report;
    if (exp_which == "table1") {
      report = lpc::experiment_standard_vs_percluster(train_corpus, test_corpus,
                                                      exp_cfg);
    } else if (exp_which == "table2") {
      report = lpc::experiment_true_vs_random_cluster(train_corpus, test_corpus,
                                                      exp_cfg);
    } else if (exp_which == "medoid") {
      lpc::ClusterModel model = lpc::cluster_corpus(
          train_corpus, exp_cfg.k_max, exp_cfg.distance,
          lpc::derive_seed(exp_cfg.seed, "cluster"), exp_cfg.selection_threshold,
          exp_cfg.threads);
      report = lpc::medoid_comment_baseline(model, train_corpus, test_corpus,
                                            exp_cfg.seed, exp_cfg.threads);
    } else {
      throw std::invalid_argument("unknown experiment: " + exp_which +
                                  " (expected table1|table2|medoid)");
    }
    lpc::atomic_write_file(exp_out, lpc::serialize_report_csv(report));
    fs::path details(exp_out);
    details.replace_extension(".jsonl");
    lpc::atomic_write_file(details, lpc::serialize_report_details(report));
    std::cout << "experiment " << exp_which << ": " << report.rows.size()
              << " rows (k=" << report.clusters << ")\n";
    return kExitOk;
  }

  return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const lpc::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFormat;
  } catch (const lpc::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParams;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParams;
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << "\n";
    return kExitUnexpected;
  }
}

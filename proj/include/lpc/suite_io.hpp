#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "lpc/predictors.hpp"

namespace lpc {

namespace detail {

inline nlohmann::json bag_to_json(const SparseBag& bag) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& [idx, v] : bag.entries) entries.push_back({idx, v});
  return nlohmann::json{{"dim", bag.dim}, {"entries", entries}};
}

inline SparseBag bag_from_json(const nlohmann::json& obj) {
  SparseBag bag;
  bag.dim = obj.at("dim").get<int>();
  for (const auto& e : obj.at("entries"))
    bag.entries.emplace_back(e.at(0).get<int>(), e.at(1).get<double>());
  return bag;
}

inline nlohmann::json vocab_to_json(const Vocabulary& vocab) {
  return nlohmann::json(vocab.tokens());
}

inline Vocabulary vocab_from_json(const nlohmann::json& arr) {
  Vocabulary vocab;
  for (const auto& tok : arr) vocab.add(tok.get<std::string>());
  return vocab;
}

inline nlohmann::json unit_to_json(const PredictorUnit& unit) {
  if (const auto* rnd = std::get_if<RandomPredictor>(&unit)) {
    nlohmann::json bags = nlohmann::json::array();
    for (const auto& bag : rnd->bags()) bags.push_back(bag_to_json(bag));
    return nlohmann::json{{"kind", "random"}, {"bags", bags}, {"seed", rnd->seed()}};
  }
  if (const auto* forest = std::get_if<ForestModel>(&unit)) {
    nlohmann::json trees = nlohmann::json::array();
    for (const auto& tree : forest->trees()) {
      nlohmann::json nodes = nlohmann::json::array();
      for (const auto& node : tree.nodes) {
        if (node.feature < 0) {
          nodes.push_back({{"mean", bag_to_json(node.mean)}});
        } else {
          nodes.push_back({{"feature", node.feature},
                           {"threshold", node.threshold},
                           {"left", node.left},
                           {"right", node.right}});
        }
      }
      trees.push_back({{"nodes", nodes}});
    }
    return nlohmann::json{{"kind", "forest"},
                          {"trees", trees},
                          {"feature_dim", forest->feature_dim()},
                          {"output_dim", forest->output_dim()}};
  }
  const auto& knn = std::get<KnnModel>(unit);
  nlohmann::json sprites = nlohmann::json::array(), words = nlohmann::json::array();
  for (const auto& bag : knn.sprite_bags()) sprites.push_back(bag_to_json(bag));
  for (const auto& bag : knn.word_bags()) words.push_back(bag_to_json(bag));
  return nlohmann::json{{"kind", "knn"},
                        {"k", knn.k_requested()},
                        {"k_effective", knn.k_effective()},
                        {"sprites", sprites},
                        {"words", words},
                        {"comments", knn.comments()}};
}

inline PredictorUnit unit_from_json(const nlohmann::json& obj) {
  const std::string kind = obj.at("kind").get<std::string>();
  if (kind == "random") {
    std::vector<SparseBag> bags;
    for (const auto& b : obj.at("bags")) bags.push_back(bag_from_json(b));
    return RandomPredictor(std::move(bags), obj.at("seed").get<std::uint64_t>());
  }
  if (kind == "forest") {
    std::vector<Tree> trees;
    for (const auto& t : obj.at("trees")) {
      Tree tree;
      for (const auto& n : t.at("nodes")) {
        TreeNode node;
        if (n.contains("mean")) {
          node.mean = bag_from_json(n.at("mean"));
        } else {
          node.feature = n.at("feature").get<int>();
          node.threshold = n.at("threshold").get<double>();
          node.left = n.at("left").get<int>();
          node.right = n.at("right").get<int>();
        }
        tree.nodes.push_back(std::move(node));
      }
      trees.push_back(std::move(tree));
    }
    return ForestModel(std::move(trees), obj.at("feature_dim").get<int>(),
                       obj.at("output_dim").get<int>());
  }
  if (kind == "knn") {
    std::vector<SparseBag> sprites, words;
    for (const auto& b : obj.at("sprites")) sprites.push_back(bag_from_json(b));
    for (const auto& b : obj.at("words")) words.push_back(bag_from_json(b));
    return KnnModel(std::move(sprites), std::move(words),
                    obj.at("comments").get<std::vector<std::string>>(),
                    obj.at("k").get<int>());
  }
  throw ParseError("unknown predictor unit kind: " + kind);
}

}  // namespace detail

inline std::string to_string(PredictorKind kind) {
  switch (kind) {
    case PredictorKind::random: return "random";
    case PredictorKind::forest: return "forest";
    case PredictorKind::knn: return "knn";
  }
  return "?";
}

inline std::string to_string(TrainMode mode) {
  return mode == TrainMode::standard ? "standard" : "per-cluster";
}

inline std::string serialize_suite(const PredictorSuite& suite) {
  const auto& spec = suite.spec();
  nlohmann::json units = nlohmann::json::array();
  for (const auto& unit : suite.units()) units.push_back(detail::unit_to_json(unit));
  nlohmann::json medoid_bags = nlohmann::json::array();
  for (const auto& bag : suite.medoid_bags())
    medoid_bags.push_back(detail::bag_to_json(bag));
  nlohmann::json obj{
      {"spec",
       {{"kind", to_string(spec.kind)},
        {"knn_k", spec.knn_k},
        {"trees", spec.trees},
        {"max_depth", spec.max_depth},
        {"seed", spec.seed},
        {"bootstrap", spec.bootstrap}}},
      {"mode", to_string(suite.mode())},
      {"sprite_vocab", detail::vocab_to_json(suite.sprite_vocab())},
      {"word_vocab", detail::vocab_to_json(suite.word_vocab())},
      {"clusters", suite.clusters() ? cluster_model_to_json(*suite.clusters())
                                    : nlohmann::json(nullptr)},
      {"medoid_bags", medoid_bags},
      {"units", units}};
  return obj.dump() + "\n";
}

inline PredictorSuite parse_suite(std::string_view content) {
  nlohmann::json obj;
  try {
    obj = nlohmann::json::parse(content);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid suite JSON: ") + e.what());
  }
  try {
    PredictorSpec spec;
    const auto& s = obj.at("spec");
    const std::string kind = s.at("kind").get<std::string>();
    if (kind == "random") spec.kind = PredictorKind::random;
    else if (kind == "forest") spec.kind = PredictorKind::forest;
    else if (kind == "knn") spec.kind = PredictorKind::knn;
    else throw ParseError("unknown predictor kind: " + kind);
    spec.knn_k = s.at("knn_k").get<int>();
    spec.trees = s.at("trees").get<int>();
    spec.max_depth = s.at("max_depth").get<int>();
    spec.seed = s.at("seed").get<std::uint64_t>();
    spec.bootstrap = s.at("bootstrap").get<bool>();

    const std::string mode_str = obj.at("mode").get<std::string>();
    TrainMode mode = mode_str == "per-cluster" ? TrainMode::per_cluster
                                               : TrainMode::standard;
    std::optional<ClusterModel> clusters;
    if (!obj.at("clusters").is_null())
      clusters = cluster_model_from_json(obj.at("clusters"));
    std::vector<SparseBag> medoid_bags;
    for (const auto& b : obj.at("medoid_bags"))
      medoid_bags.push_back(detail::bag_from_json(b));
    std::vector<PredictorUnit> units;
    for (const auto& u : obj.at("units"))
      units.push_back(detail::unit_from_json(u));
    if (units.empty()) throw ParseError("suite has no predictor units");
    return PredictorSuite(spec, mode, detail::vocab_from_json(obj.at("sprite_vocab")),
                          detail::vocab_from_json(obj.at("word_vocab")),
                          std::move(clusters), std::move(medoid_bags),
                          std::move(units));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid suite document: ") + e.what());
  }
}

}  // namespace lpc

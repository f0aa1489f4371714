#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "lpc/bag.hpp"
#include "lpc/frames.hpp"
#include "lpc/io_util.hpp"
#include "lpc/text.hpp"
#include "lpc/vocab.hpp"

namespace lpc {

// One utterance with its frame sequence: the unit of training and testing.
struct PairedExample {
  std::string id;
  std::vector<std::int64_t> frame_timestamps;  // non-empty, strictly increasing
  SparseBag sprite_bag;                        // sum over the per-frame bags
  std::string comment_text;
  SparseBag comment_bag;
  std::optional<std::string> topic_label;  // synthetic corpora only
};

struct Corpus {
  std::vector<PairedExample> examples;
  Vocabulary sprite_vocab;
  Vocabulary word_vocab;

  std::size_t size() const { return examples.size(); }
};

// Pre-vocabulary form of an example; corpora are finalized from these.
struct RawExample {
  std::string id;
  std::vector<std::int64_t> frame_timestamps;
  std::map<std::string, std::int64_t> sprite_counts;
  std::string comment_text;
  std::optional<std::string> topic_label;
};

// Builds vocabularies in first-appearance order over the raw examples and
// converts counts and comments into bags.
inline Corpus finalize_corpus(const std::vector<RawExample>& raws) {
  Corpus corpus;
  std::unordered_set<std::string> seen_ids;
  std::vector<std::vector<std::string>> tokenized;
  tokenized.reserve(raws.size());

  for (const auto& raw : raws) {
    if (raw.id.empty())
      throw std::invalid_argument("corpus example with empty id");
    if (!seen_ids.insert(raw.id).second)
      throw std::invalid_argument("duplicate example id: " + raw.id);
    if (raw.frame_timestamps.empty())
      throw std::invalid_argument("example " + raw.id + " has no frames");
    for (std::size_t i = 1; i < raw.frame_timestamps.size(); ++i)
      if (raw.frame_timestamps[i] <= raw.frame_timestamps[i - 1])
        throw std::invalid_argument("example " + raw.id +
                                    ": frame timestamps not strictly increasing");
    for (const auto& [name, count] : raw.sprite_counts)
      if (count > 0) corpus.sprite_vocab.add(name);
    tokenized.push_back(tokenize(raw.comment_text));
    for (const auto& tok : tokenized.back()) corpus.word_vocab.add(tok);
  }

  corpus.examples.reserve(raws.size());
  for (std::size_t i = 0; i < raws.size(); ++i) {
    const auto& raw = raws[i];
    PairedExample ex;
    ex.id = raw.id;
    ex.frame_timestamps = raw.frame_timestamps;
    ex.sprite_bag = bag_of(raw.sprite_counts, corpus.sprite_vocab);
    ex.comment_text = raw.comment_text;
    ex.comment_bag = bag_of(tokenized[i], corpus.word_vocab);
    ex.topic_label = raw.topic_label;
    corpus.examples.push_back(std::move(ex));
  }
  return corpus;
}

// Corpus JSONL, one object per line:
//   {"id": str, "frames": [int...], "sprites": {name: count}, "comment": str}
// plus an optional "topic" key on synthetic corpora.
inline Corpus parse_corpus_jsonl(std::string_view content) {
  std::vector<RawExample> raws;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < content.size()) {
    std::size_t eol = content.find('\n', pos);
    if (eol == std::string_view::npos) eol = content.size();
    std::string_view line = content.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;

    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("invalid corpus record: ") + e.what(), line_no);
    }
    if (!obj.is_object() || !obj.contains("id") || !obj["id"].is_string() ||
        !obj.contains("frames") || !obj["frames"].is_array() ||
        !obj.contains("sprites") || !obj["sprites"].is_object() ||
        !obj.contains("comment") || !obj["comment"].is_string())
      throw ParseError("corpus record must have id, frames, sprites, comment",
                       line_no);

    RawExample raw;
    raw.id = obj["id"].get<std::string>();
    for (const auto& t : obj["frames"]) {
      if (!t.is_number_integer())
        throw ParseError("frame timestamps must be integers", line_no);
      raw.frame_timestamps.push_back(t.get<std::int64_t>());
    }
    for (const auto& [name, value] : obj["sprites"].items()) {
      if (!value.is_number_integer() || value.get<std::int64_t>() < 0)
        throw ParseError("sprite count for '" + name +
                             "' must be a non-negative integer",
                         line_no);
      raw.sprite_counts[name] = value.get<std::int64_t>();
    }
    raw.comment_text = obj["comment"].get<std::string>();
    if (obj.contains("topic")) {
      if (!obj["topic"].is_string())
        throw ParseError("topic must be a string", line_no);
      raw.topic_label = obj["topic"].get<std::string>();
    }
    raws.push_back(std::move(raw));
  }
  try {
    return finalize_corpus(raws);
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
}

inline std::string serialize_corpus_jsonl(const Corpus& corpus) {
  std::string out;
  for (const auto& ex : corpus.examples) {
    nlohmann::json sprites = nlohmann::json::object();
    for (const auto& [idx, count] : ex.sprite_bag.entries)
      sprites[corpus.sprite_vocab.name(idx)] = static_cast<std::int64_t>(count);
    nlohmann::json obj{{"id", ex.id},
                       {"frames", ex.frame_timestamps},
                       {"sprites", sprites},
                       {"comment", ex.comment_text}};
    if (ex.topic_label) obj["topic"] = *ex.topic_label;
    out += obj.dump();
    out += '\n';
  }
  return out;
}

struct IngestResult {
  Corpus corpus;
  std::size_t dropped_cues = 0;
};

// Transcript cues + symbolic frames -> corpus. Each kept cue becomes one
// example whose sprite bag is the element-wise sum of its paired frames'
// bags.
inline IngestResult assemble_corpus(const std::vector<TranscriptCue>& cues,
                                    const std::vector<FrameRecord>& frames) {
  PairingResult pairing = pair_frames(cues, frames);

  std::map<std::int64_t, const FrameRecord*> by_time;
  for (const auto& f : frames) by_time[f.timestamp_s] = &f;

  std::vector<RawExample> raws;
  raws.reserve(pairing.pairs.size());
  for (std::size_t i = 0; i < pairing.pairs.size(); ++i) {
    const auto& pair = pairing.pairs[i];
    RawExample raw;
    char buf[16];
    std::snprintf(buf, sizeof(buf), "ex%04zu", i);
    raw.id = buf;
    raw.frame_timestamps = pair.timestamps;
    for (std::int64_t t : pair.timestamps)
      for (const auto& [name, count] : by_time.at(t)->sprites)
        if (count > 0) raw.sprite_counts[name] += count;
    raw.comment_text = pair.cue.text;
    raws.push_back(std::move(raw));
  }
  return {finalize_corpus(raws), pairing.dropped};
}

}  // namespace lpc

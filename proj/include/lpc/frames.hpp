#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "lpc/io_util.hpp"
#include "lpc/transcript.hpp"

namespace lpc {

// One frame on the 1 FPS integer grid, as a symbolic sprite-count record.
// Frames that exist as image files become FrameRecords through sprite
// detection (see sprites.hpp), which makes the two sources interchangeable.
struct FrameRecord {
  std::int64_t timestamp_s = 0;
  std::map<std::string, std::int64_t> sprites;

  bool operator==(const FrameRecord&) const = default;
};

// JSONL, one object per line: {"t": <int seconds>, "sprites": {"name": n}}.
// Records are returned sorted by timestamp; duplicates and negative
// timestamps raise ParseError.
inline std::vector<FrameRecord> parse_frames_jsonl(std::string_view content) {
  std::vector<FrameRecord> frames;
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
      throw ParseError(std::string("invalid frame record: ") + e.what(), line_no);
    }
    if (!obj.is_object() || !obj.contains("t") || !obj.contains("sprites") ||
        !obj["t"].is_number_integer() || !obj["sprites"].is_object())
      throw ParseError("frame record must be {\"t\": int, \"sprites\": object}",
                       line_no);
    FrameRecord rec;
    rec.timestamp_s = obj["t"].get<std::int64_t>();
    if (rec.timestamp_s < 0)
      throw ParseError("frame timestamp must be non-negative", line_no);
    for (const auto& [name, value] : obj["sprites"].items()) {
      if (!value.is_number_integer() || value.get<std::int64_t>() < 0)
        throw ParseError("sprite count for '" + name +
                             "' must be a non-negative integer",
                         line_no);
      rec.sprites[name] = value.get<std::int64_t>();
    }
    frames.push_back(std::move(rec));
  }
  std::sort(frames.begin(), frames.end(),
            [](const FrameRecord& a, const FrameRecord& b) {
              return a.timestamp_s < b.timestamp_s;
            });
  for (std::size_t i = 1; i < frames.size(); ++i)
    if (frames[i].timestamp_s == frames[i - 1].timestamp_s)
      throw ParseError("duplicate frame timestamp " +
                       std::to_string(frames[i].timestamp_s));
  return frames;
}

inline std::string serialize_frames_jsonl(const std::vector<FrameRecord>& frames) {
  std::string out;
  for (const auto& rec : frames) {
    nlohmann::json sprites = nlohmann::json::object();
    for (const auto& [name, count] : rec.sprites) sprites[name] = count;
    nlohmann::json obj{{"t", rec.timestamp_s}, {"sprites", sprites}};
    out += obj.dump();
    out += '\n';
  }
  return out;
}

struct CueFramePair {
  TranscriptCue cue;
  std::vector<std::int64_t> timestamps;
};

struct PairingResult {
  std::vector<CueFramePair> pairs;
  std::size_t dropped = 0;  // cues overlapping no existing frame
};

// A cue spanning [s, e] picks up every existing frame timestamp t with
// floor(s) <= t <= ceil(e); on the 1 FPS grid any cue of at least one second
// therefore gets two or more frames. Cues that overlap nothing are dropped
// and counted, not errored: automated transcripts are noisy.
inline PairingResult pair_frames(const std::vector<TranscriptCue>& cues,
                                 const std::vector<FrameRecord>& frames) {
  std::vector<std::int64_t> grid;
  grid.reserve(frames.size());
  for (const auto& f : frames) grid.push_back(f.timestamp_s);
  std::sort(grid.begin(), grid.end());

  PairingResult result;
  for (const auto& cue : cues) {
    auto lo = static_cast<std::int64_t>(std::floor(cue.start_s));
    auto hi = static_cast<std::int64_t>(std::ceil(cue.end_s));
    auto begin = std::lower_bound(grid.begin(), grid.end(), lo);
    auto end = std::upper_bound(grid.begin(), grid.end(), hi);
    if (begin == end) {
      ++result.dropped;
      continue;
    }
    result.pairs.push_back({cue, std::vector<std::int64_t>(begin, end)});
  }
  return result;
}

}  // namespace lpc

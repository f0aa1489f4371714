#pragma once

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "lpc/frames.hpp"
#include "lpc/image.hpp"
#include "lpc/parallel.hpp"
#include "lpc/png_io.hpp"

namespace lpc {

struct MatchPos {
  int x = 0;
  int y = 0;
  bool operator==(const MatchPos&) const = default;
};

// Sliding-window matching: (x, y) is reported iff every non-wildcard template
// pixel is within `tolerance` of the frame pixel in each channel. Zero
// tolerance is the default; NES frames are palette-exact. Positions come out
// sorted row-major.
inline std::vector<MatchPos> match_template(const FrameImage& frame,
                                            const SpriteTemplate& tmpl,
                                            int tolerance = 0) {
  if (tolerance < 0)
    throw std::invalid_argument("match_template: tolerance must be >= 0");
  std::vector<MatchPos> matches;
  for (int y = 0; y + tmpl.height <= frame.height; ++y) {
    for (int x = 0; x + tmpl.width <= frame.width; ++x) {
      bool ok = true;
      for (int ty = 0; ok && ty < tmpl.height; ++ty) {
        for (int tx = 0; tx < tmpl.width; ++tx) {
          const Rgba& tp = tmpl.at(tx, ty);
          if (tp.a == 0) continue;
          const Rgb& fp = frame.at(x + tx, y + ty);
          if (std::abs(int(tp.r) - int(fp.r)) > tolerance ||
              std::abs(int(tp.g) - int(fp.g)) > tolerance ||
              std::abs(int(tp.b) - int(fp.b)) > tolerance) {
            ok = false;
            break;
          }
        }
      }
      if (ok) matches.push_back({x, y});
    }
  }
  return matches;
}

// Bag of sprites for one frame. Overlapping matches of the SAME sprite are
// one on-screen entity counted once: matches are taken in row-major order and
// a later match is discarded when its bounding box overlaps a kept one.
// Overlaps across different sprites are all kept.
inline std::map<std::string, std::int64_t> detect_bag(
    const FrameImage& frame, const std::vector<SpriteTemplate>& sheet,
    int tolerance = 0) {
  if (sheet.empty())
    throw std::invalid_argument("detect_bag: empty spritesheet");
  std::map<std::string, std::int64_t> bag;
  for (const auto& tmpl : sheet) {
    std::vector<MatchPos> kept;
    for (const MatchPos& m : match_template(frame, tmpl, tolerance)) {
      bool overlaps = false;
      for (const MatchPos& k : kept) {
        if (std::abs(m.x - k.x) < tmpl.width && std::abs(m.y - k.y) < tmpl.height) {
          overlaps = true;
          break;
        }
      }
      if (!overlaps) kept.push_back(m);
    }
    if (!kept.empty()) bag[tmpl.name] = static_cast<std::int64_t>(kept.size());
  }
  return bag;
}

// Spritesheet = directory of PNG files, file stem = sprite name.
inline std::vector<SpriteTemplate> load_spritesheet(
    const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir))
    throw IoError("spritesheet directory not found: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".png")
      files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  std::vector<SpriteTemplate> sheet;
  sheet.reserve(files.size());
  for (const auto& file : files) {
    std::string name = file.stem().string();
    for (const auto& existing : sheet)
      if (existing.name == name)
        throw std::invalid_argument("duplicate sprite name in sheet: " + name);
    sheet.push_back(read_template_png(file, std::move(name)));
  }
  if (sheet.empty())
    throw IoError("spritesheet directory has no .png files: " + dir.string());
  return sheet;
}

// Frame directory -> symbolic frame records. Filenames are <seconds>.png on
// the 1 FPS grid. Per-frame detection runs in parallel; records are keyed by
// timestamp so the result is identical to the sequential run.
inline std::vector<FrameRecord> detect_directory(
    const std::filesystem::path& frames_dir,
    const std::vector<SpriteTemplate>& sheet, int tolerance = 0,
    int threads = 1) {
  if (!std::filesystem::is_directory(frames_dir))
    throw IoError("frame directory not found: " + frames_dir.string());
  std::vector<std::pair<std::int64_t, std::filesystem::path>> files;
  for (const auto& entry : std::filesystem::directory_iterator(frames_dir)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".png") continue;
    const std::string stem = entry.path().stem().string();
    std::size_t consumed = 0;
    std::int64_t t = 0;
    try {
      t = std::stoll(stem, &consumed);
    } catch (const std::exception&) {
      consumed = 0;
    }
    if (consumed != stem.size() || t < 0)
      throw ParseError("frame filename must be <seconds>.png, got: " +
                       entry.path().filename().string());
    files.emplace_back(t, entry.path());
  }
  std::sort(files.begin(), files.end());
  for (std::size_t i = 1; i < files.size(); ++i)
    if (files[i].first == files[i - 1].first)
      throw ParseError("duplicate frame timestamp " +
                       std::to_string(files[i].first));

  std::vector<FrameRecord> records(files.size());
  parallel_for(files.size(), threads, [&](std::size_t i) {
    FrameImage frame = read_frame_png(files[i].second);
    records[i] = {files[i].first, detect_bag(frame, sheet, tolerance)};
  });
  return records;
}

}  // namespace lpc

#pragma once

#include <cmath>
#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

#include "lpc/io_util.hpp"
#include "lpc/text.hpp"

namespace lpc {

struct TranscriptCue {
  double start_s = 0.0;
  double end_s = 0.0;
  std::string text;

  bool operator==(const TranscriptCue&) const = default;
};

enum class TranscriptFormat { srt, vtt };

namespace detail {

struct Line {
  std::string_view text;
  std::size_t number;  // 1-based
};

inline std::vector<Line> split_lines(std::string_view content) {
  std::vector<Line> lines;
  std::size_t pos = 0, number = 0;
  while (pos < content.size()) {
    std::size_t eol = content.find('\n', pos);
    if (eol == std::string_view::npos) eol = content.size();
    std::string_view line = content.substr(pos, eol - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back({line, ++number});
    pos = eol + 1;
  }
  return lines;
}

inline bool is_blank(std::string_view s) {
  return s.find_first_not_of(" \t") == std::string_view::npos;
}

inline bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}

inline std::string_view trim(std::string_view s) {
  std::size_t b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  std::size_t e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

// HH:MM:SS<sep>mmm with two or more hour digits; <sep> is ',' for SRT and
// '.' for WebVTT.
inline double parse_timestamp(std::string_view s, char millis_sep,
                              std::size_t line_no) {
  auto fail = [&]() -> double {
    throw ParseError("malformed timestamp '" + std::string(s) + "'", line_no);
  };
  std::size_t c1 = s.find(':');
  if (c1 == std::string_view::npos || c1 < 2 || !all_digits(s.substr(0, c1)))
    return fail();
  if (s.size() < c1 + 10) return fail();  // :MM:SS?mmm
  std::string_view mm = s.substr(c1 + 1, 2);
  std::string_view ss = s.substr(c1 + 4, 2);
  std::string_view mmm = s.substr(c1 + 7, 3);
  if (s[c1 + 3] != ':' || s[c1 + 6] != millis_sep) return fail();
  if (!all_digits(mm) || !all_digits(ss) || !all_digits(mmm)) return fail();
  if (s.size() != c1 + 10) return fail();
  long long hours = std::stoll(std::string(s.substr(0, c1)));
  int minutes = (mm[0] - '0') * 10 + (mm[1] - '0');
  int seconds = (ss[0] - '0') * 10 + (ss[1] - '0');
  int millis = (mmm[0] - '0') * 100 + (mmm[1] - '0') * 10 + (mmm[2] - '0');
  if (minutes > 59 || seconds > 59) return fail();
  // Integer milliseconds first, one division last: every timestamp has a
  // single canonical double, so serialize-then-parse is exact.
  long long total_ms =
      ((hours * 60 + minutes) * 60 + seconds) * 1000LL + millis;
  return static_cast<double>(total_ms) / 1000.0;
}

// "<start> --> <end>[ cue settings]" with either timestamp grammar.
inline std::pair<double, double> parse_timing_line(std::string_view line,
                                                   char millis_sep,
                                                   std::size_t line_no) {
  std::size_t arrow = line.find("-->");
  if (arrow == std::string_view::npos)
    throw ParseError("expected cue timing line", line_no);
  std::string_view lhs = trim(line.substr(0, arrow));
  std::string_view rhs = trim(line.substr(arrow + 3));
  // Anything after the end timestamp (cue settings, coordinates) is ignored.
  std::size_t ws = rhs.find_first_of(" \t");
  if (ws != std::string_view::npos) rhs = rhs.substr(0, ws);
  double start = parse_timestamp(lhs, millis_sep, line_no);
  double end = parse_timestamp(rhs, millis_sep, line_no);
  if (start > end)
    throw ParseError("cue start time exceeds end time", line_no);
  return {start, end};
}

inline std::string format_timestamp(double seconds, char millis_sep) {
  long long total_ms = std::llround(seconds * 1000.0);
  long long hh = total_ms / 3600000;
  int mm = static_cast<int>((total_ms / 60000) % 60);
  int ss = static_cast<int>((total_ms / 1000) % 60);
  int mmm = static_cast<int>(total_ms % 1000);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%02lld:%02d:%02d%c%03d", hh, mm, ss,
                millis_sep, mmm);
  return buf;
}

}  // namespace detail

// Parses SRT or WebVTT content into cues, one per subtitle block, text lines
// joined with a single space, file order preserved. Empty input is an empty
// list. Malformed timestamps, start > end, and out-of-order cues raise
// ParseError naming the offending line.
inline std::vector<TranscriptCue> parse_transcript(std::string_view content,
                                                   TranscriptFormat format) {
  const char millis_sep = format == TranscriptFormat::srt ? ',' : '.';
  auto lines = detail::split_lines(content);
  std::size_t i = 0;

  if (format == TranscriptFormat::vtt) {
    // Skip the WEBVTT preamble (header line plus metadata until blank).
    while (i < lines.size() && detail::is_blank(lines[i].text)) ++i;
    if (i < lines.size() && lines[i].text.substr(0, 6) == "WEBVTT") {
      while (i < lines.size() && !detail::is_blank(lines[i].text)) ++i;
    }
  }

  std::vector<TranscriptCue> cues;
  while (i < lines.size()) {
    if (detail::is_blank(lines[i].text)) {
      ++i;
      continue;
    }
    std::size_t block_begin = i;
    while (i < lines.size() && !detail::is_blank(lines[i].text)) ++i;
    std::size_t block_end = i;  // [block_begin, block_end)

    std::string_view first = lines[block_begin].text;
    if (format == TranscriptFormat::vtt &&
        (first.substr(0, 4) == "NOTE" || first == "STYLE" || first == "REGION"))
      continue;

    // The timing line is the first line of the block, or the second when the
    // block opens with an identifier (the SRT counter, a VTT cue id).
    std::size_t ts = block_begin;
    if (ts < block_end && lines[ts].text.find("-->") == std::string_view::npos &&
        ts + 1 < block_end)
      ++ts;
    auto [start, end] =
        detail::parse_timing_line(lines[ts].text, millis_sep, lines[ts].number);

    std::string text;
    for (std::size_t j = ts + 1; j < block_end; ++j) {
      if (!text.empty()) text += ' ';
      text += lines[j].text;
    }

    if (!cues.empty() && start < cues.back().start_s)
      throw ParseError("cues not ordered by start time", lines[ts].number);
    cues.push_back({start, end, std::move(text)});
  }
  return cues;
}

inline std::string serialize_transcript(const std::vector<TranscriptCue>& cues,
                                        TranscriptFormat format) {
  const char millis_sep = format == TranscriptFormat::srt ? ',' : '.';
  std::string out;
  if (format == TranscriptFormat::vtt) out += "WEBVTT\n\n";
  for (std::size_t i = 0; i < cues.size(); ++i) {
    if (format == TranscriptFormat::srt) {
      out += std::to_string(i + 1);
      out += '\n';
    }
    out += detail::format_timestamp(cues[i].start_s, millis_sep);
    out += " --> ";
    out += detail::format_timestamp(cues[i].end_s, millis_sep);
    out += '\n';
    if (!cues[i].text.empty()) {
      out += cues[i].text;
      out += '\n';
    }
    out += '\n';
  }
  return out;
}

}  // namespace lpc

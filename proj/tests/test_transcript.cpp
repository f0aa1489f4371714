#include "lpc/transcript.hpp"

#include <gtest/gtest.h>

#include "lpc/rng.hpp"

using lpc::ParseError;
using lpc::parse_transcript;
using lpc::serialize_transcript;
using lpc::TranscriptCue;
using lpc::TranscriptFormat;

TEST(Srt, SingleBlock) {
  auto cues = parse_transcript("1\n00:00:01,000 --> 00:00:03,500\nhello there\n",
                               TranscriptFormat::srt);
  ASSERT_EQ(cues.size(), 1u);
  EXPECT_DOUBLE_EQ(cues[0].start_s, 1.0);
  EXPECT_DOUBLE_EQ(cues[0].end_s, 3.5);
  EXPECT_EQ(cues[0].text, "hello there");
}

TEST(Srt, EmptyInputIsEmptyList) {
  EXPECT_TRUE(parse_transcript("", TranscriptFormat::srt).empty());
  EXPECT_TRUE(parse_transcript("\n\n  \n", TranscriptFormat::srt).empty());
}

TEST(Srt, MultiLineTextJoinedWithSpace) {
  auto cues = parse_transcript(
      "1\n00:00:01,000 --> 00:00:02,000\nfirst line\nsecond line\n\n"
      "2\n00:00:03,000 --> 00:00:04,000\nnext\n",
      TranscriptFormat::srt);
  ASSERT_EQ(cues.size(), 2u);
  EXPECT_EQ(cues[0].text, "first line second line");
  EXPECT_EQ(cues[1].text, "next");
}

TEST(Srt, CrlfAndMissingTrailingNewline) {
  auto cues = parse_transcript(
      "1\r\n00:00:00,500 --> 00:00:01,250\r\nokay\r\n\r\n2\r\n"
      "00:00:02,000 --> 00:00:02,000\r\nhm",
      TranscriptFormat::srt);
  ASSERT_EQ(cues.size(), 2u);
  EXPECT_DOUBLE_EQ(cues[0].start_s, 0.5);
  EXPECT_DOUBLE_EQ(cues[0].end_s, 1.25);
  EXPECT_EQ(cues[1].text, "hm");
}

TEST(Srt, MalformedTimestampNamesLine) {
  try {
    parse_transcript("1\n00:00:0x,000 --> 00:00:03,500\nbad\n",
                     TranscriptFormat::srt);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_NE(std::string(e.what()).find("malformed timestamp"), std::string::npos);
  }
}

TEST(Srt, StartAfterEndRejected) {
  EXPECT_THROW(parse_transcript("1\n00:00:05,000 --> 00:00:01,000\nx\n",
                                TranscriptFormat::srt),
               ParseError);
}

TEST(Srt, OutOfOrderCuesRejected) {
  EXPECT_THROW(parse_transcript(
                   "1\n00:00:05,000 --> 00:00:06,000\na\n\n"
                   "2\n00:00:01,000 --> 00:00:02,000\nb\n",
                   TranscriptFormat::srt),
               ParseError);
}

TEST(Srt, MinutesOverFiftyNineRejected) {
  EXPECT_THROW(
      parse_transcript("1\n00:61:00,000 --> 00:62:00,000\nx\n",
                       TranscriptFormat::srt),
      ParseError);
}

TEST(Vtt, CueWithoutHeader) {
  auto cues = parse_transcript("00:00:00.000 --> 00:00:02.000\nif you get to Bowser\n",
                               TranscriptFormat::vtt);
  ASSERT_EQ(cues.size(), 1u);
  EXPECT_DOUBLE_EQ(cues[0].start_s, 0.0);
  EXPECT_DOUBLE_EQ(cues[0].end_s, 2.0);
  EXPECT_EQ(cues[0].text, "if you get to Bowser");
}

TEST(Vtt, HeaderNotesAndCueSettings) {
  auto cues = parse_transcript(
      "WEBVTT - some stream\nKind: captions\n\n"
      "NOTE this block is ignored\nstill ignored\n\n"
      "intro-cue\n00:00:01.000 --> 00:00:02.500 align:start line:0%\nhello\n\n"
      "00:01:00.000 --> 00:01:01.000\nworld\n",
      TranscriptFormat::vtt);
  ASSERT_EQ(cues.size(), 2u);
  EXPECT_DOUBLE_EQ(cues[0].start_s, 1.0);
  EXPECT_DOUBLE_EQ(cues[0].end_s, 2.5);
  EXPECT_EQ(cues[0].text, "hello");
  EXPECT_EQ(cues[1].text, "world");
}

TEST(Vtt, SrtTimestampSeparatorRejected) {
  EXPECT_THROW(parse_transcript("00:00:00,000 --> 00:00:02,000\nnope\n",
                                TranscriptFormat::vtt),
               ParseError);
}

TEST(Transcript, RoundTripIsIdentity) {
  lpc::Rng rng(97);
  for (auto format : {TranscriptFormat::srt, TranscriptFormat::vtt}) {
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<TranscriptCue> cues;
      std::int64_t start_ms = 0;
      auto n = rng.below(6);
      for (std::uint64_t i = 0; i < n; ++i) {
        start_ms += static_cast<std::int64_t>(rng.below(5000));
        std::int64_t end_ms = start_ms + static_cast<std::int64_t>(rng.below(8000));
        std::string text = rng.below(4) == 0 ? "" : "cue number " + std::to_string(i);
        cues.push_back({static_cast<double>(start_ms) / 1000.0,
                        static_cast<double>(end_ms) / 1000.0, text});
      }
      auto serialized = serialize_transcript(cues, format);
      auto reparsed = parse_transcript(serialized, format);
      EXPECT_EQ(reparsed, cues);
    }
  }
}

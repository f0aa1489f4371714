#include "lpc/text.hpp"

#include <gtest/gtest.h>

#include "lpc/rng.hpp"

using lpc::join;
using lpc::tokenize;

TEST(Tokenize, LowercasesAndSplits) {
  EXPECT_EQ(tokenize("If you get to Bowser"),
            (std::vector<std::string>{"if", "you", "get", "to", "bowser"}));
}

TEST(Tokenize, EmptyString) { EXPECT_TRUE(tokenize("").empty()); }

TEST(Tokenize, ApostrophesKeptPunctuationSplits) {
  EXPECT_EQ(tokenize("It's-a me, MARIO!"),
            (std::vector<std::string>{"it's", "a", "me", "mario"}));
}

TEST(Tokenize, DigitsAreTokenChars) {
  EXPECT_EQ(tokenize("world 1-1 speedrun"),
            (std::vector<std::string>{"world", "1", "1", "speedrun"}));
}

TEST(Tokenize, NonAsciiActsAsSeparator) {
  EXPECT_EQ(tokenize("mario\xc3\xa9luigi"),
            (std::vector<std::string>{"mario", "luigi"}));
}

TEST(Tokenize, IdempotentOnJoinedOutput) {
  lpc::Rng rng(41);
  const std::string alphabet =
      "abcXYZ012 !?',.-\n\t\xc3\xa9_#";
  for (int trial = 0; trial < 200; ++trial) {
    std::string s;
    auto len = rng.below(40);
    for (std::uint64_t i = 0; i < len; ++i)
      s.push_back(alphabet[static_cast<std::size_t>(rng.below(alphabet.size()))]);
    auto once = tokenize(s);
    auto twice = tokenize(join(once));
    EXPECT_EQ(once, twice) << "input: " << s;
  }
}

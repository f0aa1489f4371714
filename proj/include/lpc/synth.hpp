#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "lpc/corpus.hpp"
#include "lpc/rng.hpp"
#include "lpc/text.hpp"

namespace lpc {

// Synthetic paired corpora with planted topic structure. Every topic owns a
// disjoint core set of sprite types and word types; each example picks its
// topic uniformly, then draws sprites and words from the topic cores with
// probability 1 - noise and from shared pools otherwise. Topic labels are
// recorded so recovery can be checked exactly.
//
// A topic's word core splits into a handful of catchphrase words and a wide
// tail, and a small fraction of comments are catchphrase bursts (the
// commentator just yelling their phrases). Two random comments from one
// topic then share few words, while the burst comments sit meaningfully
// close to every member and become the cluster medoids. Shared-pool sprite
// draws land with a high count - background furniture tiles the screen - so
// the binomial tail of examples is dominated by shared sprites and blurs
// across topics, the way busy frames do. Both effects vanish at noise 0.
struct SynthConfig {
  int topics = 6;
  int train_n = 333;
  int test_n = 306;
  std::uint64_t seed = 0;
  double noise = 0.1;

  // Structure knobs.
  int sprite_core_size = 5;
  int shared_sprite_pool = 3;
  int shared_sprite_count = 3;   // count added per shared sprite draw
  int word_head_size = 4;        // catchphrase words per topic
  double word_head_prob = 0.18;  // chance a core word draw is a catchphrase
  double word_burst_prob = 0.06;  // chance a comment is all catchphrases
  int word_tail_size = 300;      // wide tail of the topic core
  int shared_word_pool = 40;
  int min_frames = 2;
  int max_frames = 4;
  int sprites_per_frame = 6;
  int min_words = 6;
  int max_words = 10;

  void validate() const {
    if (topics < 2) throw std::invalid_argument("synth: topics must be >= 2");
    if (train_n < 1 || test_n < 1)
      throw std::invalid_argument("synth: corpus sizes must be >= 1");
    if (topics > std::min(train_n, test_n))
      throw std::invalid_argument("synth: topics must be <= min(train_n, test_n)");
    if (noise < 0.0 || noise > 1.0)
      throw std::invalid_argument("synth: noise must be in [0, 1]");
    if (word_head_prob < 0.0 || word_head_prob > 1.0 || word_burst_prob < 0.0 ||
        word_burst_prob > 1.0)
      throw std::invalid_argument("synth: word probabilities must be in [0, 1]");
    if (sprite_core_size < 1 || shared_sprite_pool < 1 ||
        shared_sprite_count < 1 || word_head_size < 1 || word_tail_size < 1 ||
        shared_word_pool < 1 || min_frames < 1 || max_frames < min_frames ||
        sprites_per_frame < 1 || min_words < 1 || max_words < min_words)
      throw std::invalid_argument("synth: invalid structure parameters");
  }
};

namespace detail {

inline std::string synth_token(const char* prefix, int topic, int index) {
  // Tokens survive tokenize() unchanged: lowercase letters and digits only.
  return std::string(1, 't') + std::to_string(topic) + prefix +
         std::to_string(index);
}

inline std::string synth_shared_token(const char* prefix, int index) {
  return std::string("x") + prefix + std::to_string(index);
}

inline Corpus generate_one(const SynthConfig& cfg, std::string_view stream,
                           int n) {
  Rng rng(derive_seed(cfg.seed, stream));
  std::vector<RawExample> raws;
  raws.reserve(static_cast<std::size_t>(n));
  std::int64_t t_cursor = 0;

  for (int i = 0; i < n; ++i) {
    const int topic = static_cast<int>(rng.below(static_cast<std::uint64_t>(cfg.topics)));
    RawExample raw;
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%.2s%05d", stream.data(), i);
    raw.id = buf;
    raw.topic_label = "t" + std::to_string(topic);

    const int nframes =
        cfg.min_frames +
        static_cast<int>(rng.below(static_cast<std::uint64_t>(
            cfg.max_frames - cfg.min_frames + 1)));
    for (int f = 0; f < nframes; ++f) raw.frame_timestamps.push_back(t_cursor + f);
    t_cursor += nframes + 2;

    for (int f = 0; f < nframes; ++f) {
      for (int d = 0; d < cfg.sprites_per_frame; ++d) {
        if (rng.real01() < cfg.noise) {
          raw.sprite_counts[synth_shared_token(
              "s", static_cast<int>(rng.below(cfg.shared_sprite_pool)))] +=
              cfg.shared_sprite_count;
        } else {
          ++raw.sprite_counts[synth_token(
              "s", topic, static_cast<int>(rng.below(cfg.sprite_core_size)))];
        }
      }
    }

    const int nwords =
        cfg.min_words + static_cast<int>(rng.below(static_cast<std::uint64_t>(
                            cfg.max_words - cfg.min_words + 1)));
    const bool burst = rng.real01() < cfg.word_burst_prob;
    const double head_prob = burst ? 1.0 : cfg.word_head_prob;
    std::vector<std::string> words;
    words.reserve(static_cast<std::size_t>(nwords));
    for (int d = 0; d < nwords; ++d) {
      if (rng.real01() < cfg.noise) {
        words.push_back(synth_shared_token(
            "w", static_cast<int>(rng.below(cfg.shared_word_pool))));
      } else if (rng.real01() < head_prob) {
        words.push_back(synth_token(
            "h", topic, static_cast<int>(rng.below(cfg.word_head_size))));
      } else {
        words.push_back(synth_token(
            "w", topic, static_cast<int>(rng.below(cfg.word_tail_size))));
      }
    }
    raw.comment_text = join(words);
    raws.push_back(std::move(raw));
  }
  return finalize_corpus(raws);
}

}  // namespace detail

// Returns (train, test). Fully deterministic given the config; the two
// corpora consume independent derived streams so resizing one never perturbs
// the other.
inline std::pair<Corpus, Corpus> generate_synthetic_corpus(const SynthConfig& cfg) {
  cfg.validate();
  return {detail::generate_one(cfg, "train", cfg.train_n),
          detail::generate_one(cfg, "test", cfg.test_n)};
}

}  // namespace lpc

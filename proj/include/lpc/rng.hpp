#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "lpc/io_util.hpp"

namespace lpc {

// All randomness in the project flows from one explicit 64-bit seed.
//
// Streams are derived with splitmix64 (Steele et al., public-domain reference
// constants) and consumed through std::mt19937_64, whose output sequence is
// fixed by the C++ standard. The uniform mappings below are implemented by
// hand because the std::uniform_* distributions are not specified bit-for-bit
// across standard libraries; with these three pieces every draw is
// reproducible on any conforming platform.

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Derives an independent child seed from (base, stream index).
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t s = base;
  splitmix64_next(s);
  s ^= 0x9e3779b97f4a7c15ull * (stream + 0x632be59bd9b4e019ull);
  return splitmix64_next(s);
}

// Named sub-streams ("train", "cluster", ...) hash through FNV-1a first.
inline std::uint64_t derive_seed(std::uint64_t base, std::string_view label) {
  return derive_seed(base, fnv1a64(label));
}

inline std::uint64_t derive_seed(std::uint64_t base, std::string_view label,
                                 std::uint64_t stream) {
  return derive_seed(derive_seed(base, label), stream);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // Unbiased integer in [0, n) via rejection sampling.
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("Rng::below: n must be positive");
    const std::uint64_t threshold = (0 - n) % n;  // 2^64 mod n
    for (;;) {
      std::uint64_t r = gen_();
      if (r >= threshold) return r % n;
    }
  }

  // Uniform double in [0, 1) with 53 bits of precision.
  double real01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  // k distinct values from [0, n), ascending order not guaranteed.
  // Partial Fisher-Yates over an index vector.
  std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k) {
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    if (k > n) k = n;
    for (std::size_t i = 0; i < k; ++i) {
      std::size_t j = i + static_cast<std::size_t>(below(n - i));
      std::swap(idx[i], idx[j]);
    }
    idx.resize(k);
    return idx;
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace lpc

#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace wdd {

/// A stream element: an unsigned integer in [0, 2^gamma_bits).
using Element = std::uint64_t;

/// Widest supported alphabet, in bits. Elements are 64-bit machine
/// integers, so alphabets beyond 2^62 are rejected.
inline constexpr unsigned kMaxGammaBits = 62;

enum class Decision : std::uint8_t { Unseen = 0, Duplicate = 1 };

/// splitmix64 finalizer. Bit-exact on every platform; used both as the
/// stream generator's state transition and as the element hash mixer.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

/// Seeded 64-bit avalanche hash of an element. Independent hash functions
/// are derived by mixing distinct per-function seeds.
constexpr std::uint64_t hash_element(Element e, std::uint64_t seed) noexcept {
  return mix64(e ^ mix64(seed));
}

/// Maps a 64-bit hash to [0, 1). 53 bits of precision.
constexpr double to_unit(std::uint64_t h) noexcept {
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

/// Minimal deterministic generator (splitmix64 sequence).
class Rng {
 public:
  explicit constexpr Rng(std::uint64_t seed) noexcept : state_(seed) {}

  constexpr std::uint64_t next() noexcept {
    state_ += 0x9e3779b97f4a7c15ull;
    std::uint64_t x = state_;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
  }

  /// Uniform integer in [0, n). n must be nonzero.
  constexpr std::uint64_t next_below(std::uint64_t n) noexcept {
    // 128-bit multiply keeps the modulo bias below 2^-64.
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next()) * n) >> 64);
  }

  constexpr double unit() noexcept { return to_unit(next()); }

 private:
  std::uint64_t state_;
};

/// Derives an independent child seed from a master seed and an index.
constexpr std::uint64_t derive_seed(std::uint64_t master,
                                    std::uint64_t index) noexcept {
  return mix64(master ^ mix64(index + 0x51ed2701));
}

struct StreamConfig {
  std::uint64_t seed = 0;
  std::uint64_t length = 0;
  unsigned gamma_bits = 0;
};

inline void validate_gamma_bits(unsigned b) {
  if (b < 1 || b > kMaxGammaBits)
    throw std::invalid_argument("gamma_bits must be in [1, " +
                                std::to_string(kMaxGammaBits) + "], got " +
                                std::to_string(b));
}

/// N i.i.d. uniform elements over [0, 2^gamma_bits). Deterministic in the
/// seed, identical on all platforms.
inline std::vector<Element> gen_stream(const StreamConfig& cfg) {
  validate_gamma_bits(cfg.gamma_bits);
  const std::uint64_t mask = (std::uint64_t{1} << cfg.gamma_bits) - 1;
  std::vector<Element> out;
  out.reserve(cfg.length);
  Rng rng(cfg.seed);
  for (std::uint64_t i = 0; i < cfg.length; ++i) out.push_back(rng.next() & mask);
  return out;
}

/// Uniform stream with planted duplicates: each position, with probability
/// dup_rate, copies the element at a lag drawn uniformly from [1, min(i, w)].
/// Large alphabets produce essentially no duplicates on their own; this is
/// the harness used to exercise false-negative paths there.
inline std::vector<Element> gen_planted_stream(const StreamConfig& cfg,
                                               std::uint64_t window,
                                               double dup_rate) {
  validate_gamma_bits(cfg.gamma_bits);
  if (window < 1) throw std::invalid_argument("window must be >= 1");
  if (dup_rate < 0.0 || dup_rate > 1.0)
    throw std::invalid_argument("dup_rate must be in [0, 1]");
  const std::uint64_t mask = (std::uint64_t{1} << cfg.gamma_bits) - 1;
  std::vector<Element> out;
  out.reserve(cfg.length);
  Rng rng(cfg.seed);
  for (std::uint64_t i = 0; i < cfg.length; ++i) {
    if (i > 0 && rng.unit() < dup_rate) {
      const std::uint64_t span = std::min<std::uint64_t>(i, window);
      const std::uint64_t lag = 1 + rng.next_below(span);
      out.push_back(out[i - lag]);
    } else {
      out.push_back(rng.next() & mask);
    }
  }
  return out;
}

}  // namespace wdd

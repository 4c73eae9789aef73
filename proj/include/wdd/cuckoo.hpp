#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "wdd/filter.hpp"

namespace wdd {

/// Cuckoo filter with one 3-bit entry per bucket and partial-key
/// displacement: the alternate bucket is index XOR hash(fingerprint). The
/// bucket count is the largest power of two fitting the budget. Inserts
/// that still collide after max_kicks displacements drop the displaced
/// fingerprint; saturation streams overfill the table by design, so
/// overflow is not an error.
class CuckooFilter final : public DuplicateFilter {
 public:
  static constexpr unsigned kFingerprintBits = 3;
  static constexpr unsigned kDefaultMaxKicks = 500;

  CuckooFilter(std::uint64_t memory_bits, std::uint64_t seed,
               unsigned max_kicks = kDefaultMaxKicks)
      : max_kicks_(max_kicks),
        bucket_seed_(derive_seed(seed, 0)),
        fp_seed_(derive_seed(seed, 1)),
        kick_rng_(derive_seed(seed, 2)) {
    const std::uint64_t max_buckets = memory_bits / kFingerprintBits;
    if (max_buckets < 1) throw std::invalid_argument("insufficient memory");
    buckets_ = std::uint64_t{1} << (std::bit_width(max_buckets) - 1);
    mask_ = buckets_ - 1;
    slots_.assign(buckets_, 0);
  }

  Decision lookup(Element e) const override {
    const std::uint8_t f = fingerprint(e);
    const std::uint64_t i1 = index1(e);
    const std::uint64_t i2 = alt_index(i1, f);
    return (slots_[i1] == f || slots_[i2] == f) ? Decision::Duplicate
                                                : Decision::Unseen;
  }

  void insert(Element e) override {
    std::uint8_t f = fingerprint(e);
    const std::uint64_t i1 = index1(e);
    const std::uint64_t i2 = alt_index(i1, f);
    if (slots_[i1] == f || slots_[i2] == f) return;
    if (slots_[i1] == 0) {
      slots_[i1] = f;
      return;
    }
    if (slots_[i2] == 0) {
      slots_[i2] = f;
      return;
    }
    std::uint64_t i = kick_rng_.next_below(2) ? i2 : i1;
    for (unsigned kick = 0; kick < max_kicks_; ++kick) {
      std::swap(f, slots_[i]);
      i = alt_index(i, f);
      if (slots_[i] == 0) {
        slots_[i] = f;
        return;
      }
    }
    ++dropped_;  // displaced fingerprint is discarded
  }

  std::uint64_t memory_bits() const override {
    return buckets_ * kFingerprintBits;
  }

  std::uint64_t num_buckets() const { return buckets_; }
  std::uint64_t dropped() const { return dropped_; }
  std::uint64_t occupancy() const {
    std::uint64_t n = 0;
    for (const auto s : slots_) n += s != 0;
    return n;
  }

  std::uint8_t fingerprint(Element e) const {
    return static_cast<std::uint8_t>(1 + hash_element(e, fp_seed_) % 7);
  }
  std::uint64_t index1(Element e) const {
    return hash_element(e, bucket_seed_) & mask_;
  }
  std::uint64_t alt_index(std::uint64_t index, std::uint8_t f) const {
    return (index ^ hash_element(f, fp_seed_ + 1)) & mask_;
  }

 private:
  unsigned max_kicks_;
  std::uint64_t bucket_seed_;
  std::uint64_t fp_seed_;
  Rng kick_rng_;
  std::uint64_t buckets_ = 0;
  std::uint64_t mask_ = 0;
  std::uint64_t dropped_ = 0;
  std::vector<std::uint8_t> slots_;
};

}  // namespace wdd

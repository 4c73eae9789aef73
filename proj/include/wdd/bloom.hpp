#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "wdd/filter.hpp"

namespace wdd {

/// Plain Bloom filter over M bit cells with K hash functions. No deletion;
/// mainly of interest as a queuing subfilter (a queue of two Bloom
/// subfilters reconstructs the classic two-generation design).
class BloomFilter final : public DuplicateFilter {
 public:
  BloomFilter(std::uint64_t memory_bits, std::uint64_t seed,
              unsigned num_hashes = 4)
      : num_hashes_(num_hashes), bits_(memory_bits, false),
        hash_seed_(derive_seed(seed, 0)) {
    if (memory_bits < 1) throw std::invalid_argument("insufficient memory");
    if (num_hashes_ < 1) throw std::invalid_argument("num_hashes must be >= 1");
  }

  Decision lookup(Element e) const override {
    for (unsigned k = 0; k < num_hashes_; ++k)
      if (!bits_[bit_index(e, k)]) return Decision::Unseen;
    return Decision::Duplicate;
  }

  void insert(Element e) override {
    for (unsigned k = 0; k < num_hashes_; ++k) bits_[bit_index(e, k)] = true;
  }

  std::uint64_t memory_bits() const override { return bits_.size(); }

  std::uint64_t bit_index(Element e, unsigned k) const {
    return hash_element(e, hash_seed_ + k) % bits_.size();
  }

 private:
  unsigned num_hashes_;
  std::vector<bool> bits_;
  std::uint64_t hash_seed_;
};

}  // namespace wdd

#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "wdd/filter.hpp"

namespace wdd {

/// Stable Bloom filter: floor(M/d) cells of d bits. Lookup reports
/// DUPLICATE when all K cells of the element are nonzero. Each insert
/// first decrements `decrements` cells chosen uniformly without
/// replacement (floored at zero), then sets the element's K cells to the
/// maximum value; the decrement pressure is what keeps the structure from
/// silting up.
class StableBloomFilter final : public DuplicateFilter {
 public:
  StableBloomFilter(std::uint64_t memory_bits, std::uint64_t seed,
                    std::uint64_t decrements, unsigned cell_bits = 2,
                    unsigned num_hashes = 2)
      : cell_bits_(cell_bits),
        num_hashes_(num_hashes),
        cell_max_((1u << cell_bits) - 1),
        cells_(memory_bits / cell_bits, 0),
        decrements_(decrements),
        hash_seed_(derive_seed(seed, 0)),
        decrement_rng_(derive_seed(seed, 1)) {
    if (cell_bits_ < 1 || cell_bits_ > 8)
      throw std::invalid_argument("cell_bits must be in [1, 8]");
    if (num_hashes_ < 1) throw std::invalid_argument("num_hashes must be >= 1");
    if (cells_.empty()) throw std::invalid_argument("insufficient memory");
    if (decrements_ > cells_.size()) decrements_ = cells_.size();
  }

  Decision lookup(Element e) const override {
    for (unsigned k = 0; k < num_hashes_; ++k)
      if (cells_[cell_index(e, k)] == 0) return Decision::Unseen;
    return Decision::Duplicate;
  }

  void insert(Element e) override {
    // Floyd's sampling of `decrements` distinct cells.
    const std::uint64_t m = cells_.size();
    scratch_.clear();
    for (std::uint64_t j = m - decrements_; j < m; ++j) {
      std::uint64_t t = decrement_rng_.next_below(j + 1);
      for (std::uint64_t prev : scratch_)
        if (prev == t) {
          t = j;
          break;
        }
      scratch_.push_back(t);
      if (cells_[t] > 0) --cells_[t];
    }
    for (unsigned k = 0; k < num_hashes_; ++k)
      cells_[cell_index(e, k)] = static_cast<std::uint8_t>(cell_max_);
  }

  std::uint64_t memory_bits() const override {
    return cells_.size() * cell_bits_;
  }

  std::uint64_t cell_index(Element e, unsigned k) const {
    return hash_element(e, hash_seed_ + k) % cells_.size();
  }
  std::uint64_t num_cells() const { return cells_.size(); }
  std::uint64_t decrements() const { return decrements_; }

  /// Picks the decrement count whose stationary false positive rate on
  /// fresh elements is closest to `target_fpr`, by short deterministic
  /// simulation. The FPR is monotone decreasing in the decrement count, so
  /// bisection over [1, 8 * num_hashes * cell_max] suffices.
  static std::uint64_t calibrate_decrements(std::uint64_t memory_bits,
                                            double target_fpr,
                                            std::uint64_t seed,
                                            unsigned cell_bits = 2,
                                            unsigned num_hashes = 2) {
    std::uint64_t lo = 1;
    std::uint64_t hi = 8ull * num_hashes * ((1u << cell_bits) - 1);
    auto stationary_fpr = [&](std::uint64_t p) {
      StableBloomFilter f(memory_bits, seed, p, cell_bits, num_hashes);
      const std::uint64_t m = f.num_cells();
      Rng rng(derive_seed(seed, 99));
      for (std::uint64_t i = 0; i < 8 * m; ++i) f.insert(rng.next());
      std::uint64_t hits = 0;
      const std::uint64_t probes = 4 * m + 4000;
      for (std::uint64_t i = 0; i < probes; ++i) {
        if (f.lookup(rng.next()) == Decision::Duplicate) ++hits;
        f.insert(rng.next());
      }
      return double(hits) / double(probes);
    };
    if (stationary_fpr(lo) <= target_fpr) return lo;
    while (hi - lo > 1) {
      const std::uint64_t mid = lo + (hi - lo) / 2;
      if (stationary_fpr(mid) <= target_fpr)
        hi = mid;
      else
        lo = mid;
    }
    const double flo = stationary_fpr(lo), fhi = stationary_fpr(hi);
    return (flo - target_fpr) <= (target_fpr - fhi) ? lo : hi;
  }

 private:
  unsigned cell_bits_;
  unsigned num_hashes_;
  unsigned cell_max_;
  std::vector<std::uint8_t> cells_;
  std::uint64_t decrements_;
  std::uint64_t hash_seed_;
  Rng decrement_rng_;
  std::vector<std::uint64_t> scratch_;
};

}  // namespace wdd

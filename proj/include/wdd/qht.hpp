#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "wdd/filter.hpp"

namespace wdd {

/// Quotient-hash-table style filter: floor(M/3) rows of one 3-bit cell.
/// A cell holds a fingerprint in [1, 7]; 0 means empty. Lookup reports
/// DUPLICATE when the element's row already holds its fingerprint; insert
/// overwrites the row unconditionally.
class QhtFilter final : public DuplicateFilter {
 public:
  static constexpr unsigned kFingerprintBits = 3;

  QhtFilter(std::uint64_t memory_bits, std::uint64_t seed)
      : rows_(memory_bits / kFingerprintBits),
        row_seed_(derive_seed(seed, 0)),
        fp_seed_(derive_seed(seed, 1)) {
    if (rows_ < 1) throw std::invalid_argument("insufficient memory");
    cells_.assign(rows_, 0);
  }

  Decision lookup(Element e) const override {
    return cells_[row(e)] == fingerprint(e) ? Decision::Duplicate
                                            : Decision::Unseen;
  }

  void insert(Element e) override { cells_[row(e)] = fingerprint(e); }

  std::uint64_t memory_bits() const override {
    return rows_ * kFingerprintBits;
  }

  std::uint64_t rows() const { return rows_; }
  std::uint64_t row(Element e) const {
    return hash_element(e, row_seed_) % rows_;
  }
  std::uint8_t fingerprint(Element e) const {
    return static_cast<std::uint8_t>(1 + hash_element(e, fp_seed_) % 7);
  }

 private:
  std::uint64_t rows_;
  std::uint64_t row_seed_;
  std::uint64_t fp_seed_;
  std::vector<std::uint8_t> cells_;
};

}  // namespace wdd

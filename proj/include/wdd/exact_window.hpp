#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <deque>
#include <unordered_map>

#include "wdd/filter.hpp"

namespace wdd {

/// Width of a counter encoding a multiplicity in [1, w]. The value is
/// stored offset by one, so w distinct states suffice (0 bits when w = 1).
constexpr unsigned multiplicity_bits(std::uint64_t w) noexcept {
  return w <= 1 ? 0 : std::bit_width(w - 1);
}

/// Sufficient memory, in bits, for zero-error windowed detection:
/// w * (log2 w + 2 * gamma_bits).
inline double exact_memory_bound(std::uint64_t w, unsigned gamma_bits) {
  return static_cast<double>(w) *
         (std::log2(static_cast<double>(w)) + 2.0 * gamma_bits);
}

/// Zero-error sliding-window filter: a FIFO of the last w elements plus a
/// counting map. lookup answers DUPLICATE exactly when the element occurs
/// among the last w insertions. Doubles as the ground-truth oracle for
/// every experiment in this library.
class ExactWindowFilter final : public DuplicateFilter {
 public:
  ExactWindowFilter(std::uint64_t window, unsigned gamma_bits)
      : window_(window), gamma_bits_(gamma_bits) {
    if (window_ < 1) throw std::invalid_argument("window must be >= 1");
    validate_gamma_bits(gamma_bits_);
  }

  Decision lookup(Element e) const override {
    return counts_.contains(e) ? Decision::Duplicate : Decision::Unseen;
  }

  void insert(Element e) override {
    queue_.push_back(e);
    ++counts_[e];
    if (queue_.size() > window_) {
      const Element oldest = queue_.front();
      queue_.pop_front();
      auto it = counts_.find(oldest);
      if (--it->second == 0) counts_.erase(it);
    }
  }

  /// Queue entries at gamma_bits each; map keys at gamma_bits plus an
  /// offset-encoded multiplicity counter.
  std::uint64_t memory_bits() const override {
    return queue_.size() * gamma_bits_ +
           counts_.size() * (gamma_bits_ + multiplicity_bits(window_));
  }

  std::uint64_t window() const { return window_; }
  std::uint64_t size() const { return queue_.size(); }

 private:
  std::uint64_t window_;
  unsigned gamma_bits_;
  std::deque<Element> queue_;
  std::unordered_map<Element, std::uint32_t> counts_;
};

}  // namespace wdd

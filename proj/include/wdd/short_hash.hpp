#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <deque>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "wdd/filter.hpp"

namespace wdd {

enum class ShortHashKind { Shf, Cshf };

/// Real-valued fingerprint width of an SHF: M/(2w) - log2(w)/2 bits.
inline double shf_fingerprint_bits(double memory_bits, double window) {
  return memory_bits / (2.0 * window) - 0.5 * std::log2(window);
}

/// Short Hash Filter: a queue of the last w element fingerprints plus a
/// counting map over them, so lookup and insert run in constant time.
/// Never produces a false negative; false positives are fingerprint
/// collisions inside the window.
///
/// Fingerprints are element hashes reduced modulo a codomain of size
/// floor(2^(M/(2w) - log2(w)/2)). Keeping the codomain at that real-valued
/// size (rather than flooring the bit width) makes the realized collision
/// rate track the closed-form predictor; each stored fingerprint is
/// accounted at ceil(log2 codomain) bits, which keeps the state within
/// M + 3w bits.
class ShfFilter final : public DuplicateFilter {
 public:
  ShfFilter(std::uint64_t memory_bits, std::uint64_t window,
            std::uint64_t hash_seed)
      : window_(window), hash_seed_(hash_seed) {
    if (window_ < 1) throw std::invalid_argument("window must be >= 1");
    const double h = shf_fingerprint_bits(double(memory_bits), double(window));
    if (h < 1.0)
      throw std::invalid_argument("insufficient memory for window");
    codomain_ = static_cast<std::uint64_t>(
        std::floor(std::exp2(std::min(h, 62.0))));
    store_bits_ = std::bit_width(codomain_ - 1);
  }

  Decision lookup(Element e) const override {
    return counts_.contains(fingerprint(e)) ? Decision::Duplicate
                                            : Decision::Unseen;
  }

  void insert(Element e) override {
    const std::uint64_t f = fingerprint(e);
    queue_.push_back(f);
    ++counts_[f];
    if (queue_.size() > window_) {
      const std::uint64_t oldest = queue_.front();
      queue_.pop_front();
      auto it = counts_.find(oldest);
      if (--it->second == 0) counts_.erase(it);
    }
  }

  std::uint64_t memory_bits() const override {
    return queue_.size() * store_bits_ +
           counts_.size() * (store_bits_ + multiplicity_bits(window_));
  }

  std::uint64_t fingerprint(Element e) const {
    return hash_element(e, hash_seed_) % codomain_;
  }

  std::uint64_t window() const { return window_; }
  std::uint64_t size() const { return queue_.size(); }
  std::uint64_t codomain() const { return codomain_; }
  std::uint64_t distinct_fingerprints() const { return counts_.size(); }

 private:
  std::uint64_t window_;
  std::uint64_t hash_seed_;
  std::uint64_t codomain_ = 0;
  unsigned store_bits_ = 0;
  std::deque<std::uint64_t> queue_;
  std::unordered_map<std::uint64_t, std::uint32_t> counts_;
};

/// Compact Short Hash Filter: a plain ring of w fingerprints of
/// floor(M/w) bits each. Lookup is a linear scan; no false negatives.
class CshfFilter final : public DuplicateFilter {
 public:
  CshfFilter(std::uint64_t memory_bits, std::uint64_t window,
             std::uint64_t hash_seed)
      : window_(window), hash_seed_(hash_seed) {
    if (window_ < 1) throw std::invalid_argument("window must be >= 1");
    fingerprint_bits_ = static_cast<unsigned>(
        std::min<std::uint64_t>(memory_bits / window_, 62));
    if (fingerprint_bits_ < 1)
      throw std::invalid_argument("insufficient memory for window");
    ring_.resize(window_);
  }

  Decision lookup(Element e) const override {
    const std::uint64_t f = fingerprint(e);
    const std::uint64_t n = std::min<std::uint64_t>(filled_, window_);
    for (std::uint64_t i = 0; i < n; ++i)
      if (ring_[i] == f) return Decision::Duplicate;
    return Decision::Unseen;
  }

  void insert(Element e) override {
    ring_[pos_] = fingerprint(e);
    pos_ = (pos_ + 1) % window_;
    if (filled_ < window_) ++filled_;
  }

  std::uint64_t memory_bits() const override {
    return window_ * fingerprint_bits_;
  }

  std::uint64_t fingerprint(Element e) const {
    return hash_element(e, hash_seed_) >> (64 - fingerprint_bits_);
  }

  std::uint64_t window() const { return window_; }
  unsigned fingerprint_width() const { return fingerprint_bits_; }

 private:
  std::uint64_t window_;
  std::uint64_t hash_seed_;
  unsigned fingerprint_bits_ = 0;
  std::vector<std::uint64_t> ring_;
  std::uint64_t pos_ = 0;
  std::uint64_t filled_ = 0;
};

/// Closed-form false positive probability of a full filter, with
/// real-valued exponents (no flooring of fingerprint widths):
///   SHF:  1 - (1 - sqrt(w * 2^(-M/w)))^w
///   CSHF: 1 - (1 - 2^(-M/w))^w
/// When the SHF collision term exceeds 1 the result is clamped to 1 and
/// *clamped is set.
inline double fp_theory(ShortHashKind kind, double memory_bits, double window,
                        bool* clamped = nullptr) {
  if (clamped) *clamped = false;
  if (memory_bits < 1.0 || window < 1.0)
    throw std::invalid_argument("memory_bits and window must be >= 1");
  double collision;  // per-pair fingerprint collision probability
  switch (kind) {
    case ShortHashKind::Shf:
      collision = std::sqrt(window * std::exp2(-memory_bits / window));
      break;
    case ShortHashKind::Cshf:
      collision = std::exp2(-memory_bits / window);
      break;
  }
  if (collision >= 1.0) {
    if (clamped) *clamped = true;
    return 1.0;
  }
  return -std::expm1(window * std::log1p(-collision));
}

/// Smallest integer window at which fp_theory crosses the target (default
/// 1/2): the filter's maximal usable window for a memory budget. fp_theory
/// is monotone increasing in w over the operating range, so bisection.
inline std::uint64_t wmax_solve(ShortHashKind kind, double memory_bits,
                                double target = 0.5) {
  if (memory_bits < 100.0)
    throw std::invalid_argument("memory_bits must be >= 100");
  std::uint64_t lo = 1;  // fp(lo) < target
  std::uint64_t hi = static_cast<std::uint64_t>(memory_bits);
  if (fp_theory(kind, memory_bits, double(lo)) >= target) return lo;
  while (hi - lo > 1) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    if (fp_theory(kind, memory_bits, double(mid)) >= target)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

}  // namespace wdd

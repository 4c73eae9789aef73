#pragma once

#include <cstdint>
#include <stdexcept>
#include <unordered_set>

#include "wdd/filter.hpp"

namespace wdd {

/// Calibrated reference subfilter: exact memory of its own insertions plus
/// two error coins. An absent element is reported DUPLICATE with
/// probability exactly p_fp; a present element is reported UNSEEN with
/// probability exactly p_fn, independent of fill level. The coin for an
/// element is a deterministic function of (element, coin seed, insertion
/// count), so lookup stays side-effect free and repeatable between
/// inserts while successive queries of fresh elements draw independent
/// coins.
class SyntheticFilter final : public DuplicateFilter {
 public:
  SyntheticFilter(double p_fp, double p_fn, std::uint64_t coin_seed,
                  unsigned gamma_bits = kMaxGammaBits)
      : p_fp_(p_fp), p_fn_(p_fn), coin_seed_(coin_seed),
        gamma_bits_(gamma_bits) {
    if (p_fp_ < 0.0 || p_fp_ > 1.0 || p_fn_ < 0.0 || p_fn_ > 1.0)
      throw std::invalid_argument("error probabilities must be in [0, 1]");
  }

  Decision lookup(Element e) const override {
    const double u = to_unit(hash_element(e, coin_seed_ ^ mix64(inserted_)));
    if (seen_.contains(e))
      return u < p_fn_ ? Decision::Unseen : Decision::Duplicate;
    return u < p_fp_ ? Decision::Duplicate : Decision::Unseen;
  }

  void insert(Element e) override {
    seen_.insert(e);
    ++inserted_;
  }

  std::uint64_t memory_bits() const override {
    return seen_.size() * gamma_bits_;
  }

  double p_fp() const { return p_fp_; }
  double p_fn() const { return p_fn_; }
  std::uint64_t inserted() const { return inserted_; }

 private:
  double p_fp_;
  double p_fn_;
  std::uint64_t coin_seed_;
  unsigned gamma_bits_;
  std::unordered_set<Element> seen_;
  std::uint64_t inserted_ = 0;
};

}  // namespace wdd

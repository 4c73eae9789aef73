#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <unordered_set>
#include <vector>

#include "wdd/exact_window.hpp"
#include "wdd/filter.hpp"

namespace wdd {

/// Builds a fresh subfilter for a given generation index. Generations let
/// the factory vary coin/hash seeds so successive subfilters behave
/// independently.
using SubfilterFactory =
    std::function<std::unique_ptr<DuplicateFilter>(std::uint64_t generation)>;

/// Sliding-window construction over any duplicate-detection filter: a FIFO
/// of L subfilters, each accepting c insertions. Lookup reports DUPLICATE
/// iff at least one subfilter does; after every c-th insertion the oldest
/// subfilter is destroyed and a fresh one is pushed at the front. The
/// construction realizes a window of roughly c*L insertions.
class QueuingFilter final : public DuplicateFilter {
 public:
  QueuingFilter(SubfilterFactory factory, std::uint64_t num_subfilters,
                std::uint64_t capacity)
      : factory_(std::move(factory)),
        num_subfilters_(num_subfilters),
        capacity_(capacity) {
    if (num_subfilters_ < 1)
      throw std::invalid_argument("need at least one subfilter");
    if (capacity_ < 1) throw std::invalid_argument("capacity must be >= 1");
    for (std::uint64_t i = 0; i < num_subfilters_; ++i)
      subfilters_.push_front(factory_(next_generation_++));
  }

  /// Convenience: capacity floor(w / L), so the realized window c*L never
  /// exceeds the target.
  static QueuingFilter for_window(SubfilterFactory factory,
                                  std::uint64_t num_subfilters,
                                  std::uint64_t window) {
    if (window / num_subfilters < 1)
      throw std::invalid_argument("window smaller than subfilter count");
    return QueuingFilter(std::move(factory), num_subfilters,
                         window / num_subfilters);
  }

  Decision lookup(Element e) const override {
    for (const auto& sub : subfilters_)
      if (sub->lookup(e) == Decision::Duplicate) return Decision::Duplicate;
    return Decision::Unseen;
  }

  void insert(Element e) override {
    subfilters_.front()->insert(e);
    if (++counter_ == capacity_) {
      subfilters_.pop_back();
      subfilters_.push_front(factory_(next_generation_++));
      counter_ = 0;
    }
  }

  std::uint64_t memory_bits() const override {
    std::uint64_t total = 0;
    for (const auto& sub : subfilters_) total += sub->memory_bits();
    return total;
  }

  std::uint64_t num_subfilters() const { return num_subfilters_; }
  std::uint64_t capacity() const { return capacity_; }
  /// Insertions into the front subfilter since the last rotation.
  std::uint64_t phase() const { return counter_; }
  std::uint64_t generations() const { return next_generation_; }
  const DuplicateFilter& subfilter(std::uint64_t i) const {
    return *subfilters_[i];
  }

 private:
  SubfilterFactory factory_;
  std::uint64_t num_subfilters_;
  std::uint64_t capacity_;
  std::uint64_t counter_ = 0;
  std::uint64_t next_generation_ = 0;
  std::deque<std::unique_ptr<DuplicateFilter>> subfilters_;
};

// ---------------------------------------------------------------------------
// Closed-form predictors.

/// Error probabilities of a subfilter as a function of how many insertions
/// it has absorbed.
struct SubfilterErrorProfile {
  std::function<double(std::uint64_t)> fp_after;
  std::function<double(std::uint64_t)> fn_after;
};

inline SubfilterErrorProfile constant_profile(double p_fp, double p_fn) {
  return {[p_fp](std::uint64_t) { return p_fp; },
          [p_fn](std::uint64_t) { return p_fn; }};
}

inline SubfilterErrorProfile exact_profile() { return constant_profile(0, 0); }

/// Probability that a window duplicate's prior occurrence falls inside a
/// sub-window of eta insertions:
///   p_eta = (1 - (1 - 1/|Gamma|)^eta) / (1 - (1 - 1/|Gamma|)^w),
/// or eta / w in the infinite-alphabet limit (gamma_bits absent).
inline double window_hit_prob(std::uint64_t eta, std::uint64_t window,
                              std::optional<unsigned> gamma_bits) {
  if (eta >= window) return 1.0;
  if (!gamma_bits) return double(eta) / double(window);
  const double log_q = std::log1p(-std::exp2(-double(*gamma_bits)));
  return std::expm1(double(eta) * log_q) / std::expm1(double(window) * log_q);
}

/// u_eta = p_eta * FN_eta + (1 - p_eta) * (1 - FP_eta): the probability a
/// subfilter with eta insertions answers UNSEEN for a window duplicate.
inline double unseen_weight(const SubfilterErrorProfile& profile,
                            std::uint64_t eta, std::uint64_t window,
                            std::optional<unsigned> gamma_bits) {
  const double p = window_hit_prob(eta, window, gamma_bits);
  return p * profile.fn_after(eta) + (1.0 - p) * (1.0 - profile.fp_after(eta));
}

/// Steady-state false positive probability of the queue at phase m mod c:
///   1 - (1 - FP_c)^(L-1) * (1 - FP_{m mod c}).
inline double predict_fp(const SubfilterErrorProfile& profile, std::uint64_t L,
                         std::uint64_t c, std::uint64_t m_mod_c) {
  if (L < 1 || m_mod_c >= c) throw std::invalid_argument("bad queue shape");
  return 1.0 - std::pow(1.0 - profile.fp_after(c), double(L - 1)) *
                   (1.0 - profile.fp_after(m_mod_c));
}

/// Steady-state false negative probability at phase m mod c:
///   u_c^(L-1) * u_{m mod c}, with w = c*L.
///
/// Caveat: the product treats the subfilters' miss events as independent,
/// but for a duplicate with a single prior occurrence the sub-window
/// memberships are mutually exclusive, so this closed form overestimates
/// the realized miss rate (simulation shows e.g. 0.28 realized vs 0.40
/// predicted for exact subfilters with L=2, c=5). It is kept as the
/// canonical analytic predictor; measure when accuracy matters.
inline double predict_fn(const SubfilterErrorProfile& profile, std::uint64_t L,
                         std::uint64_t c, std::uint64_t m_mod_c,
                         std::uint64_t window,
                         std::optional<unsigned> gamma_bits) {
  if (L < 1 || m_mod_c >= c) throw std::invalid_argument("bad queue shape");
  return std::pow(unseen_weight(profile, c, window, gamma_bits),
                  double(L - 1)) *
         unseen_weight(profile, m_mod_c, window, gamma_bits);
}

/// Phase-averaged false positive rate:
///   1 - (1 - FP_c)^(L-1) / c * sum_{l=0}^{c-1} (1 - FP_l).
inline double predict_fpr(const SubfilterErrorProfile& profile, std::uint64_t L,
                          std::uint64_t c) {
  if (L < 1 || c < 1) throw std::invalid_argument("bad queue shape");
  double sum = 0.0;
  for (std::uint64_t l = 0; l < c; ++l) sum += 1.0 - profile.fp_after(l);
  return 1.0 -
         std::pow(1.0 - profile.fp_after(c), double(L - 1)) * sum / double(c);
}

/// Phase-averaged false negative rate:
///   u_c^(L-1) / c * sum_{l=0}^{c-1} u_l.
inline double predict_fnr(const SubfilterErrorProfile& profile, std::uint64_t L,
                          std::uint64_t c, std::uint64_t window,
                          std::optional<unsigned> gamma_bits) {
  if (L < 1 || c < 1) throw std::invalid_argument("bad queue shape");
  double sum = 0.0;
  for (std::uint64_t l = 0; l < c; ++l)
    sum += unseen_weight(profile, l, window, gamma_bits);
  return std::pow(unseen_weight(profile, c, window, gamma_bits),
                  double(L - 1)) *
         sum / double(c);
}

/// Picks the subfilter count minimizing predicted FPR + FNR by exhaustive
/// integer evaluation over the candidates; ties go to the smaller L. A
/// candidate is feasible when c = floor(w/L) >= 1 and the per-subfilter
/// budget floor(M/L) meets the subfilter's minimum.
inline std::uint64_t optimize_L(
    const std::function<SubfilterErrorProfile(std::uint64_t)>& profile_family,
    std::uint64_t memory_bits, std::uint64_t window,
    std::optional<unsigned> gamma_bits,
    std::span<const std::uint64_t> candidates,
    std::uint64_t min_subfilter_bits = 1) {
  std::uint64_t best_L = 0;
  double best_er = 0.0;
  for (const std::uint64_t L : candidates) {
    if (L < 1) continue;
    const std::uint64_t c = window / L;
    if (c < 1 || memory_bits / L < min_subfilter_bits) continue;
    const auto profile = profile_family(L);
    const double er = predict_fpr(profile, L, c) +
                      predict_fnr(profile, L, c, window, gamma_bits);
    if (best_L == 0 || er < best_er - 1e-15 ||
        (er < best_er + 1e-15 && L < best_L)) {
      best_L = L;
      best_er = er;
    }
  }
  if (best_L == 0) throw std::invalid_argument("no feasible subfilter count");
  return best_L;
}

/// Empirical profile of a bare subfilter: runs `trials` fresh instances
/// against fresh uniform streams, probing false positive and false
/// negative frequencies at bucketed insertion counts in [0, c]. Queries
/// are lookups only, so probing does not perturb the subfilter.
inline SubfilterErrorProfile measure_profile(const SubfilterFactory& factory,
                                             std::uint64_t c,
                                             unsigned gamma_bits,
                                             std::uint64_t seed,
                                             std::uint64_t trials = 8,
                                             std::uint64_t probes = 64) {
  const std::uint64_t bucket = std::max<std::uint64_t>(1, c / 32);
  const std::uint64_t num_points = c / bucket + 1;
  std::vector<double> fp_hits(num_points, 0.0), fp_tries(num_points, 0.0);
  std::vector<double> fn_hits(num_points, 0.0), fn_tries(num_points, 0.0);
  const std::uint64_t mask = (std::uint64_t{1} << gamma_bits) - 1;
  for (std::uint64_t t = 0; t < trials; ++t) {
    auto sub = factory(t);
    Rng rng(derive_seed(seed, t));
    std::vector<Element> inserted;
    std::unordered_set<Element> inserted_set;
    inserted.reserve(c);
    for (std::uint64_t point = 0; point < num_points; ++point) {
      for (std::uint64_t i = 0; i < probes; ++i) {
        const Element fresh = rng.next() & mask;
        // Counts as a false positive probe unless accidentally inserted.
        if (!inserted_set.contains(fresh)) {
          fp_tries[point] += 1.0;
          if (sub->lookup(fresh) == Decision::Duplicate) fp_hits[point] += 1.0;
        }
        if (!inserted.empty()) {
          const Element old = inserted[rng.next_below(inserted.size())];
          fn_tries[point] += 1.0;
          if (sub->lookup(old) == Decision::Unseen) fn_hits[point] += 1.0;
        }
      }
      if (point + 1 < num_points)
        for (std::uint64_t i = 0; i < bucket; ++i) {
          const Element e = rng.next() & mask;
          sub->insert(e);
          inserted.push_back(e);
          inserted_set.insert(e);
        }
    }
  }
  auto table = [num_points, bucket](std::vector<double> hits,
                                    std::vector<double> tries) {
    std::vector<double> rate(num_points, 0.0);
    for (std::uint64_t i = 0; i < num_points; ++i)
      rate[i] = tries[i] > 0 ? hits[i] / tries[i] : 0.0;
    return [rate = std::move(rate), bucket,
            num_points](std::uint64_t eta) -> double {
      const std::uint64_t idx =
          std::min<std::uint64_t>(num_points - 1, (eta + bucket / 2) / bucket);
      return rate[idx];
    };
  };
  return {table(std::move(fp_hits), std::move(fp_tries)),
          table(std::move(fn_hits), std::move(fn_tries))};
}

}  // namespace wdd

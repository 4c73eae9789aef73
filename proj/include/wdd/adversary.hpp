#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "wdd/exact_window.hpp"
#include "wdd/filter.hpp"

namespace wdd {

enum class GameKind { FalsePositive, FalseNegative };

/// Two-phase adversarial game: the attacker feeds up to `budget` elements,
/// observing only the filter's per-insertion decision, then submits one
/// challenge element. It wins a false positive game when the challenge is
/// outside the last `window` elements yet reported DUPLICATE, and a false
/// negative game when the challenge is inside the window yet reported
/// UNSEEN.
struct GameConfig {
  GameKind game = GameKind::FalsePositive;
  std::uint64_t budget = 0;
  std::uint64_t window = 1;
  std::uint64_t trials = 1;
  std::uint64_t seed = 0;
  unsigned gamma_bits = 30;
};

/// A strategy sees only the public game parameters at construction and the
/// per-insertion decision feedback while playing; it has no access path to
/// the filter under attack.
class AttackStrategy {
 public:
  virtual ~AttackStrategy() = default;

  /// Next phase-one element, given the decision for the previous one
  /// (nullopt on the first call). Returns nullopt when phase one is over.
  virtual std::optional<Element> next_insert(
      std::optional<Decision> feedback) = 0;

  /// The challenge element, requested once after phase one.
  virtual Element challenge() = 0;
};

using StrategyFactory =
    std::function<std::unique_ptr<AttackStrategy>(std::uint64_t trial_seed)>;
using FilterFactory =
    std::function<std::unique_ptr<DuplicateFilter>(std::uint64_t trial_seed)>;

struct AttackOutcome {
  std::uint64_t wins = 0;
  std::uint64_t trials = 0;

  double success() const { return trials ? double(wins) / double(trials) : 0.0; }
  /// Normal-approximation 95% half width.
  double ci_halfwidth() const {
    if (!trials) return 0.0;
    const double p = success();
    return 1.96 * std::sqrt(std::max(p * (1.0 - p), 1e-12) / double(trials));
  }
};

/// Plays the configured game once per trial against a fresh filter and a
/// fresh strategy instance; ground truth comes from an exact window
/// oracle over the phase-one stream. Throws if a strategy exceeds its
/// insertion budget.
inline AttackOutcome run_game(const GameConfig& cfg,
                              const FilterFactory& make_filter,
                              const StrategyFactory& make_strategy) {
  if (cfg.trials < 1) throw std::invalid_argument("trials must be >= 1");
  AttackOutcome outcome;
  outcome.trials = cfg.trials;
  for (std::uint64_t t = 0; t < cfg.trials; ++t) {
    auto filter = make_filter(derive_seed(cfg.seed, 2 * t));
    auto strategy = make_strategy(derive_seed(cfg.seed, 2 * t + 1));
    ExactWindowFilter oracle(cfg.window, cfg.gamma_bits);
    std::optional<Decision> feedback;
    std::uint64_t fed = 0;
    while (auto e = strategy->next_insert(feedback)) {
      if (++fed > cfg.budget)
        throw std::runtime_error("strategy exceeded insertion budget");
      feedback = filter->lookup(*e);
      filter->insert(*e);
      oracle.insert(*e);
    }
    const Element star = strategy->challenge();
    const bool in_window = oracle.lookup(star) == Decision::Duplicate;
    const Decision answer = filter->lookup(star);
    const bool win = cfg.game == GameKind::FalsePositive
                         ? (!in_window && answer == Decision::Duplicate)
                         : (in_window && answer == Decision::Unseen);
    if (win) ++outcome.wins;
  }
  return outcome;
}

// ---------------------------------------------------------------------------
// Constructive strategies from the resistance analyses. Each one emits at
// most its announced number of phase-one elements and exactly one
// challenge.

/// Prepends the challenge element c*L - w times, then a uniform base
/// stream of w elements, so the challenge leaves the window but may linger
/// in the oldest subfilter. Requires c*L > w. Emits c*L elements.
class PrependRepeatStrategy final : public AttackStrategy {
 public:
  PrependRepeatStrategy(std::uint64_t c, std::uint64_t L, std::uint64_t window,
                        unsigned gamma_bits, std::uint64_t seed)
      : total_(c * L), window_(window), rng_(seed),
        mask_((std::uint64_t{1} << gamma_bits) - 1) {
    if (total_ <= window_)
      throw std::invalid_argument("requires c*L > window");
    star_ = rng_.next() & mask_;
  }

  std::optional<Element> next_insert(std::optional<Decision>) override {
    if (emitted_ == total_) return std::nullopt;
    const std::uint64_t i = emitted_++;
    if (i < total_ - window_) return star_;
    Element e = rng_.next() & mask_;
    while (e == star_) e = rng_.next() & mask_;
    return e;
  }

  Element challenge() override { return star_; }

 private:
  std::uint64_t total_;
  std::uint64_t window_;
  Rng rng_;
  std::uint64_t mask_;
  Element star_ = 0;
  std::uint64_t emitted_ = 0;
};

/// Builds one c-element segment with the target planted first, feeds the
/// segment L times but stops one element short of the L-th rotation, then
/// challenges with the planted duplicate. Emits c*L - 1 elements.
class ConcatRepeatStrategy final : public AttackStrategy {
 public:
  ConcatRepeatStrategy(std::uint64_t c, std::uint64_t L, unsigned gamma_bits,
                       std::uint64_t seed)
      : c_(c), total_(c * L - 1), rng_(seed),
        mask_((std::uint64_t{1} << gamma_bits) - 1) {
    if (c_ < 1 || L < 1) throw std::invalid_argument("bad queue shape");
    segment_.reserve(c_);
    segment_.push_back(rng_.next() & mask_);  // the planted duplicate
    for (std::uint64_t i = 1; i < c_; ++i) {
      Element e = rng_.next() & mask_;
      while (e == segment_[0]) e = rng_.next() & mask_;
      segment_.push_back(e);
    }
  }

  std::optional<Element> next_insert(std::optional<Decision>) override {
    if (emitted_ == total_) return std::nullopt;
    return segment_[emitted_++ % c_];
  }

  Element challenge() override { return segment_[0]; }

 private:
  std::uint64_t c_;
  std::uint64_t total_;
  Rng rng_;
  std::uint64_t mask_;
  std::vector<Element> segment_;
  std::uint64_t emitted_ = 0;
};

/// Inserts the target, pushes c*L fresh elements so every subfilter that
/// saw the target has rotated away, then challenges. Wins the false
/// negative game when the window still covers the target (w > c*L).
/// Emits c*L + 1 elements.
class EvictionPushStrategy final : public AttackStrategy {
 public:
  EvictionPushStrategy(std::uint64_t c, std::uint64_t L, unsigned gamma_bits,
                       std::uint64_t seed)
      : total_(c * L + 1), rng_(seed),
        mask_((std::uint64_t{1} << gamma_bits) - 1) {
    star_ = rng_.next() & mask_;
  }

  std::optional<Element> next_insert(std::optional<Decision>) override {
    if (emitted_ == total_) return std::nullopt;
    if (emitted_++ == 0) return star_;
    Element e = rng_.next() & mask_;
    while (e == star_) e = rng_.next() & mask_;
    return e;
  }

  Element challenge() override { return star_; }

 private:
  std::uint64_t total_;
  Rng rng_;
  std::uint64_t mask_;
  Element star_ = 0;
  std::uint64_t emitted_ = 0;
};

/// Uniform phase-one stream and a fresh uniform challenge; the no-effort
/// baseline.
class RandomBaselineStrategy final : public AttackStrategy {
 public:
  RandomBaselineStrategy(std::uint64_t inserts, unsigned gamma_bits,
                         std::uint64_t seed)
      : total_(inserts), rng_(seed),
        mask_((std::uint64_t{1} << gamma_bits) - 1) {}

  std::optional<Element> next_insert(std::optional<Decision>) override {
    if (emitted_ == total_) return std::nullopt;
    ++emitted_;
    return rng_.next() & mask_;
  }

  Element challenge() override { return rng_.next() & mask_; }

 private:
  std::uint64_t total_;
  Rng rng_;
  std::uint64_t mask_;
  std::uint64_t emitted_ = 0;
};

// ---------------------------------------------------------------------------
// Closed-form resistance bounds.

/// A queue of L subfilters, each (p, c)-resistant to false positive
/// attacks, is (1 - (1-p)^L)-resistant on the window (c*L <= w).
inline double fp_resistance_bound(double p, std::uint64_t L) {
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("p must be in [0, 1]");
  return 1.0 - std::pow(1.0 - p, double(L));
}

struct FnResistance {
  double achievable;   ///< attacker success reachable by segment repetition
  double resistance;   ///< upper bound on any attacker's success
};

/// p: subfilter false negative resistance; q: lower bound on the subfilter
/// false positive probability after c insertions of an adversarial stream.
/// achievable = p^L; resistance = min(1-q, p)^(L-1) * p when the window is
/// fully covered (w <= (L-1)c), else max(1-q, p)^L.
inline FnResistance fn_resistance_bounds(double p, double q, std::uint64_t L,
                                         std::uint64_t c, std::uint64_t w) {
  if (p < 0.0 || p > 1.0 || q < 0.0 || q > 1.0)
    throw std::invalid_argument("p and q must be in [0, 1]");
  FnResistance r;
  r.achievable = std::pow(p, double(L));
  if (w <= (L - 1) * c)
    r.resistance = std::pow(std::min(1.0 - q, p), double(L - 1)) * p;
  else
    r.resistance = std::pow(std::max(1.0 - q, p), double(L));
  return r;
}

}  // namespace wdd

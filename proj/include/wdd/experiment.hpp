#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <span>

#include "wdd/exact_window.hpp"
#include "wdd/filter.hpp"

namespace wdd {

/// Realized error counts of one filter run. Rates follow the usual
/// convention: FPR over unseen elements, FNR over duplicates, and the
/// combined error rate ER = (FPR + FNR) x 100.
struct ErrorStats {
  std::uint64_t n_unseen = 0;
  std::uint64_t n_dup = 0;
  std::uint64_t n_fp = 0;
  std::uint64_t n_fn = 0;
  std::uint64_t window = 0;

  double fpr() const { return n_unseen ? double(n_fp) / double(n_unseen) : 0.0; }
  double fnr() const { return n_dup ? double(n_fn) / double(n_dup) : 0.0; }
  double er() const { return (fpr() + fnr()) * 100.0; }

  /// Rough 1-sigma width of er(), from the two binomial components.
  double er_sigma() const {
    double s2 = 0.0;
    if (n_unseen) s2 += fpr() * (1.0 - fpr()) / double(n_unseen);
    if (n_dup) s2 += fnr() * (1.0 - fnr()) / double(n_dup);
    return std::sqrt(s2) * 100.0;
  }

  ErrorStats& operator+=(const ErrorStats& o) {
    n_unseen += o.n_unseen;
    n_dup += o.n_dup;
    n_fp += o.n_fp;
    n_fn += o.n_fn;
    return *this;
  }
};

/// Feeds a stream through a filter, classifying each element before it is
/// inserted. Ground truth is an exact window filter advanced in lockstep:
/// an element is a duplicate iff it occurred among the previous `window`
/// elements. The optional callback fires after every step with the element
/// count so far, letting callers snapshot saturation curves in one pass.
inline ErrorStats run_stream(
    DuplicateFilter& filter, std::span<const Element> stream,
    std::uint64_t window, unsigned gamma_bits,
    const std::function<void(std::uint64_t, const ErrorStats&)>& on_step = {}) {
  ExactWindowFilter oracle(window, gamma_bits);
  ErrorStats stats;
  stats.window = window;
  std::uint64_t n = 0;
  for (const Element e : stream) {
    const Decision got = filter.lookup(e);
    const Decision truth = oracle.lookup(e);
    if (truth == Decision::Duplicate) {
      ++stats.n_dup;
      if (got == Decision::Unseen) ++stats.n_fn;
    } else {
      ++stats.n_unseen;
      if (got == Decision::Duplicate) ++stats.n_fp;
    }
    filter.insert(e);
    oracle.insert(e);
    ++n;
    if (on_step) on_step(n, stats);
  }
  return stats;
}

/// Generates the configured uniform stream and runs it. Infinite-window
/// (non-windowed) experiments pass window = cfg.length.
inline ErrorStats run_experiment(DuplicateFilter& filter,
                                 const StreamConfig& cfg,
                                 std::uint64_t window) {
  const auto stream = gen_stream(cfg);
  return run_stream(filter, stream, window, cfg.gamma_bits);
}

}  // namespace wdd

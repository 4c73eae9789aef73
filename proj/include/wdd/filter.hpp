#pragma once

#include <cstdint>

#include "wdd/common.hpp"

namespace wdd {

/// Behavioral contract every duplicate-detection filter satisfies.
///
/// A filter is constructed against a memory budget M (bits). memory_bits()
/// accounts only the scalable state (fingerprint bits x slots, counter bits
/// x keys, cell arrays) and must stay within the budget; fixed per-instance
/// overhead (a few machine words of bookkeeping) is excluded from the
/// accounting. lookup() is side-effect free; insert() may mutate state.
class DuplicateFilter {
 public:
  virtual ~DuplicateFilter() = default;

  virtual Decision lookup(Element e) const = 0;
  virtual void insert(Element e) = 0;
  virtual std::uint64_t memory_bits() const = 0;

  /// Convenience: classify, then insert. The decision never sees the
  /// element's own insertion.
  Decision step(Element e) {
    const Decision d = lookup(e);
    insert(e);
    return d;
  }
};

}  // namespace wdd

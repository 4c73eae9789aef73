#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "wdd/common.hpp"

namespace wdd {

/// log of (1 - 2^-b)^count, evaluated in log space. Naive powering of
/// (1 - 2^-b) loses everything for large b, so this is the only route.
inline double log_miss_pow(std::uint64_t count, unsigned gamma_bits) {
  return double(count) * std::log1p(-std::exp2(-double(gamma_bits)));
}

/// Lower bound on the error probability of any duplicate-detection filter
/// with M bits of memory after n uniform insertions (n > M):
///   EP_n >= 1 - (1 - (1 - 1/|Gamma|)^M) / (1 - (1 - 1/|Gamma|)^n).
inline double ep_lower_bound(std::uint64_t n, std::uint64_t memory_bits,
                             unsigned gamma_bits) {
  validate_gamma_bits(gamma_bits);
  if (memory_bits < 1) throw std::invalid_argument("memory_bits must be >= 1");
  if (n <= memory_bits)
    throw std::invalid_argument("bound requires n > memory_bits");
  const double num = -std::expm1(log_miss_pow(memory_bits, gamma_bits));
  const double den = -std::expm1(log_miss_pow(n, gamma_bits));
  return std::clamp(1.0 - num / den, 0.0, 1.0);
}

/// Asymptotic form: EP_inf >= (1 - 1/|Gamma|)^M.
inline double ep_lower_bound_inf(std::uint64_t memory_bits,
                                 unsigned gamma_bits) {
  validate_gamma_bits(gamma_bits);
  return std::exp(log_miss_pow(memory_bits, gamma_bits));
}

}  // namespace wdd

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>

#include "wdd/bloom.hpp"
#include "wdd/cuckoo.hpp"
#include "wdd/qht.hpp"
#include "wdd/stable_bloom.hpp"
#include "wdd/synthetic.hpp"

namespace wdd {

enum class ZooKind { Qht, StableBloom, Cuckoo, Bloom, Synthetic };

inline ZooKind parse_zoo_kind(const std::string& name) {
  if (name == "qht") return ZooKind::Qht;
  if (name == "sbf") return ZooKind::StableBloom;
  if (name == "cuckoo") return ZooKind::Cuckoo;
  if (name == "bloom") return ZooKind::Bloom;
  if (name == "synthetic") return ZooKind::Synthetic;
  throw std::invalid_argument("unknown filter kind: " + name);
}

inline const char* zoo_kind_name(ZooKind kind) {
  switch (kind) {
    case ZooKind::Qht: return "qht";
    case ZooKind::StableBloom: return "sbf";
    case ZooKind::Cuckoo: return "cuckoo";
    case ZooKind::Bloom: return "bloom";
    case ZooKind::Synthetic: return "synthetic";
  }
  throw std::invalid_argument("unknown filter kind");
}

/// Optional knobs for zoo_make; absent fields fall back to the documented
/// defaults.
struct ZooParams {
  std::optional<std::uint64_t> sbf_decrements;  ///< default: calibrate to 2% FPR
  unsigned sbf_cell_bits = 2;
  unsigned sbf_num_hashes = 2;
  unsigned bloom_num_hashes = 4;
  unsigned cuckoo_max_kicks = CuckooFilter::kDefaultMaxKicks;
  double synthetic_p_fp = 0.0;
  double synthetic_p_fn = 0.0;
  unsigned synthetic_gamma_bits = kMaxGammaBits;
};

inline constexpr double kSbfTargetFpr = 0.02;

/// Builds a zoo filter honoring the memory budget. Throws on unknown kind
/// or a budget too small for a single cell.
inline std::unique_ptr<DuplicateFilter> zoo_make(ZooKind kind,
                                                 std::uint64_t memory_bits,
                                                 const ZooParams& params,
                                                 std::uint64_t seed) {
  switch (kind) {
    case ZooKind::Qht:
      return std::make_unique<QhtFilter>(memory_bits, seed);
    case ZooKind::StableBloom: {
      const std::uint64_t p =
          params.sbf_decrements
              ? *params.sbf_decrements
              : StableBloomFilter::calibrate_decrements(
                    memory_bits, kSbfTargetFpr, seed, params.sbf_cell_bits,
                    params.sbf_num_hashes);
      return std::make_unique<StableBloomFilter>(
          memory_bits, seed, p, params.sbf_cell_bits, params.sbf_num_hashes);
    }
    case ZooKind::Cuckoo:
      return std::make_unique<CuckooFilter>(memory_bits, seed,
                                            params.cuckoo_max_kicks);
    case ZooKind::Bloom:
      return std::make_unique<BloomFilter>(memory_bits, seed,
                                           params.bloom_num_hashes);
    case ZooKind::Synthetic:
      return std::make_unique<SyntheticFilter>(params.synthetic_p_fp,
                                               params.synthetic_p_fn, seed,
                                               params.synthetic_gamma_bits);
  }
  throw std::invalid_argument("unknown filter kind");
}

}  // namespace wdd

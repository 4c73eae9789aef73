#include <gtest/gtest.h>

#include <cmath>
#include <cstdint>

#include "wdd/exact_window.hpp"
#include "wdd/experiment.hpp"
#include "wdd/short_hash.hpp"

namespace {

using namespace wdd;

TEST(Shf, EmptyFilterUnseen) {
  ShfFilter f(10000, 100, 1);
  EXPECT_EQ(f.lookup(12345), Decision::Unseen);
}

TEST(Shf, InsertThenLookup) {
  ShfFilter f(10000, 100, 1);
  f.insert(77);
  EXPECT_EQ(f.lookup(77), Decision::Duplicate);
}

TEST(Shf, WindowOneEviction) {
  ShfFilter f(200, 1, 1);
  // Find two elements with distinct fingerprints.
  Element e1 = 0, e2 = 1;
  while (f.fingerprint(e2) == f.fingerprint(e1)) ++e2;
  f.insert(e1);
  f.insert(e2);
  EXPECT_EQ(f.lookup(e1), Decision::Unseen);
}

TEST(Shf, Conservation) {
  ShfFilter f(20000, 64, 5);
  for (const Element e : gen_stream({2, 64, 16})) f.insert(e);
  EXPECT_EQ(f.size(), 64u);
  EXPECT_LE(f.distinct_fingerprints(), 64u);
}

TEST(Shf, InsufficientMemoryRejected) {
  // floor(M/(2w) - log2(w)/2) < 1 must throw, not degrade.
  EXPECT_THROW(ShfFilter(100, 100, 1), std::invalid_argument);
  EXPECT_THROW(CshfFilter(50, 100, 1), std::invalid_argument);
}

TEST(Cshf, ForcedCollisionFalsePositive) {
  CshfFilter f(64, 64, 3);  // 1-bit fingerprints
  EXPECT_EQ(f.fingerprint_width(), 1u);
  Element e1 = 0, e2 = 1;
  while (f.fingerprint(e2) != f.fingerprint(e1)) ++e2;
  f.insert(e1);
  EXPECT_EQ(f.lookup(e2), Decision::Duplicate);  // never inserted
}

TEST(Cshf, InsertThenLookupWithinWindow) {
  CshfFilter f(20000, 100, 9);
  f.insert(42);
  for (Element e = 1000; e < 1099; ++e) f.insert(e);
  EXPECT_EQ(f.lookup(42), Decision::Duplicate);  // exactly w steps ago
  f.insert(5);
  EXPECT_EQ(f.lookup(42), Decision::Unseen);  // now evicted
}

TEST(ShortHash, ZeroFalseNegativesProperty) {
  // Neither variant ever misses a true window duplicate.
  for (const auto kind : {ShortHashKind::Shf, ShortHashKind::Cshf}) {
    for (const std::uint64_t w : {8ull, 64ull, 256ull}) {
      auto make = [&]() -> std::unique_ptr<DuplicateFilter> {
        if (kind == ShortHashKind::Shf)
          return std::make_unique<ShfFilter>(64 * w, w, w);
        return std::make_unique<CshfFilter>(16 * w, w, w);
      };
      auto f = make();
      const auto stream = gen_planted_stream({w + 1, 50000, 8}, w, 0.2);
      const auto stats = run_stream(*f, stream, w, 8);
      EXPECT_EQ(stats.n_fn, 0u) << "w=" << w;
    }
  }
}

TEST(FpTheory, PinnedValues) {
  EXPECT_NEAR(fp_theory(ShortHashKind::Cshf, 1e4, 1000), 0.6236, 2e-4);
  EXPECT_NEAR(fp_theory(ShortHashKind::Cshf, 1e7, 1000), 0.0, 1e-9);
  // Fingerprints of 2 log2 w bits (memory 2 w log2 w in the compact
  // accounting) give per-pair collisions 1/w^2 and FP ~ 1/w at w = 100.
  const double w = 100.0;
  const double m = 2.0 * w * std::log2(w);
  EXPECT_NEAR(fp_theory(ShortHashKind::Cshf, m, w), 9.95e-3, 1e-4);
}

TEST(FpTheory, ClampFlag) {
  bool clamped = false;
  EXPECT_DOUBLE_EQ(fp_theory(ShortHashKind::Shf, 100, 100, &clamped), 1.0);
  EXPECT_TRUE(clamped);
  fp_theory(ShortHashKind::Cshf, 1e4, 100, &clamped);
  EXPECT_FALSE(clamped);
}

TEST(FpTheory, CshfShfEquivalence) {
  // CSHF with memory M matches an SHF with memory 2M + w log2 w.
  for (const double m : {1e3, 1e4, 1e5})
    for (const double w : {50.0, 500.0, 2000.0}) {
      const double cshf = fp_theory(ShortHashKind::Cshf, m, w);
      const double shf =
          fp_theory(ShortHashKind::Shf, 2.0 * m + w * std::log2(w), w);
      EXPECT_NEAR(cshf, shf, 1e-12) << "M=" << m << " w=" << w;
    }
}

TEST(WmaxSolve, MatchesPaperFits) {
  const double cshf = double(wmax_solve(ShortHashKind::Cshf, 1e5));
  const double shf = double(wmax_solve(ShortHashKind::Shf, 1e5));
  EXPECT_NEAR(cshf, 6713.0, 0.2 * 6713.0);  // fit 0.0627 M + 443
  EXPECT_NEAR(shf, 2516.0, 0.2 * 2516.0);   // fit 0.0233 M + 186
}

TEST(WmaxSolve, MonotoneInMemory) {
  for (const auto kind : {ShortHashKind::Shf, ShortHashKind::Cshf})
    EXPECT_GT(wmax_solve(kind, 2e5), wmax_solve(kind, 1e5));
}

TEST(WmaxSolve, CrossesTarget) {
  for (const auto kind : {ShortHashKind::Shf, ShortHashKind::Cshf}) {
    const std::uint64_t w = wmax_solve(kind, 1e5);
    EXPECT_GE(fp_theory(kind, 1e5, double(w)), 0.5);
    EXPECT_LT(fp_theory(kind, 1e5, double(w - 1)), 0.5);
  }
}

TEST(ShortHash, MemoryAccountingWithinBudget) {
  // Queue + map stay within M plus the documented 3w slack.
  const std::uint64_t m = 20000, w = 500;
  ShfFilter f(m, w, 7);
  for (const Element e : gen_stream({1, 4 * w, 20})) f.insert(e);
  EXPECT_LE(f.memory_bits(), m + 3 * w);
  CshfFilter g(m, 1000, 7);
  for (const Element e : gen_stream({1, 2000, 20})) g.insert(e);
  EXPECT_LE(g.memory_bits(), m);
}

}  // namespace

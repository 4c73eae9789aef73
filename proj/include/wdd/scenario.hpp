#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "wdd/adversary.hpp"
#include "wdd/bounds.hpp"
#include "wdd/experiment.hpp"
#include "wdd/queuing.hpp"
#include "wdd/short_hash.hpp"
#include "wdd/zoo.hpp"

namespace wdd {

enum class ScenarioKind {
  Saturation,      ///< ER of non-windowed filters vs stream length + bound
  WindowSweep,     ///< ER vs window size for one filter
  LSweep,          ///< ER vs subfilter count at a fixed window
  QueuedVsVanilla, ///< the same base filter bare and inside a queue
  FiniteStream,    ///< ER vs window across several stream lengths
  Adversary        ///< attack-strategy success table vs resistance bounds
};

inline ScenarioKind parse_scenario_kind(const std::string& name) {
  if (name == "saturation") return ScenarioKind::Saturation;
  if (name == "window_sweep") return ScenarioKind::WindowSweep;
  if (name == "l_sweep") return ScenarioKind::LSweep;
  if (name == "queued_vs_vanilla") return ScenarioKind::QueuedVsVanilla;
  if (name == "finite_stream") return ScenarioKind::FiniteStream;
  if (name == "adversary") return ScenarioKind::Adversary;
  throw std::invalid_argument("unknown scenario: " + name);
}

inline const char* scenario_kind_name(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::Saturation: return "saturation";
    case ScenarioKind::WindowSweep: return "window_sweep";
    case ScenarioKind::LSweep: return "l_sweep";
    case ScenarioKind::QueuedVsVanilla: return "queued_vs_vanilla";
    case ScenarioKind::FiniteStream: return "finite_stream";
    case ScenarioKind::Adversary: return "adversary";
  }
  throw std::invalid_argument("unknown scenario");
}

/// Parses a grid spec: either a comma list ("1,16,256") or
/// "logspace:lo:hi:k" for k integer points log-spaced over [lo, hi],
/// deduplicated after rounding.
inline std::vector<std::uint64_t> parse_grid(const std::string& spec) {
  std::vector<std::uint64_t> out;
  if (spec.rfind("logspace:", 0) == 0) {
    std::uint64_t lo = 0, hi = 0, k = 0;
    char colon1 = 0, colon2 = 0;
    std::istringstream in(spec.substr(9));
    if (!(in >> lo >> colon1 >> hi >> colon2 >> k) || colon1 != ':' ||
        colon2 != ':' || lo < 1 || hi < lo || k < 1)
      throw std::invalid_argument("bad logspace spec: " + spec);
    for (std::uint64_t i = 0; i < k; ++i) {
      const double t = k == 1 ? 0.0 : double(i) / double(k - 1);
      const double v =
          std::exp2(std::log2(double(lo)) +
                    t * (std::log2(double(hi)) - std::log2(double(lo))));
      out.push_back(static_cast<std::uint64_t>(std::llround(v)));
    }
  } else {
    std::istringstream in(spec);
    std::string tok;
    while (std::getline(in, tok, ','))
      if (!tok.empty()) out.push_back(std::stoull(tok));
    if (out.empty()) throw std::invalid_argument("empty grid spec: " + spec);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// Full description of one benchmark run. Everything needed to reproduce
/// the output byte for byte lives here and is serialized to the manifest.
struct Scenario {
  ScenarioKind kind = ScenarioKind::WindowSweep;
  std::string filter = "cshf";   ///< exact|shf|cshf|queued|<zoo kind>
  std::string subfilter = "qht"; ///< subfilter kind when filter = queued
  std::uint64_t memory_bits = 100000;
  unsigned gamma_bits = 18;
  std::vector<std::uint64_t> stream_lens = {1000000};
  std::vector<std::uint64_t> windows = {10000};
  std::vector<std::uint64_t> Ls = {10};
  std::uint64_t seed = 1;
  std::uint64_t trials = 1000;  ///< adversary games per strategy
  double adv_p_fp = 0.0;        ///< synthetic subfilter knobs (adversary)
  double adv_p_fn = 0.5;
  std::optional<std::uint64_t> sbf_decrements;  ///< resolved at run time
};

struct ScenarioResult {
  std::vector<std::filesystem::path> files;
  std::vector<std::string> skipped;  ///< per-point infeasibility log
};

inline nlohmann::ordered_json scenario_to_manifest(const Scenario& s) {
  nlohmann::ordered_json j;
  j["scenario"] = scenario_kind_name(s.kind);
  j["filter"] = s.filter;
  j["subfilter"] = s.subfilter;
  j["memory_bits"] = s.memory_bits;
  j["gamma_bits"] = s.gamma_bits;
  j["stream_lens"] = s.stream_lens;
  j["windows"] = s.windows;
  j["Ls"] = s.Ls;
  j["seed"] = s.seed;
  j["trials"] = s.trials;
  j["adv_p_fp"] = s.adv_p_fp;
  j["adv_p_fn"] = s.adv_p_fn;
  if (s.sbf_decrements) j["sbf_decrements"] = *s.sbf_decrements;
  return j;
}

inline Scenario scenario_from_manifest(const nlohmann::json& j) {
  Scenario s;
  s.kind = parse_scenario_kind(j.at("scenario").get<std::string>());
  s.filter = j.at("filter").get<std::string>();
  s.subfilter = j.at("subfilter").get<std::string>();
  s.memory_bits = j.at("memory_bits").get<std::uint64_t>();
  s.gamma_bits = j.at("gamma_bits").get<unsigned>();
  s.stream_lens = j.at("stream_lens").get<std::vector<std::uint64_t>>();
  s.windows = j.at("windows").get<std::vector<std::uint64_t>>();
  s.Ls = j.at("Ls").get<std::vector<std::uint64_t>>();
  s.seed = j.at("seed").get<std::uint64_t>();
  s.trials = j.at("trials").get<std::uint64_t>();
  s.adv_p_fp = j.at("adv_p_fp").get<double>();
  s.adv_p_fn = j.at("adv_p_fn").get<double>();
  if (j.contains("sbf_decrements"))
    s.sbf_decrements = j.at("sbf_decrements").get<std::uint64_t>();
  return s;
}

inline Scenario scenario_from_manifest_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw std::runtime_error("cannot read manifest: " + p.string());
  nlohmann::json j;
  in >> j;
  return scenario_from_manifest(j);
}

namespace detail {

/// Fixed-format number rendering so rerun output is byte-identical.
inline std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

class DatWriter {
 public:
  DatWriter(const std::filesystem::path& path, const std::string& header,
            const std::string& columns)
      : out_(path, std::ios::binary) {
    if (!out_) throw std::runtime_error("cannot write " + path.string());
    out_ << "# " << header << "\n" << columns << "\n";
  }

  template <typename... Fields>
  void row(const Fields&... fields) {
    bool first = true;
    ((out_ << (first ? "" : " ") << fields, first = false), ...);
    out_ << "\n";
  }

 private:
  std::ofstream out_;
};

inline std::string header_for(const Scenario& s) {
  std::ostringstream h;
  h << "scenario=" << scenario_kind_name(s.kind) << " filter=" << s.filter
    << " subfilter=" << s.subfilter << " memory_bits=" << s.memory_bits
    << " gamma_bits=" << s.gamma_bits << " seed=" << s.seed;
  return h.str();
}

/// Resolves the SBF decrement knob once per run so every subfilter (and
/// the manifest) sees the same calibrated value.
inline void resolve_sbf(Scenario& s) {
  const bool uses_sbf = s.filter == "sbf" ||
                        (s.filter == "queued" && s.subfilter == "sbf") ||
                        s.kind == ScenarioKind::QueuedVsVanilla;
  if (s.sbf_decrements || !uses_sbf) return;
  std::uint64_t budget = s.memory_bits;
  if (s.filter == "queued" && !s.Ls.empty()) budget = s.memory_bits / s.Ls[0];
  if (s.filter == "sbf" || (s.filter == "queued" && s.subfilter == "sbf") ||
      (s.kind == ScenarioKind::QueuedVsVanilla && s.subfilter == "sbf"))
    s.sbf_decrements = StableBloomFilter::calibrate_decrements(
        budget, kSbfTargetFpr, derive_seed(s.seed, 0xCA11));
}

/// Builds a bare (non-queued) filter of the named kind. Windowed kinds use
/// `window`; zoo kinds ignore it.
inline std::unique_ptr<DuplicateFilter> make_bare_filter(
    const std::string& kind, std::uint64_t memory_bits, std::uint64_t window,
    unsigned gamma_bits, const Scenario& s, std::uint64_t seed) {
  if (kind == "exact")
    return std::make_unique<ExactWindowFilter>(window, gamma_bits);
  if (kind == "shf")
    return std::make_unique<ShfFilter>(memory_bits, window, seed);
  if (kind == "cshf")
    return std::make_unique<CshfFilter>(memory_bits, window, seed);
  ZooParams zp;
  zp.sbf_decrements = s.sbf_decrements;
  zp.synthetic_p_fp = s.adv_p_fp;
  zp.synthetic_p_fn = s.adv_p_fn;
  zp.synthetic_gamma_bits = gamma_bits;
  return zoo_make(parse_zoo_kind(kind), memory_bits, zp, seed);
}

/// Builds the queue of L copies of the named subfilter: per-subfilter
/// budget floor(M/L), capacity floor(w/L).
inline std::unique_ptr<QueuingFilter> make_queued_filter(
    const std::string& subkind, std::uint64_t memory_bits, std::uint64_t L,
    std::uint64_t window, unsigned gamma_bits, const Scenario& s,
    std::uint64_t seed) {
  const std::uint64_t sub_bits = memory_bits / L;
  const std::uint64_t c = window / L;
  if (c < 1) throw std::invalid_argument("window smaller than subfilter count");
  auto factory = [subkind, sub_bits, window, gamma_bits, s,
                  seed](std::uint64_t generation) {
    return make_bare_filter(subkind, sub_bits, window, gamma_bits, s,
                            derive_seed(seed, generation));
  };
  return std::make_unique<QueuingFilter>(std::move(factory), L, c);
}

/// Dispatch on Scenario.filter, including "queued".
inline std::unique_ptr<DuplicateFilter> make_scenario_filter(
    const Scenario& s, std::uint64_t window, std::uint64_t L,
    std::uint64_t seed) {
  if (s.filter == "queued")
    return make_queued_filter(s.subfilter, s.memory_bits, L, window,
                              s.gamma_bits, s, seed);
  return make_bare_filter(s.filter, s.memory_bits, window, s.gamma_bits, s,
                          seed);
}

/// Log-spaced stream-length snapshot points for the saturation curve.
inline std::vector<std::uint64_t> saturation_points(std::uint64_t n,
                                                    std::uint64_t points = 13) {
  const std::uint64_t lo = std::max<std::uint64_t>(100, n / 4096);
  std::vector<std::uint64_t> out;
  for (std::uint64_t i = 0; i < points; ++i) {
    const double t = points == 1 ? 1.0 : double(i) / double(points - 1);
    const double v = std::exp2(std::log2(double(lo)) +
                               t * (std::log2(double(n)) - std::log2(double(lo))));
    out.push_back(std::min<std::uint64_t>(
        n, static_cast<std::uint64_t>(std::llround(v))));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

inline void run_saturation(const Scenario& s,
                           const std::filesystem::path& out_dir,
                           ScenarioResult& result) {
  const std::uint64_t n = s.stream_lens.at(0);
  const auto points = saturation_points(n);
  const auto curve_path =
      out_dir / (s.filter + std::string("_saturation.dat"));
  const auto bound_path = out_dir / "bound_saturation.dat";
  DatWriter curve(curve_path, header_for(s), "n Error");
  DatWriter bound(bound_path, header_for(s), "n Bound");
  auto filter = make_scenario_filter(s, n, s.Ls.at(0), derive_seed(s.seed, 0));
  const auto stream =
      gen_stream({derive_seed(s.seed, 1), n, s.gamma_bits});
  std::size_t next = 0;
  run_stream(*filter, stream, n, s.gamma_bits,
             [&](std::uint64_t steps, const ErrorStats& st) {
               while (next < points.size() && points[next] == steps) {
                 curve.row(steps, fmt(st.er()));
                 ++next;
               }
             });
  for (const std::uint64_t p : points) {
    const double lb =
        p > s.memory_bits ? ep_lower_bound(p, s.memory_bits, s.gamma_bits)
                          : 0.0;
    bound.row(p, fmt(lb * 100.0));
  }
  result.files.push_back(curve_path);
  result.files.push_back(bound_path);
}

inline void sweep_windows(const Scenario& s, DatWriter& out,
                          std::uint64_t stream_len, const std::string& filter,
                          std::uint64_t L, ScenarioResult& result) {
  std::uint64_t point = 0;
  for (const std::uint64_t w : s.windows) {
    const std::uint64_t pt_seed = derive_seed(s.seed, point++);
    try {
      Scenario pt = s;
      pt.filter = filter;
      auto f = make_scenario_filter(pt, w, L, pt_seed);
      const auto stream =
          gen_stream({derive_seed(pt_seed, 1), stream_len, s.gamma_bits});
      const auto stats = run_stream(*f, stream, w, s.gamma_bits);
      out.row(w, fmt(stats.er()));
    } catch (const std::invalid_argument& err) {
      result.skipped.push_back("w=" + std::to_string(w) + " filter=" + filter +
                               ": " + err.what());
    }
  }
}

inline void run_window_sweep(const Scenario& s,
                             const std::filesystem::path& out_dir,
                             ScenarioResult& result) {
  const auto path = out_dir / (s.filter + std::string("_window_sweep.dat"));
  DatWriter out(path, header_for(s), "w Error");
  sweep_windows(s, out, s.stream_lens.at(0), s.filter, s.Ls.at(0), result);
  result.files.push_back(path);
}

inline void run_l_sweep(const Scenario& s,
                        const std::filesystem::path& out_dir,
                        ScenarioResult& result) {
  const std::uint64_t w = s.windows.at(0);
  const auto path = out_dir / (s.subfilter + std::string("_l_sweep.dat"));
  DatWriter out(path, header_for(s), "L Error");
  std::uint64_t point = 0;
  for (const std::uint64_t L : s.Ls) {
    const std::uint64_t pt_seed = derive_seed(s.seed, point++);
    try {
      Scenario pt = s;
      pt.filter = "queued";
      auto f = make_scenario_filter(pt, w, L, pt_seed);
      const auto stream = gen_stream(
          {derive_seed(pt_seed, 1), s.stream_lens.at(0), s.gamma_bits});
      const auto stats = run_stream(*f, stream, w, s.gamma_bits);
      out.row(L, fmt(stats.er()));
    } catch (const std::invalid_argument& err) {
      result.skipped.push_back("L=" + std::to_string(L) + ": " + err.what());
    }
  }
  result.files.push_back(path);
}

inline void run_queued_vs_vanilla(const Scenario& s,
                                  const std::filesystem::path& out_dir,
                                  ScenarioResult& result) {
  const std::string base = s.subfilter;
  const auto vanilla_path = out_dir / (base + std::string("_vanilla.dat"));
  const auto queued_path = out_dir / (base + std::string("_queued.dat"));
  {
    DatWriter out(vanilla_path, header_for(s), "w Error");
    sweep_windows(s, out, s.stream_lens.at(0), base, 1, result);
  }
  {
    DatWriter out(queued_path, header_for(s), "w Error");
    sweep_windows(s, out, s.stream_lens.at(0), "queued", s.Ls.at(0), result);
  }
  result.files.push_back(vanilla_path);
  result.files.push_back(queued_path);
}

inline void run_finite_stream(const Scenario& s,
                              const std::filesystem::path& out_dir,
                              ScenarioResult& result) {
  for (const std::uint64_t n : s.stream_lens) {
    const auto path =
        out_dir / ("finite_n" + std::to_string(n) + std::string(".dat"));
    DatWriter out(path, header_for(s) + " stream_len=" + std::to_string(n),
                  "w Error");
    sweep_windows(s, out, n, s.filter, s.Ls.at(0), result);
    result.files.push_back(path);
  }
}

inline void run_adversary(const Scenario& s,
                          const std::filesystem::path& out_dir,
                          ScenarioResult& result) {
  const std::uint64_t L = s.Ls.at(0);
  const std::uint64_t w = s.windows.at(0);
  const std::uint64_t c = std::max<std::uint64_t>(1, w / L);
  const double p = s.adv_p_fn, q = s.adv_p_fp;
  const auto path = out_dir / "adversary.dat";
  DatWriter out(path, header_for(s), "strategy game success ci bound");

  auto synthetic_queue = [&](std::uint64_t seed) {
    return make_queued_filter("synthetic", s.memory_bits, L, c * L,
                              s.gamma_bits, s, seed);
  };
  auto exact_queue = [&](std::uint64_t seed) {
    return make_queued_filter("exact", s.memory_bits, L, c * L, s.gamma_bits,
                              s, seed);
  };

  // CONCAT_REPEAT: FN game on the fully covered window w = cL.
  {
    GameConfig g{GameKind::FalseNegative, c * L, c * L, s.trials,
                 derive_seed(s.seed, 10), s.gamma_bits};
    const auto o = run_game(g, synthetic_queue, [&](std::uint64_t seed) {
      return std::make_unique<ConcatRepeatStrategy>(c, L, s.gamma_bits, seed);
    });
    out.row("concat_repeat", "fn", fmt(o.success()), fmt(o.ci_halfwidth()),
            fmt(fn_resistance_bounds(p, q, L, c, c * L).resistance));
  }
  // EVICTION_PUSH: FN game with w > (L-1)c so coverage has a hole.
  {
    GameConfig g{GameKind::FalseNegative, c * L + 1, c * L + 1, s.trials,
                 derive_seed(s.seed, 11), s.gamma_bits};
    const auto o = run_game(g, exact_queue, [&](std::uint64_t seed) {
      return std::make_unique<EvictionPushStrategy>(c, L, s.gamma_bits, seed);
    });
    out.row("eviction_push", "fn", fmt(o.success()), fmt(o.ci_halfwidth()),
            fmt(fn_resistance_bounds(0.0, 0.0, L, c, c * L + 1).resistance));
  }
  // PREPEND_REPEAT: FP game in the cL > w regime (window one short).
  {
    GameConfig g{GameKind::FalsePositive, c * L, c * L - 1, s.trials,
                 derive_seed(s.seed, 12), s.gamma_bits};
    const auto o = run_game(g, synthetic_queue, [&](std::uint64_t seed) {
      return std::make_unique<PrependRepeatStrategy>(c, L, c * L - 1,
                                                     s.gamma_bits, seed);
    });
    out.row("prepend_repeat", "fp", fmt(o.success()), fmt(o.ci_halfwidth()),
            fmt(fp_resistance_bound(q, L)));
  }
  // RANDOM_BASELINE: FP game, no-effort reference point.
  {
    GameConfig g{GameKind::FalsePositive, c * L, c * L, s.trials,
                 derive_seed(s.seed, 13), s.gamma_bits};
    const auto o = run_game(g, synthetic_queue, [&](std::uint64_t seed) {
      return std::make_unique<RandomBaselineStrategy>(c * L, s.gamma_bits,
                                                      seed);
    });
    out.row("random_baseline", "fp", fmt(o.success()), fmt(o.ci_halfwidth()),
            fmt(fp_resistance_bound(q, L)));
  }
  result.files.push_back(path);
}

}  // namespace detail

/// Runs a scenario, writing one .dat file per curve plus manifest.json
/// into out_dir. Infeasible grid points are skipped and logged in the
/// result, never silently zeroed. Output is a pure function of the
/// Scenario, so rerunning from the written manifest reproduces every file
/// byte for byte.
inline ScenarioResult run_scenario(Scenario s,
                                   const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  if (s.stream_lens.empty() || s.windows.empty() || s.Ls.empty())
    throw std::invalid_argument("grids must be non-empty");
  detail::resolve_sbf(s);
  ScenarioResult result;
  switch (s.kind) {
    case ScenarioKind::Saturation:
      detail::run_saturation(s, out_dir, result);
      break;
    case ScenarioKind::WindowSweep:
      detail::run_window_sweep(s, out_dir, result);
      break;
    case ScenarioKind::LSweep:
      detail::run_l_sweep(s, out_dir, result);
      break;
    case ScenarioKind::QueuedVsVanilla:
      detail::run_queued_vs_vanilla(s, out_dir, result);
      break;
    case ScenarioKind::FiniteStream:
      detail::run_finite_stream(s, out_dir, result);
      break;
    case ScenarioKind::Adversary:
      detail::run_adversary(s, out_dir, result);
      break;
  }
  const auto manifest_path = out_dir / "manifest.json";
  std::ofstream mf(manifest_path, std::ios::binary);
  if (!mf) throw std::runtime_error("cannot write " + manifest_path.string());
  mf << scenario_to_manifest(s).dump(2) << "\n";
  result.files.push_back(manifest_path);
  return result;
}

}  // namespace wdd

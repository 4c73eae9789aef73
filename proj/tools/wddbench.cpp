// wddbench: scenario runner for the sliding-window duplicate-detection
// library. Emits gnuplot-ready .dat files plus a manifest.json that
// reproduces the run byte for byte.
//
// Exit codes: 0 success, 1 bad arguments, 2 some grid points skipped.

#include <cstdint>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "wdd/scenario.hpp"

namespace {

constexpr std::uint64_t kDeskMaxStreamLen = 10'000'000;
constexpr std::uint64_t kDeskMaxMemoryBits = 1'000'000;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sliding-window duplicate-detection benchmark runner"};

  std::string scenario_name = "window_sweep";
  std::string filter = "cshf";
  std::string subfilter = "qht";
  std::uint64_t memory_bits = 100000;
  unsigned gamma_bits = 18;
  std::string stream_len = "1000000";
  std::string window, window_grid;
  std::string L, L_grid;
  std::uint64_t seed = 1;
  std::uint64_t trials = 1000;
  std::string out_dir = "out";
  std::string from_manifest;
  double adv_p_fp = 0.0, adv_p_fn = 0.5;
  bool paper_scale = false;

  app.add_option("--scenario", scenario_name,
                 "saturation|window_sweep|l_sweep|queued_vs_vanilla|"
                 "finite_stream|adversary");
  app.add_option("--filter", filter,
                 "exact|shf|cshf|queued|qht|sbf|cuckoo|bloom|synthetic");
  app.add_option("--subfilter", subfilter,
                 "subfilter kind when --filter queued");
  app.add_option("--memory-bits", memory_bits, "total memory budget M");
  app.add_option("--gamma-bits", gamma_bits, "alphabet size as log2 |Gamma|");
  app.add_option("--stream-len", stream_len,
                 "stream length N; grids allowed for finite_stream");
  app.add_option("--window", window, "single window size w");
  app.add_option("--window-grid", window_grid,
                 "w grid: comma list or logspace:lo:hi:k");
  app.add_option("--L", L, "single subfilter count");
  app.add_option("--L-grid", L_grid, "L grid: comma list or logspace:lo:hi:k");
  app.add_option("--seed", seed, "master seed");
  app.add_option("--trials", trials, "adversary game trials per strategy");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--from-manifest", from_manifest,
                 "re-run a previous manifest.json (overrides other flags)");
  app.add_option("--adv-p-fp", adv_p_fp,
                 "synthetic subfilter false positive probability (adversary)");
  app.add_option("--adv-p-fn", adv_p_fn,
                 "synthetic subfilter false negative probability (adversary)");
  app.add_flag("--paper-scale", paper_scale,
               "allow full-scale grids beyond the desk-scale caps");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    wdd::Scenario s;
    if (!from_manifest.empty()) {
      s = wdd::scenario_from_manifest_file(from_manifest);
    } else {
      s.kind = wdd::parse_scenario_kind(scenario_name);
      s.filter = filter;
      s.subfilter = subfilter;
      s.memory_bits = memory_bits;
      s.gamma_bits = gamma_bits;
      s.stream_lens = wdd::parse_grid(stream_len);
      if (!window_grid.empty())
        s.windows = wdd::parse_grid(window_grid);
      else if (!window.empty())
        s.windows = wdd::parse_grid(window);
      if (!L_grid.empty())
        s.Ls = wdd::parse_grid(L_grid);
      else if (!L.empty())
        s.Ls = wdd::parse_grid(L);
      s.seed = seed;
      s.trials = trials;
      s.adv_p_fp = adv_p_fp;
      s.adv_p_fn = adv_p_fn;
      if (!paper_scale) {
        for (const auto n : s.stream_lens)
          if (n > kDeskMaxStreamLen)
            throw std::invalid_argument(
                "stream length beyond desk scale; pass --paper-scale");
        if (s.memory_bits > kDeskMaxMemoryBits)
          throw std::invalid_argument(
              "memory budget beyond desk scale; pass --paper-scale");
      }
    }

    const auto result = wdd::run_scenario(s, out_dir);
    for (const auto& f : result.files) std::cout << f.string() << "\n";
    for (const auto& msg : result.skipped)
      std::cerr << "skipped: " << msg << "\n";
    return result.skipped.empty() ? 0 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

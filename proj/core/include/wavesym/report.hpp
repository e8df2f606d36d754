#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wavesym/region.hpp"
#include "wavesym/verdict.hpp"
#include "wavesym/wave.hpp"

namespace wavesym {

struct AnalysisReport {
  std::string region_dsl;  // normalized
  double horizon = 0.0;
  std::uint64_t seed = 0;
  Verdict verdict;
  std::vector<SeriesRow> series;

  bool operator==(const AnalysisReport&) const = default;
};

AnalysisReport make_report(const SpacetimeRegion& region, const Verdict& verdict, std::uint64_t seed);

// Fixed key order, one "key: value" per line.
std::string to_text(const AnalysisReport& report);
std::string to_json(const AnalysisReport& report);
// Throws std::runtime_error on malformed input.
AnalysisReport report_from_json(const std::string& text);

// Exit-code contract of the command line tool.
inline constexpr int kExitObservable = 0;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitNotObservable = 10;
inline constexpr int kExitIndeterminate = 11;
inline constexpr int kExitWitnessRefused = 12;

int exit_code(const Verdict& v);

struct RenderOptions {
  bool components = false;  // shade G by fiber-graph component
  int characteristics = 0;  // sample lines drawn per family
  int scale = 1;            // pixels per cell
};

// Rows are time ascending; white outside G, darker with occupancy.
GrayImage render_diagram(const RasterMask& mask, const RenderOptions& options = {});

// CSV "x,u0x,u1" at cell centers.
std::string state_csv(const WaveState& state);
WaveState state_from_csv(const std::string& text);

}  // namespace wavesym

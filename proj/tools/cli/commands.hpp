#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "floquet/error.hpp"
#include "floquet/io/config.hpp"

namespace floquet::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitDegeneracy = 4;

int exit_code(ErrorCode code);

/// Flags shared by all verbs; unset fields leave the config untouched.
struct CommonFlags {
  std::string config_path;
  std::string out_dir;
  std::string cache_dir;
  std::string format = "csv";
  std::optional<int> steps;       // path steps per segment
  std::optional<int> time_steps;  // integrator steps per period
  std::optional<unsigned> threads;
  bool real_part = false;  // second SVG panel with Re μ
};

RunConfig resolve_config(const CommonFlags& flags);

/// Sweep the loop and write bands.csv (or bands.json) and bands.svg.
int cmd_bands(const RunConfig& config, const CommonFlags& flags, std::ostream& out);

/// Sweep, assemble the invariant report and write report.json and report.txt.
int cmd_invariants(const RunConfig& config, const CommonFlags& flags, std::ostream& out);

struct CapacitanceRequest {
  std::string alpha;  // "x,y" or one of G, K, M
  std::optional<int> quad_points;
  std::optional<double> cutoff;
};

/// Capacitance matrix at one α with a refinement check; the cache entry is
/// written to the cache directory (default <out>/cache).
int cmd_capacitance(const RunConfig& config, const CapacitanceRequest& request, std::ostream& out);

/// Writes <out>/config.json for the named demo, then runs bands and invariants.
int cmd_demo(const std::string& which, const CommonFlags& flags, std::ostream& out);

/// Full command line; errors go to `err` as "error: <Name>: <message>".
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace floquet::cli

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "floquet/hill.hpp"

namespace floquet {

struct PathSpec {
  int steps_per_segment = 100;
  double gamma_offset = 1e-3;
  double k_offset = 0.0;
  /// Custom closed polyline (closing back to the first point). Empty selects
  /// the Γ–K–M–Γ symmetry path.
  std::vector<Vec2> waypoints;
};

/// Everything a run depends on. Serialized as JSON; unknown keys are errors.
struct RunConfig {
  /// "honeycomb" (Hill system over quasi-momenta) or "constant" (an
  /// α-independent coefficient matrix, for smoke tests).
  std::string system = "honeycomb";
  GeometryConfig geometry;
  ModulationProfile modulation = demo_weak();
  CMatrix constant_matrix;  // system == "constant"
  double constant_period = 1.0;
  PathSpec path;
  IntegratorConfig integrator;
  CapacitanceOptions capacitance;
  SweepOptions tracking;
  double cond_limit = kDefaultCondLimit;
  /// Relative gap below which a CSV row carries min_gap_flag = 1.
  double gap_flag = 1e-3;
  std::optional<Vec2> reference_alpha;  // Type II.b; default midpoint of Γ–K
  std::string output_dir = "floquet-out";
  std::string cache_dir;
  unsigned threads = 0;
};

RunConfig parse_config(const std::string& json_text);
std::string serialize_config(const RunConfig& config);
RunConfig load_config(const std::string& path);
void save_config(const RunConfig& config, const std::string& path);

/// Throws ConfigError on non-positive tolerances, too few steps, or
/// inconsistent sizes.
void validate_config(const RunConfig& config);

/// FNV-1a digest (hex) of serialize_config with output_dir, cache_dir and
/// threads cleared, so it only covers settings that change the numbers.
std::string config_hash(const RunConfig& config);

/// "weak", "strong" or "static" (κ unmodulated, ε = 0).
RunConfig demo_config(const std::string& which);

}  // namespace floquet

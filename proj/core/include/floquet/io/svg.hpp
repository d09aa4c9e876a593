#pragma once

#include <string>

#include "floquet/tracking.hpp"

namespace floquet {

struct SvgOptions {
  int width = 900;
  int height = 520;
  bool real_part = false;  // plot Re μ in a second panel
  std::string title = "Floquet exponents along the loop";
};

/// Im μ (optionally also Re μ) against arc length, one polyline per band,
/// with ticks at the labelled waypoints of `loop`.
std::string band_svg(const BandTrack& track, const ParameterLoop& loop, const SvgOptions& options = {});

}  // namespace floquet

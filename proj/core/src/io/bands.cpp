#include "floquet/io/bands.hpp"

#include <cstdlib>
#include <sstream>

#include "floquet/error.hpp"
#include "format.hpp"

namespace floquet {

std::vector<BandRow> band_rows(const BandTrack& track, double gap_flag) {
  const BraidInvariant braid = braid_invariant(track);
  std::vector<BandRow> rows;
  rows.reserve(track.bands() * track.samples());
  for (std::size_t b = 0; b < track.bands(); ++b) {
    for (std::size_t k = 0; k < track.samples(); ++k) {
      const cplx lambda = track.multiplier_paths[b][k];
      double scale = 0.0, gap = std::numeric_limits<double>::infinity();
      for (std::size_t o = 0; o < track.bands(); ++o) {
        scale = std::max(scale, std::abs(track.multiplier_paths[o][k]));
        if (o != b) gap = std::min(gap, std::abs(track.multiplier_paths[o][k] - lambda));
      }
      rows.push_back({static_cast<int>(b), track.s[k], track.exponent_paths[b][k], lambda,
                      gap < gap_flag * scale ? 1 : 0, braid.band_cycle_length[b] > 1 ? 1 : 0});
    }
  }
  return rows;
}

std::string band_csv(const std::vector<BandRow>& rows) {
  std::string out = std::string(kBandCsvHeader) + "\n";
  for (const BandRow& r : rows) {
    out += std::to_string(r.band) + ',' + detail::fmt17(r.s) + ',' + detail::fmt17(r.mu.real()) + ',' +
           detail::fmt17(r.mu.imag()) + ',' + detail::fmt17(r.lambda.real()) + ',' + detail::fmt17(r.lambda.imag()) +
           ',' + std::to_string(r.min_gap_flag) + ',' + std::to_string(r.braided) + '\n';
  }
  return out;
}

std::vector<BandRow> parse_band_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kBandCsvHeader) fail(ErrorCode::IoError, "band CSV header mismatch");
  std::vector<BandRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    if (f.size() != 8) fail(ErrorCode::IoError, "band CSV row with " + std::to_string(f.size()) + " fields");
    auto num = [](const std::string& s) {
      char* end = nullptr;
      const double v = std::strtod(s.c_str(), &end);
      if (end == s.c_str() || *end != '\0') fail(ErrorCode::IoError, "bad number '" + s + "' in band CSV");
      return v;
    };
    rows.push_back({static_cast<int>(num(f[0])), num(f[1]), {num(f[2]), num(f[3])}, {num(f[4]), num(f[5])},
                    static_cast<int>(num(f[6])), static_cast<int>(num(f[7]))});
  }
  return rows;
}

}  // namespace floquet

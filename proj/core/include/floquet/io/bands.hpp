#pragma once

#include <string>
#include <vector>

#include "floquet/tracking.hpp"

namespace floquet {

struct BandRow {
  int band;
  double s;
  cplx mu;
  cplx lambda;
  int min_gap_flag;
  int braided;
};

inline constexpr const char* kBandCsvHeader = "band,s,re_mu,im_mu,re_lambda,im_lambda,min_gap_flag,braided";

/// Rows sorted by (band, s). `gap_flag` is the relative gap below which a
/// sample is flagged as a near-degeneracy.
std::vector<BandRow> band_rows(const BandTrack& track, double gap_flag = 1e-3);

std::string band_csv(const std::vector<BandRow>& rows);
std::vector<BandRow> parse_band_csv(const std::string& text);

}  // namespace floquet

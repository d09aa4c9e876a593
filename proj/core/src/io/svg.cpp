#include "floquet/io/svg.hpp"

#include <algorithm>
#include <cstdio>

namespace floquet {

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#393b79", "#637939"};

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", x);
  return buf;
}

std::string label(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

struct Panel {
  double x0, y0, w, h;
};

void draw_panel(std::string& out, const BandTrack& track, const ParameterLoop& loop, const Panel& p, bool imag,
                const std::string& axis_name) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& band : track.exponent_paths)
    for (const cplx& mu : band) {
      const double v = imag ? mu.imag() : mu.real();
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  if (!(hi > lo)) {
    const double pad = std::max(1e-12, std::abs(hi) * 0.1 + 1e-12);
    lo -= pad;
    hi += pad;
  }
  const double smax = track.s.empty() || track.s.back() <= 0.0 ? 1.0 : track.s.back();
  auto X = [&](double s) { return p.x0 + p.w * s / smax; };
  auto Y = [&](double v) { return p.y0 + p.h * (1.0 - (v - lo) / (hi - lo)); };

  out += "<rect x=\"" + num(p.x0) + "\" y=\"" + num(p.y0) + "\" width=\"" + num(p.w) + "\" height=\"" + num(p.h) +
         "\" fill=\"none\" stroke=\"#000\"/>\n";
  for (const Waypoint& wp : loop.labels) {
    if (wp.index >= track.loop_index.size()) continue;
    const double x = X(track.s[track.loop_index[wp.index]]);
    out += "<line x1=\"" + num(x) + "\" y1=\"" + num(p.y0) + "\" x2=\"" + num(x) + "\" y2=\"" + num(p.y0 + p.h) +
           "\" stroke=\"#bbb\" stroke-dasharray=\"3,3\"/>\n";
    out += "<text x=\"" + num(x) + "\" y=\"" + num(p.y0 + p.h + 16) + "\" text-anchor=\"middle\">" + wp.label +
           "</text>\n";
  }
  for (int t = 0; t <= 4; ++t) {
    const double v = lo + (hi - lo) * t / 4.0;
    out += "<text x=\"" + num(p.x0 - 6) + "\" y=\"" + num(Y(v) + 4) + "\" text-anchor=\"end\">" + label(v) +
           "</text>\n";
  }
  out += "<text x=\"" + num(p.x0 - 58) + "\" y=\"" + num(p.y0 + p.h / 2) + "\" transform=\"rotate(-90 " +
         num(p.x0 - 58) + " " + num(p.y0 + p.h / 2) + ")\" text-anchor=\"middle\">" + axis_name + "</text>\n";

  const BraidInvariant braid = braid_invariant(track);
  for (std::size_t b = 0; b < track.bands(); ++b) {
    out += "<polyline fill=\"none\" stroke=\"" + std::string(kPalette[b % std::size(kPalette)]) +
           "\" stroke-width=\"1.2\"";
    if (braid.band_cycle_length[b] > 1) out += " stroke-dasharray=\"6,2\"";
    out += " points=\"";
    for (std::size_t k = 0; k < track.samples(); ++k) {
      const cplx mu = track.exponent_paths[b][k];
      out += (k ? " " : "") + num(X(track.s[k])) + "," + num(Y(imag ? mu.imag() : mu.real()));
    }
    out += "\"/>\n";
  }
}

}  // namespace

std::string band_svg(const BandTrack& track, const ParameterLoop& loop, const SvgOptions& options) {
  const double W = options.width, H = options.height;
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(options.width) + "\" height=\"" +
         std::to_string(options.height) + "\" viewBox=\"0 0 " + std::to_string(options.width) + " " +
         std::to_string(options.height) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"#fff\"/>\n";
  out += "<text x=\"" + num(W / 2) + "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" + options.title +
         "</text>\n";
  const double left = 80, right = 20, top = 34, bottom = 34, gap = 40;
  const double w = W - left - right;
  if (options.real_part) {
    const double h = (H - top - bottom - gap) / 2;
    draw_panel(out, track, loop, {left, top, w, h}, true, "Im μ");
    draw_panel(out, track, loop, {left, top + h + gap, w, h}, false, "Re μ");
  } else {
    draw_panel(out, track, loop, {left, top, w, H - top - bottom}, true, "Im μ");
  }
  out += "</svg>\n";
  return out;
}

}  // namespace floquet

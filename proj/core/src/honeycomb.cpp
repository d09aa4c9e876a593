#include "floquet/honeycomb.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>

namespace floquet {

Mat2 GeometryConfig::default_lattice() {
  Mat2 g;
  g << std::sqrt(3.0), std::sqrt(3.0) / 2.0, 0.0, 1.5;
  return g;
}

Mat2 reciprocal_basis(const Mat2& lattice) {
  if (std::abs(lattice.determinant()) < 1e-12) fail(ErrorCode::InvalidArgument, "degenerate lattice");
  return kTwoPi * lattice.inverse().transpose();
}

namespace {

Vec2 direction(double angle) { return {std::cos(angle), std::sin(angle)}; }

void check_disjoint(const ResonatorLattice& lat) {
  for (std::size_t i = 0; i < lat.size(); ++i) {
    if (!(lat.resonators[i].radius > 0.0))
      fail(ErrorCode::InvalidArgument, "resonator radius must be positive");
    for (std::size_t j = i; j < lat.size(); ++j) {
      for (int m = -1; m <= 1; ++m) {
        for (int n = -1; n <= 1; ++n) {
          if (i == j && m == 0 && n == 0) continue;
          const Vec2 shift = lat.lattice * Vec2(m, n);
          const double d = (lat.resonators[i].center - lat.resonators[j].center - shift).norm();
          if (d <= lat.resonators[i].radius + lat.resonators[j].radius)
            fail(ErrorCode::OverlappingResonators,
                 "disks " + std::to_string(i + 1) + " and " + std::to_string(j + 1) + " intersect (distance " +
                     std::to_string(d) + ")");
        }
      }
    }
  }
}

}  // namespace

ResonatorLattice build_geometry(const GeometryConfig& config) {
  ResonatorLattice lat;
  lat.lattice = config.lattice;
  lat.reciprocal = reciprocal_basis(config.lattice);
  if (!config.custom.empty()) {
    lat.resonators = config.custom;
  } else {
    if (!(config.radius > 0.0)) fail(ErrorCode::InvalidArgument, "resonator radius must be positive");
    const Vec2 diag = config.lattice.col(0) + config.lattice.col(1);
    const Vec2 first = diag / 3.0;
    const Vec2 second = 2.0 * diag / 3.0;
    const double r = config.radius;
    const double spread = config.trimer_spread * r;
    lat.resonators = {
        {first + spread * direction(kPi / 6.0), r},         {first + spread * direction(5.0 * kPi / 6.0), r},
        {first + spread * direction(9.0 * kPi / 6.0), r},   {second - spread * direction(9.0 * kPi / 6.0), r},
        {second - spread * direction(kPi / 6.0), r},        {second - spread * direction(5.0 * kPi / 6.0), r},
    };
  }
  check_disjoint(lat);
  return lat;
}

std::string geometry_hash(const ResonatorLattice& lat) {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](double x) {
    char buf[32];
    const int len = std::snprintf(buf, sizeof buf, "%.17g;", x);
    for (int i = 0; i < len; ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 1099511628211ULL;
    }
  };
  for (int i = 0; i < 4; ++i) mix(lat.lattice(i % 2, i / 2));
  for (const Disk& d : lat.resonators) {
    mix(d.center.x());
    mix(d.center.y());
    mix(d.radius);
  }
  char out[17];
  std::snprintf(out, sizeof out, "%016llx", static_cast<unsigned long long>(h));
  return out;
}

SymmetryPoints symmetry_points(const ResonatorLattice& lat) {
  const Vec2 l1 = lat.reciprocal.col(0);
  const Vec2 l2 = lat.reciprocal.col(1);
  const double len = l2.norm();
  auto same = [len](double x) { return std::abs(x - len) <= 1e-9 * len; };
  if (!same(l1.norm())) fail(ErrorCode::InvalidArgument, "reciprocal lattice is not hexagonal");
  Vec2 third;
  if (same((l1 + l2).norm()))
    third = l1 + l2;
  else if (same((l2 - l1).norm()))
    third = l2 - l1;
  else
    fail(ErrorCode::InvalidArgument, "reciprocal lattice is not hexagonal");
  // K is the circumcentre of the equilateral triangle (0, l₂, third), a corner
  // of the Voronoi cell; M bisects the edge facing l₂.
  return {Vec2::Zero(), (l2 + third) / 3.0, l2 / 2.0};
}

ParameterLoop symmetry_path(const ResonatorLattice& lat, int steps_per_segment, double gamma_offset,
                            double k_offset) {
  const SymmetryPoints p = symmetry_points(lat);
  const Vec2 start = p.gamma + gamma_offset * (p.K - p.gamma);
  const Vec2 corner = p.K + k_offset * (p.gamma - p.K);
  return polyline_loop({start, corner, p.M}, steps_per_segment, ParamPoint::Zero(2), {"Γ", "K", "M"});
}

}  // namespace floquet

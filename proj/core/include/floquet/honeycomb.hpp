#pragma once

#include <string>
#include <vector>

#include "floquet/tracking.hpp"

namespace floquet {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

struct Disk {
  Vec2 center;
  double radius;
};

struct ResonatorLattice {
  Mat2 lattice;     // columns g₁, g₂
  Mat2 reciprocal;  // columns l₁, l₂ with ⟨lᵢ, gⱼ⟩ = 2π δᵢⱼ
  std::vector<Disk> resonators;

  double cell_area() const { return std::abs(lattice.determinant()); }
  std::size_t size() const { return resonators.size(); }
};

struct GeometryConfig {
  Mat2 lattice = default_lattice();
  double radius = 0.1;
  /// Distance of each disk from its trimer centre, in units of the radius.
  double trimer_spread = 3.0;
  /// When non-empty, used instead of the two-trimer layout.
  std::vector<Disk> custom;

  static Mat2 default_lattice();
};

Mat2 reciprocal_basis(const Mat2& lattice);

/// Two trimers around (g₁+g₂)/3 and 2(g₁+g₂)/3, or `custom` disks. Throws
/// OverlappingResonators when disks intersect, including across neighbouring
/// cells.
ResonatorLattice build_geometry(const GeometryConfig& config = {});

/// FNV-1a digest of the geometry (hex), stable across runs.
std::string geometry_hash(const ResonatorLattice& lat);

struct SymmetryPoints {
  Vec2 gamma;
  Vec2 K;
  Vec2 M;
};

/// Γ, a Brillouin-zone corner K and the edge midpoint M next to it. Requires
/// a hexagonal reciprocal lattice.
SymmetryPoints symmetry_points(const ResonatorLattice& lat);

/// Closed loop Γ' → K' → M → Γ' with Γ' = Γ + gamma_offset·(K − Γ) and
/// K' = K + k_offset·(Γ − K); 3·steps + 1 points. A positive k_offset keeps the
/// loop off an exact degeneracy at K.
ParameterLoop symmetry_path(const ResonatorLattice& lat, int steps_per_segment,
                            double gamma_offset = 1e-3, double k_offset = 0.0);

}  // namespace floquet

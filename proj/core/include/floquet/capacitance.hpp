#pragma once

#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <tuple>

#include "floquet/honeycomb.hpp"

namespace floquet {

struct CapacitanceOptions {
  int quad_points = 32;   // boundary nodes per disk
  double cutoff = 32.0;   // spectral sum over |α + q| ≤ cutoff
  /// Ewald splitting parameter. The real-space sum runs over all cell copies
  /// with |x − g|² ≤ 144 η, so the split error is ~e⁻³⁶ independently of
  /// the cutoff.
  double ewald_eta = 0.05;
  /// When positive, the matrix is recomputed with 2·cutoff and 2·quad_points
  /// and NotConverged is thrown if any entry moves by more than this
  /// (relative to max |C|).
  double convergence_tol = 0.0;
};

struct CapacitanceMatrix {
  Vec2 alpha;
  CMatrix C;
  int quad_points = 0;
  double lattice_sum_cutoff = 0.0;
  double hermiticity_residual = 0.0;  // ‖C − C*‖ / ‖C‖
  /// Relative change under cutoff and quadrature doubling; negative if not measured.
  double convergence_delta = -1.0;
};

/// Distance from α to the nearest reciprocal lattice point.
double reciprocal_distance(const ResonatorLattice& lat, const Vec2& alpha);

/// Quasi-periodic capacitance matrix C^α by a Nyström discretization of the
/// single-layer potential on each circle. Throws SingularAlpha when α is
/// within 1e-6 of a reciprocal lattice point.
CapacitanceMatrix capacitance_matrix(const ResonatorLattice& lat, const Vec2& alpha,
                                     const CapacitanceOptions& options = {});

/// Thread-safe in-memory memo of capacitance matrices keyed by the exact bits
/// of α and the discretization settings. Optionally backed by a directory of
/// JSON files (see io/cache.hpp): get() reads existing files, new entries are
/// written only by flush().
class CapacitanceCache {
 public:
  CapacitanceCache(ResonatorLattice lat, CapacitanceOptions options, std::string directory = {});

  const ResonatorLattice& lattice() const { return lat_; }
  const CapacitanceOptions& options() const { return options_; }
  const std::string& hash() const { return hash_; }

  CapacitanceMatrix get(const Vec2& alpha);
  /// Inserts an externally computed matrix (bypasses assembly).
  void put(const CapacitanceMatrix& c);
  /// Writes entries computed since the last flush, in key order. Returns the
  /// number of files written.
  std::size_t flush();

  std::size_t hits() const;
  std::size_t misses() const;

 private:
  using Key = std::tuple<double, double>;
  ResonatorLattice lat_;
  CapacitanceOptions options_;
  std::string directory_;
  std::string hash_;
  mutable std::mutex mutex_;
  std::map<Key, CapacitanceMatrix> memo_;
  std::set<Key> pending_;
  std::size_t hits_ = 0;
  std::size_t misses_ = 0;
};

}  // namespace floquet

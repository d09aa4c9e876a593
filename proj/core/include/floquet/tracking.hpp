#pragma once

#include <string>
#include <vector>

#include "floquet/normal_form.hpp"

namespace floquet {

struct Waypoint {
  std::size_t index;  // position in ParameterLoop::points
  std::string label;
};

/// Discretized closed loop γ₀,…,γ_M with γ_M = γ₀ + ℓ.
struct ParameterLoop {
  std::vector<ParamPoint> points;
  ParamPoint lattice_vector;
  std::vector<Waypoint> labels;
  double max_step = 0.0;

  std::size_t size() const { return points.size(); }
  /// Cumulative Euclidean arc length at each point.
  std::vector<double> arc_length() const;
};

/// Piecewise-linear loop through `waypoints` with `steps_per_segment` equal
/// steps on each leg, closed by γ_M = γ₀ + ℓ (the end point is constructed,
/// not measured). Labels may be empty or one per waypoint.
ParameterLoop polyline_loop(const std::vector<ParamPoint>& waypoints, int steps_per_segment,
                            const ParamPoint& lattice_vector,
                            const std::vector<std::string>& labels = {});

/// γ(s) = γ₀ + s·ℓ, s ∈ [0, 1], sampled at `steps` equal steps.
ParameterLoop straight_loop(const ParamPoint& start, const ParamPoint& lattice_vector, int steps);

struct Matching {
  std::vector<int> perm;         // column of `prev` n ↦ column of `next`
  std::vector<double> overlap2;  // |⟨v_n, w_perm(n)⟩|² per pair
  double min_overlap2 = 1.0;
};

inline constexpr double kAcceptOverlap2 = 0.5;

/// Optimal eigenvector pairing by overlap (exact assignment for N ≤ 16,
/// greedy above). Throws AmbiguousMatch when any matched overlap² ≤ threshold.
Matching match_eigenpairs(const EigenFrame& prev, const EigenFrame& next,
                          double accept_overlap2 = kAcceptOverlap2);

/// Pairing without the acceptance check.
Matching match_eigenpairs_unchecked(const EigenFrame& prev, const EigenFrame& next);

/// Pairing by multiplier proximity: minimizes Σ |λ_n − λ'_π(n)|.
Matching match_multipliers(const EigenFrame& prev, const EigenFrame& next);

enum class MatchStrategy { EigenvectorOverlap, NearestMultiplier };

struct SweepOptions {
  MatchStrategy strategy = MatchStrategy::EigenvectorOverlap;
  double accept_overlap2 = kAcceptOverlap2;
  /// Smallest bisected step as a fraction of the original step.
  double min_step_fraction = 1.0 / 1024.0;
  unsigned threads = 0;
};

struct RefinementEvent {
  std::size_t segment;  // index k of the failing segment γ_k → γ_{k+1}
  int depth;            // bisection depth reached
  double min_overlap2;  // worst accepted overlap² after refinement
};

struct BandTrack {
  /// Samples along the (possibly refined) loop; sample 0 is γ₀, the last is γ_M.
  std::vector<ParamPoint> params;
  std::vector<double> s;  // arc length
  std::vector<std::vector<cplx>> multiplier_paths;  // [band][sample]
  std::vector<std::vector<cplx>> exponent_paths;    // [band][sample]
  std::vector<std::vector<CVector>> eigvec_paths;   // [band][sample]
  std::vector<cplx> det_path;                       // det X(T) per sample
  std::vector<int> permutation;  // track n at γ_M continues as track σ(n) at γ₀
  double min_gap = 0.0;          // smallest relative multiplier gap
  double min_overlap2 = 1.0;     // worst accepted matching overlap²
  double max_jump_ratio = 0.0;   // max per-step |Δλ| / local gap
  double max_cond = 1.0;
  std::vector<RefinementEvent> refinement_log;
  /// Sample index of each original loop point in the refined grid.
  std::vector<std::size_t> loop_index;

  std::size_t bands() const { return multiplier_paths.size(); }
  std::size_t samples() const { return params.size(); }
};

/// Monodromy eigenframe at one parameter point.
EigenFrame frame_at(const ParamPeriodicLODE& sys, const ParamPoint& gamma,
                    const IntegratorConfig& integrator);

/// Frames at all loop points (parallel), then sequential matching with
/// adaptive bisection. Throws DegeneracyUnresolved at the bisection floor.
BandTrack sweep_loop(const ParamPeriodicLODE& sys, const ParameterLoop& loop,
                     const IntegratorConfig& integrator = {}, const SweepOptions& options = {});

/// Same as sweep_loop on precomputed frames (one per loop point). Segments that
/// need bisection call `refine_frame` for the midpoint.
BandTrack track_frames(const ParameterLoop& loop, std::vector<EigenFrame> frames,
                       const std::function<EigenFrame(const ParamPoint&)>& refine_frame,
                       double period, const SweepOptions& options = {});

/// Recursive bisection of the segment a → b until every matched overlap² on the
/// refined pieces passes. Returns the interior points and frames inserted (in
/// order) plus the composed pairing from `fa` to `fb`.
struct RefinedSegment {
  std::vector<ParamPoint> points;
  std::vector<EigenFrame> frames;
  std::vector<Matching> steps;  // steps.size() == points.size() + 1
  int depth = 0;
};
RefinedSegment refine_near_degeneracy(const ParamPoint& a, const EigenFrame& fa, const ParamPoint& b,
                                      const EigenFrame& fb,
                                      const std::function<EigenFrame(const ParamPoint&)>& frame_of,
                                      const SweepOptions& options = {});

struct BraidInvariant {
  std::vector<std::vector<int>> cycles;  // each starts at its smallest band; ordered by that
  std::vector<int> band_cycle_length;    // per band
  long long order = 1;                   // lcm of cycle lengths
  /// Cycle lengths > 1, descending.
  std::vector<int> nontrivial_lengths() const;
};

BraidInvariant braid_invariant(const std::vector<int>& permutation);
inline BraidInvariant braid_invariant(const BandTrack& track) { return braid_invariant(track.permutation); }

/// Number of consecutive sample pairs across which the count of multipliers
/// with ||λ| − 1| > tol changes. For systems whose multipliers pair up as
/// (λ, 1/λ̄), each such change is a collision on the unit circle, where the
/// band labels have no C¹ continuation and the braid depends on sampling.
int off_circle_transitions(const BandTrack& track, double tol = 1e-9);

}  // namespace floquet

#include "floquet/tracking.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "floquet/assignment.hpp"
#include "floquet/parallel.hpp"

namespace floquet {

std::vector<double> ParameterLoop::arc_length() const {
  std::vector<double> s(points.size(), 0.0);
  for (std::size_t k = 1; k < points.size(); ++k) s[k] = s[k - 1] + (points[k] - points[k - 1]).norm();
  return s;
}

ParameterLoop polyline_loop(const std::vector<ParamPoint>& waypoints, int steps_per_segment,
                            const ParamPoint& lattice_vector, const std::vector<std::string>& labels) {
  if (waypoints.empty()) fail(ErrorCode::InvalidArgument, "loop needs at least one waypoint");
  if (steps_per_segment < 1) fail(ErrorCode::InvalidArgument, "steps per segment must be >= 1");
  if (!labels.empty() && labels.size() != waypoints.size())
    fail(ErrorCode::InvalidArgument, "one label per waypoint expected");
  const auto dim = waypoints.front().size();
  if (lattice_vector.size() != dim) fail(ErrorCode::InvalidArgument, "lattice vector dimension mismatch");
  ParameterLoop loop;
  loop.lattice_vector = lattice_vector;
  const std::size_t legs = waypoints.size();
  if (legs == 1 && lattice_vector.norm() == 0.0)
    fail(ErrorCode::InvalidArgument, "a single waypoint needs a nonzero lattice vector");
  for (std::size_t i = 0; i < legs; ++i) {
    const ParamPoint& a = waypoints[i];
    const ParamPoint b = i + 1 < legs ? waypoints[i + 1] : ParamPoint(waypoints.front() + lattice_vector);
    if (a.size() != dim) fail(ErrorCode::InvalidArgument, "waypoint dimension mismatch");
    if (!labels.empty()) loop.labels.push_back({loop.points.size(), labels[i]});
    for (int s = 0; s < steps_per_segment; ++s)
      loop.points.push_back(a + (b - a) * (static_cast<double>(s) / steps_per_segment));
    loop.max_step = std::max(loop.max_step, (b - a).norm() / steps_per_segment);
  }
  loop.points.push_back(waypoints.front() + lattice_vector);
  if (!labels.empty()) loop.labels.push_back({loop.points.size() - 1, labels.front()});
  return loop;
}

ParameterLoop straight_loop(const ParamPoint& start, const ParamPoint& lattice_vector, int steps) {
  return polyline_loop({start}, steps, lattice_vector);
}

namespace {

Eigen::MatrixXd overlap_matrix(const EigenFrame& prev, const EigenFrame& next) {
  if (prev.eigvecs.rows() != next.eigvecs.rows() || prev.eigvecs.cols() != next.eigvecs.cols())
    fail(ErrorCode::InvalidArgument, "frames have different dimensions");
  return (prev.eigvecs.adjoint() * next.eigvecs).cwiseAbs2();
}

Matching finish(const Eigen::MatrixXd& overlap2, std::vector<int> perm) {
  Matching m;
  m.perm = std::move(perm);
  m.overlap2.resize(m.perm.size());
  m.min_overlap2 = 1.0;
  for (std::size_t n = 0; n < m.perm.size(); ++n) {
    m.overlap2[n] = overlap2(static_cast<Eigen::Index>(n), m.perm[n]);
    m.min_overlap2 = std::min(m.min_overlap2, m.overlap2[n]);
  }
  return m;
}

double relative_gap(const std::vector<cplx>& lambda) {
  double scale = 0.0;
  for (const cplx& l : lambda) scale = std::max(scale, std::abs(l));
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < lambda.size(); ++i)
    for (std::size_t j = i + 1; j < lambda.size(); ++j) gap = std::min(gap, std::abs(lambda[i] - lambda[j]));
  return scale > 0.0 ? gap / scale : 0.0;
}

std::string describe(const ParamPoint& p) {
  std::ostringstream os;
  os.precision(10);
  os << '(';
  for (Eigen::Index i = 0; i < p.size(); ++i) os << (i ? ", " : "") << p[i];
  os << ')';
  return os.str();
}

void refine_into(const ParamPoint& a, const EigenFrame& fa, const ParamPoint& b, const EigenFrame& fb,
                 const std::function<EigenFrame(const ParamPoint&)>& frame_of, const SweepOptions& options,
                 double floor, int depth, RefinedSegment& out) {
  Matching m = match_eigenpairs_unchecked(fa, fb);
  if (m.min_overlap2 > options.accept_overlap2) {
    out.steps.push_back(std::move(m));
    out.depth = std::max(out.depth, depth);
    return;
  }
  if ((b - a).norm() <= floor * (1.0 + 1e-12)) {
    fail(ErrorCode::DegeneracyUnresolved,
         "matching still ambiguous (overlap² " + std::to_string(m.min_overlap2) + ") at γ = " +
             describe(0.5 * (a + b)) + " after " + std::to_string(depth) + " bisections");
  }
  const ParamPoint mid = 0.5 * (a + b);
  const EigenFrame fm = frame_of(mid);
  refine_into(a, fa, mid, fm, frame_of, options, floor, depth + 1, out);
  out.points.push_back(mid);
  out.frames.push_back(fm);
  refine_into(mid, fm, b, fb, frame_of, options, floor, depth + 1, out);
}

}  // namespace

Matching match_eigenpairs_unchecked(const EigenFrame& prev, const EigenFrame& next) {
  const Eigen::MatrixXd o = overlap_matrix(prev, next);
  return finish(o, o.rows() <= 16 ? max_weight_assignment(o) : greedy_assignment(o));
}

Matching match_eigenpairs(const EigenFrame& prev, const EigenFrame& next, double accept_overlap2) {
  Matching m = match_eigenpairs_unchecked(prev, next);
  if (!(m.min_overlap2 > accept_overlap2))
    fail(ErrorCode::AmbiguousMatch,
         "smallest matched overlap² " + std::to_string(m.min_overlap2) + " is below the acceptance threshold");
  return m;
}

Matching match_multipliers(const EigenFrame& prev, const EigenFrame& next) {
  const auto n = static_cast<Eigen::Index>(prev.multipliers.size());
  if (static_cast<Eigen::Index>(next.multipliers.size()) != n)
    fail(ErrorCode::InvalidArgument, "frames have different dimensions");
  Eigen::MatrixXd score(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) score(i, j) = -std::abs(prev.multipliers[i] - next.multipliers[j]);
  return finish(overlap_matrix(prev, next), max_weight_assignment(score));
}

RefinedSegment refine_near_degeneracy(const ParamPoint& a, const EigenFrame& fa, const ParamPoint& b,
                                      const EigenFrame& fb,
                                      const std::function<EigenFrame(const ParamPoint&)>& frame_of,
                                      const SweepOptions& options) {
  RefinedSegment out;
  refine_into(a, fa, b, fb, frame_of, options, options.min_step_fraction * (b - a).norm(), 0, out);
  return out;
}

EigenFrame frame_at(const ParamPeriodicLODE& sys, const ParamPoint& gamma, const IntegratorConfig& integrator) {
  return eig_monodromy_unchecked(integrate_monodromy(sys, gamma, integrator));
}

BandTrack track_frames(const ParameterLoop& loop, std::vector<EigenFrame> frames,
                       const std::function<EigenFrame(const ParamPoint&)>& refine_frame, double period,
                       const SweepOptions& options) {
  if (loop.size() < 2) fail(ErrorCode::InvalidArgument, "loop needs at least two points");
  if (frames.size() != loop.size()) fail(ErrorCode::InvalidArgument, "one frame per loop point expected");
  const std::size_t n = frames.front().multipliers.size();

  BandTrack track;
  track.multiplier_paths.assign(n, {});
  track.exponent_paths.assign(n, {});
  track.eigvec_paths.assign(n, {});
  track.min_gap = std::numeric_limits<double>::infinity();

  std::vector<int> cur(n);
  std::iota(cur.begin(), cur.end(), 0);
  std::vector<cplx> last_multipliers;
  auto append = [&](const ParamPoint& p, const EigenFrame& f) {
    if (!last_multipliers.empty()) {
      const double gap = relative_gap(last_multipliers);
      double scale = 0.0;
      for (const cplx& l : last_multipliers) scale = std::max(scale, std::abs(l));
      for (std::size_t b = 0; b < n; ++b) {
        const double jump = std::abs(f.multipliers[cur[b]] - track.multiplier_paths[b].back());
        if (gap > 0.0) track.max_jump_ratio = std::max(track.max_jump_ratio, jump / (gap * scale));
      }
    }
    track.params.push_back(p);
    track.s.push_back(track.s.empty() ? 0.0 : track.s.back() + (p - track.params[track.params.size() - 2]).norm());
    cplx det = 1.0;
    for (std::size_t b = 0; b < n; ++b) {
      const cplx lambda = f.multipliers[cur[b]];
      const std::optional<cplx> prev =
          track.exponent_paths[b].empty() ? std::nullopt : std::optional<cplx>(track.exponent_paths[b].back());
      track.multiplier_paths[b].push_back(lambda);
      track.exponent_paths[b].push_back(choose_log_branch(lambda, prev, period));
      track.eigvec_paths[b].push_back(f.eigvecs.col(cur[b]));
    }
    for (const cplx& l : f.multipliers) det *= l;
    track.det_path.push_back(det);
    track.min_gap = std::min(track.min_gap, relative_gap(f.multipliers));
    track.max_cond = std::max(track.max_cond, f.cond);
    last_multipliers = f.multipliers;
  };
  auto advance = [&](const Matching& m) {
    for (std::size_t b = 0; b < n; ++b) cur[b] = m.perm[cur[b]];
    track.min_overlap2 = std::min(track.min_overlap2, m.min_overlap2);
  };

  track.loop_index.push_back(0);
  append(loop.points[0], frames[0]);
  for (std::size_t k = 0; k + 1 < loop.size(); ++k) {
    if (frames[k + 1].multipliers.size() != n) fail(ErrorCode::InvalidArgument, "frame dimension changed");
    if (options.strategy == MatchStrategy::NearestMultiplier) {
      advance(match_multipliers(frames[k], frames[k + 1]));
    } else {
      RefinedSegment seg =
          refine_near_degeneracy(loop.points[k], frames[k], loop.points[k + 1], frames[k + 1], refine_frame, options);
      if (!seg.points.empty()) {
        double worst = 1.0;
        for (const Matching& m : seg.steps) worst = std::min(worst, m.min_overlap2);
        track.refinement_log.push_back({k, seg.depth, worst});
      }
      for (std::size_t i = 0; i < seg.points.size(); ++i) {
        advance(seg.steps[i]);
        append(seg.points[i], seg.frames[i]);
      }
      advance(seg.steps.back());
    }
    track.loop_index.push_back(track.params.size());
    append(loop.points[k + 1], frames[k + 1]);
  }

  // γ_M and γ₀ carry the same coefficient map, so the closing pairing compares
  // the last frame with the first one directly.
  const Matching close = options.strategy == MatchStrategy::NearestMultiplier
                             ? match_multipliers(frames.back(), frames.front())
                             : match_eigenpairs(frames.back(), frames.front(), options.accept_overlap2);
  track.permutation.resize(n);
  for (std::size_t b = 0; b < n; ++b) track.permutation[b] = close.perm[cur[b]];
  return track;
}

BandTrack sweep_loop(const ParamPeriodicLODE& sys, const ParameterLoop& loop, const IntegratorConfig& integrator,
                     const SweepOptions& options) {
  auto frame_of = [&](const ParamPoint& p) { return frame_at(sys, p, integrator); };
  std::vector<EigenFrame> frames = parallel_map<EigenFrame>(
      loop.size(), options.threads, [&](std::size_t k) { return frame_of(loop.points[k]); });
  return track_frames(loop, std::move(frames), frame_of, sys.period(), options);
}

std::vector<int> BraidInvariant::nontrivial_lengths() const {
  std::vector<int> out;
  for (const auto& c : cycles)
    if (c.size() > 1) out.push_back(static_cast<int>(c.size()));
  std::sort(out.rbegin(), out.rend());
  return out;
}

int off_circle_transitions(const BandTrack& track, double tol) {
  auto off = [&](std::size_t k) {
    int count = 0;
    for (const auto& band : track.multiplier_paths) count += std::abs(std::abs(band[k]) - 1.0) > tol;
    return count;
  };
  int transitions = 0;
  for (std::size_t k = 0; k + 1 < track.samples(); ++k) transitions += off(k) != off(k + 1);
  return transitions;
}

BraidInvariant braid_invariant(const std::vector<int>& permutation) {
  const std::size_t n = permutation.size();
  std::vector<bool> seen(n, false);
  for (int p : permutation)
    if (p < 0 || static_cast<std::size_t>(p) >= n || seen[p]) fail(ErrorCode::InvalidArgument, "not a permutation");
    else seen[p] = true;
  std::fill(seen.begin(), seen.end(), false);
  BraidInvariant inv;
  inv.band_cycle_length.assign(n, 1);
  for (std::size_t start = 0; start < n; ++start) {
    if (seen[start]) continue;
    std::vector<int> cycle;
    for (int j = static_cast<int>(start); !seen[j]; j = permutation[j]) {
      seen[j] = true;
      cycle.push_back(j);
    }
    for (int j : cycle) inv.band_cycle_length[j] = static_cast<int>(cycle.size());
    inv.order = std::lcm(inv.order, static_cast<long long>(cycle.size()));
    inv.cycles.push_back(std::move(cycle));
  }
  return inv;
}

}  // namespace floquet

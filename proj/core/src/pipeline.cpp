#include "floquet/pipeline.hpp"

#include "io/format.hpp"

namespace floquet {

namespace {

ParamPeriodicLODE make_system(const RunConfig& c, const ResonatorLattice& lat,
                              const std::shared_ptr<CapacitanceCache>& cache) {
  if (c.system == "constant") {
    const CMatrix a = c.constant_matrix;
    return ParamPeriodicLODE(static_cast<int>(a.rows()), c.constant_period, lat.reciprocal,
                             CoefficientMap([a](const ParamPoint&, double) { return a; }));
  }
  return hill_family(cache, c.modulation);
}

ParameterLoop make_loop(const RunConfig& c, const ResonatorLattice& lat) {
  if (c.path.waypoints.empty()) return symmetry_path(lat, c.path.steps_per_segment, c.path.gamma_offset, c.path.k_offset);
  std::vector<ParamPoint> pts;
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < c.path.waypoints.size(); ++i) {
    pts.push_back(c.path.waypoints[i]);
    labels.push_back("P" + std::to_string(i + 1));
  }
  return polyline_loop(pts, c.path.steps_per_segment, ParamPoint::Zero(2), labels);
}

}  // namespace

Pipeline::Pipeline(RunConfig config)
    : config_((validate_config(config), std::move(config))),
      lattice_(build_geometry(config_.geometry)),
      cache_(std::make_shared<CapacitanceCache>(lattice_, config_.capacitance, config_.cache_dir)),
      system_(make_system(config_, lattice_, cache_)),
      loop_(make_loop(config_, lattice_)) {}

ParamPoint Pipeline::reference_alpha() const {
  if (config_.reference_alpha) return *config_.reference_alpha;
  const SymmetryPoints p = symmetry_points(lattice_);
  return 0.5 * (p.gamma + p.K);
}

BandTrack Pipeline::sweep() const {
  SweepOptions opts = config_.tracking;
  opts.threads = config_.threads;
  BandTrack track = sweep_loop(system_, loop_, config_.integrator, opts);
  cache_->flush();
  return track;
}

TypeIIbResult Pipeline::type_IIb_at(const ParamPoint& alpha) const {
  const FundamentalPath path = integrate_fundamental(system_, alpha, config_.integrator);
  const FloquetDecomposition d = decompose(path, system_.period(), nullptr, config_.cond_limit);
  cache_->flush();
  return type_IIb(d.P_path, d.F, trace_integral(system_, path).back(), system_.period());
}

InvariantReport Pipeline::invariants(const BandTrack& track) const {
  const ParamPoint alpha = reference_alpha();
  std::map<std::string, std::string> meta;
  meta["config_hash"] = config_hash(config_);
  meta["system"] = config_.system;
  meta["loop_points"] = std::to_string(loop_.size());
  meta["samples"] = std::to_string(track.samples());
  meta["steps_per_segment"] = std::to_string(config_.path.steps_per_segment);
  meta["gamma_offset"] = detail::fmt17(config_.path.gamma_offset);
  meta["k_offset"] = detail::fmt17(config_.path.k_offset);
  meta["time_steps"] = std::to_string(config_.integrator.steps);
  meta["quad_points"] = std::to_string(config_.capacitance.quad_points);
  meta["lattice_sum_cutoff"] = detail::fmt17(config_.capacitance.cutoff);
  meta["refinements"] = std::to_string(track.refinement_log.size());
  meta["min_overlap2"] = detail::fmt17(track.min_overlap2);
  meta["min_gap"] = detail::fmt17(track.min_gap);
  meta["max_cond"] = detail::fmt17(track.max_cond);
  meta["off_circle_transitions"] = std::to_string(off_circle_transitions(track));
  meta["matching"] = config_.tracking.strategy == MatchStrategy::EigenvectorOverlap ? "overlap" : "nearest";
  return assemble_report(track, type_IIb_at(alpha), alpha, 1, std::move(meta));
}

}  // namespace floquet

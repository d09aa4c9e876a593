#pragma once

#include <memory>

#include "floquet/io/config.hpp"
#include "floquet/invariants.hpp"

namespace floquet {

/// System, loop and capacitance cache assembled from a RunConfig.
class Pipeline {
 public:
  explicit Pipeline(RunConfig config);

  const RunConfig& config() const { return config_; }
  const ResonatorLattice& lattice() const { return lattice_; }
  const ParamPeriodicLODE& system() const { return system_; }
  const ParameterLoop& loop() const { return loop_; }
  const std::shared_ptr<CapacitanceCache>& cache() const { return cache_; }

  /// Reference α for Type II.b: the configured value or the midpoint of Γ–K.
  ParamPoint reference_alpha() const;

  BandTrack sweep() const;
  TypeIIbResult type_IIb_at(const ParamPoint& alpha) const;
  InvariantReport invariants(const BandTrack& track) const;

 private:
  RunConfig config_;
  ResonatorLattice lattice_;
  std::shared_ptr<CapacitanceCache> cache_;
  ParamPeriodicLODE system_;
  ParameterLoop loop_;
};

}  // namespace floquet

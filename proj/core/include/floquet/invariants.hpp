#pragma once

#include <map>
#include <string>
#include <vector>

#include "floquet/tracking.hpp"

namespace floquet {

/// Winding of a closed sequence around 0: the sum of principal phase
/// increments over 2π. Throws Undersampled on an increment of modulus ≥ π,
/// NonClosed if the ends differ by more than `closure_tol` (relative), and
/// NotConverged if the sum is more than 0.1 away from an integer.
int winding_number(const std::vector<cplx>& samples, double closure_tol = 1e-8);

struct CompositeWinding {
  std::vector<int> bands;  // the braid cycle, in traversal order
  int winding = 0;
};

/// Winding of every braid cycle's concatenated band (closed over the
/// sublattice on which that cycle returns to itself).
std::vector<CompositeWinding> type_IIa(const BandTrack& track);

/// Winding of α ↦ det X_α(T) along the loop.
int determinant_winding(const BandTrack& track);

struct TypeIIbResult {
  int winding = 0;         // winding of det P / |det P| over [0, T]
  int liouville = 0;       // (Im ∫ tr A − T Im tr F) / 2π
  double residue = 0.0;    // distance of the Liouville value from its integer
};

/// Type II.b winding checked against the Liouville integer. `trace_integral_T`
/// is ∫₀ᵀ tr A. Throws OracleMismatch when the two integers differ.
TypeIIbResult type_IIb(const std::vector<CMatrix>& P_path, const CMatrix& F, cplx trace_integral_T,
                       double period);

struct InvariantReport {
  BraidInvariant type_Ia;
  std::string type_Ib;
  std::vector<CompositeWinding> type_IIa;
  int det_winding = 0;
  TypeIIbResult type_IIb;
  std::vector<double> type_IIb_alpha;  // reference parameter of type_IIb
  std::string su_part;
  std::map<std::string, std::string> metadata;
};

/// Collects the component results. `param_dim` selects the triviality notes.
InvariantReport assemble_report(const BandTrack& track, const TypeIIbResult& iib, const ParamPoint& iib_alpha,
                                int param_dim, std::map<std::string, std::string> metadata = {});

}  // namespace floquet

#include "floquet/invariants.hpp"

#include <cmath>
#include <string>

namespace floquet {

int winding_number(const std::vector<cplx>& samples, double closure_tol) {
  if (samples.size() < 2) fail(ErrorCode::InvalidArgument, "winding needs at least two samples");
  for (const cplx& z : samples)
    if (z == cplx(0.0) || !std::isfinite(z.real()) || !std::isfinite(z.imag()))
      fail(ErrorCode::InvalidArgument, "winding samples must be finite and nonzero");
  const cplx first = samples.front();
  const cplx last = samples.back();
  if (std::abs(last - first) > closure_tol * std::max(std::abs(first), std::abs(last)))
    fail(ErrorCode::NonClosed, "sequence endpoints differ by " + std::to_string(std::abs(last - first)));
  double total = 0.0;
  for (std::size_t k = 1; k < samples.size(); ++k) {
    const double step = std::arg(samples[k] / samples[k - 1]);
    if (std::abs(step) >= kPi * (1.0 - 1e-12))
      fail(ErrorCode::Undersampled, "phase increment of " + std::to_string(step) + " at sample " + std::to_string(k));
    total += step;
  }
  const double turns = total / kTwoPi;
  const double rounded = std::round(turns);
  if (std::abs(turns - rounded) >= 0.1)
    fail(ErrorCode::NotConverged, "winding residue " + std::to_string(turns - rounded) + " too large");
  return static_cast<int>(rounded);
}

std::vector<CompositeWinding> type_IIa(const BandTrack& track) {
  const BraidInvariant braid = braid_invariant(track);
  std::vector<CompositeWinding> out;
  for (const auto& cycle : braid.cycles) {
    std::vector<cplx> composite;
    for (int b : cycle) {
      const auto& path = track.multiplier_paths[b];
      composite.insert(composite.end(), composite.empty() ? path.begin() : path.begin() + 1, path.end());
    }
    out.push_back({cycle, winding_number(composite)});
  }
  return out;
}

int determinant_winding(const BandTrack& track) { return winding_number(track.det_path); }

TypeIIbResult type_IIb(const std::vector<CMatrix>& P_path, const CMatrix& F, cplx trace_integral_T, double period) {
  std::vector<cplx> det;
  det.reserve(P_path.size());
  for (const CMatrix& p : P_path) det.push_back(p.determinant());
  TypeIIbResult r;
  r.winding = winding_number(det, 1e-8);
  const double value = (trace_integral_T.imag() - period * F.trace().imag()) / kTwoPi;
  r.liouville = static_cast<int>(std::lround(value));
  r.residue = std::abs(value - r.liouville);
  if (r.residue >= 0.1 || r.winding != r.liouville)
    fail(ErrorCode::OracleMismatch, "det P winding " + std::to_string(r.winding) + " but Liouville value " +
                                        std::to_string(value));
  return r;
}

InvariantReport assemble_report(const BandTrack& track, const TypeIIbResult& iib, const ParamPoint& iib_alpha,
                                int param_dim, std::map<std::string, std::string> metadata) {
  InvariantReport r;
  r.type_Ia = braid_invariant(track);
  r.type_Ib = param_dim == 1 ? "trivial (d=1)" : "not computed (d>=2)";
  r.type_IIa = type_IIa(track);
  r.det_winding = determinant_winding(track);
  int sum = 0;
  for (const auto& w : r.type_IIa) sum += w.winding;
  if (sum != r.det_winding)
    fail(ErrorCode::OracleMismatch, "band windings sum to " + std::to_string(sum) + " but det X(T) winds " +
                                        std::to_string(r.det_winding));
  r.type_IIb = iib;
  r.type_IIb_alpha.assign(iib_alpha.data(), iib_alpha.data() + iib_alpha.size());
  r.su_part = param_dim == 1 ? "trivial (d=1)" : "not computed (d>=2)";
  r.metadata = std::move(metadata);
  return r;
}

}  // namespace floquet

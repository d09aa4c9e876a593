// Acceptance suite: one PASS/FAIL line per criterion, then a summary.
// Exits 0 once every criterion has been evaluated; --strict makes any FAIL
// exit 1.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "floquet/capacitance.hpp"
#include "floquet/error.hpp"
#include "floquet/hill.hpp"
#include "floquet/honeycomb.hpp"
#include "floquet/invariants.hpp"
#include "floquet/io/config.hpp"
#include "floquet/normal_form.hpp"
#include "floquet/pipeline.hpp"
#include "floquet/synthetic.hpp"
#include "floquet/tracking.hpp"
#include "oracles.hpp"

using namespace floquet;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

const char* kCacheDir = "acceptance-cache";

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

std::string cycles_text(const BraidInvariant& b) {
  std::string s;
  for (const auto& c : b.cycles) {
    if (c.size() < 2) continue;
    s += '(';
    for (std::size_t i = 0; i < c.size(); ++i) s += (i ? " " : "") + std::to_string(c[i] + 1);
    s += ')';
  }
  return s.empty() ? "identity" : s;
}

ParamPoint at(double x) { return ParamPoint::Constant(1, x); }

// ---------------------------------------------------------------------------
// Honeycomb demo runs, shared between criteria.

struct DemoRun {
  BandTrack track;
  BraidInvariant braid;
  InvariantReport report;
  double seconds = 0.0;
};

struct Variant {
  std::optional<int> steps;
  std::optional<double> gamma_offset;
  std::optional<int> time_steps;

  std::string key() const {
    std::ostringstream os;
    os << steps.value_or(0) << '/' << gamma_offset.value_or(0.0) << '/' << time_steps.value_or(0);
    return os.str();
  }
  std::string label() const {
    if (steps) return "steps " + std::to_string(*steps);
    if (gamma_offset) return "gamma_offset " + fmt(*gamma_offset);
    if (time_steps) return "time steps " + std::to_string(*time_steps);
    return "base";
  }
};

const DemoRun& demo_run(const std::string& which, const Variant& v = {}) {
  static std::map<std::string, DemoRun> memo;
  const std::string key = which + ':' + v.key();
  auto it = memo.find(key);
  if (it != memo.end()) return it->second;
  RunConfig c = demo_config(which);
  c.cache_dir = kCacheDir;
  if (v.steps) c.path.steps_per_segment = *v.steps;
  if (v.gamma_offset) c.path.gamma_offset = *v.gamma_offset;
  if (v.time_steps) c.integrator.steps = *v.time_steps;
  validate_config(c);
  const auto start = std::chrono::steady_clock::now();
  const Pipeline pipeline(c);
  DemoRun run;
  run.track = pipeline.sweep();
  run.braid = braid_invariant(run.track);
  run.report = pipeline.invariants(run.track);
  run.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::fprintf(stderr, "  [%s %s] %s, order %lld, %.0f s\n", which.c_str(), v.label().c_str(),
               cycles_text(run.braid).c_str(), static_cast<long long>(run.braid.order), run.seconds);
  return memo.emplace(key, std::move(run)).first->second;
}

// ---------------------------------------------------------------------------

Outcome weak_braid() {
  const DemoRun& r = demo_run("weak");
  const bool pass = r.braid.nontrivial_lengths() == std::vector<int>{2} && r.braid.order == 2;
  return {pass, "cycles " + cycles_text(r.braid) + ", order " + std::to_string(r.braid.order) +
                    " (expected one 2-cycle, order 2); min gap " + fmt(r.track.min_gap) +
                    ", off-circle transitions " + std::to_string(off_circle_transitions(r.track))};
}

Outcome strong_braid() {
  const DemoRun& r = demo_run("strong");
  const std::vector<int> lengths = r.braid.nontrivial_lengths();
  const bool has3 = std::find(lengths.begin(), lengths.end(), 3) != lengths.end();
  const bool has4 = std::find(lengths.begin(), lengths.end(), 4) != lengths.end();
  const bool pass = has3 && has4 && r.braid.order == 12;
  return {pass, "cycles " + cycles_text(r.braid) + ", order " + std::to_string(r.braid.order) +
                    " (expected a 3-cycle and a 4-cycle, order 12); min gap " + fmt(r.track.min_gap) +
                    ", off-circle transitions " + std::to_string(off_circle_transitions(r.track))};
}

Outcome braid_stability() {
  bool pass = true;
  std::string detail;
  for (const std::string which : {"weak", "strong"}) {
    const RunConfig base_config = demo_config(which);
    const DemoRun& base = demo_run(which);
    const std::vector<Variant> variants = {
        {base_config.path.steps_per_segment * 2, std::nullopt, std::nullopt},
        {std::nullopt, 1e-2, std::nullopt},
        {std::nullopt, 1e-4, std::nullopt},
        {std::nullopt, std::nullopt, base_config.integrator.steps * 2},
    };
    int changed = 0;
    std::string which_changed;
    for (const Variant& v : variants) {
      try {
        const DemoRun& r = demo_run(which, v);
        if (r.braid.cycles != base.braid.cycles) {
          ++changed;
          which_changed += " " + v.label() + "->" + cycles_text(r.braid);
        }
      } catch (const Error& e) {
        ++changed;
        which_changed += " " + v.label() + "->" + std::string(e.name());
      }
    }
    pass = pass && changed == 0;
    if (!detail.empty()) detail += "; ";
    detail += which + " base " + cycles_text(base.braid) + ", " + std::to_string(changed) + "/4 variants differ" +
              which_changed;
  }
  return {pass, detail};
}

Outcome reconstruction() {
  double worst_recon = 0.0, worst_mult = 0.0, worst_ends = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + trial % 6;
    const double period = 0.5 + 0.25 * (trial % 5);
    const ParamPeriodicLODE sys = random_periodic_system(n, 7000 + trial, period);
    const FundamentalPath path = integrate_fundamental(sys, at(0.37 * trial));
    const FloquetDecomposition d = decompose(path, period);
    for (std::size_t k = 0; k < path.times.size(); k += 10)
      worst_recon =
          std::max(worst_recon, oracle::rel(d.P_path[k] * oracle::expm(path.times[k] * d.F), path.values[k]));
    for (std::size_t i = 0; i < d.exponents.size(); ++i)
      worst_mult = std::max(worst_mult, std::abs(std::exp(period * d.exponents[i]) - d.frame.multipliers[i]) /
                                            std::abs(d.frame.multipliers[i]));
    const CMatrix id = CMatrix::Identity(n, n);
    worst_ends = std::max({worst_ends, oracle::rel(d.P_path.front(), id), oracle::rel(d.P_path.back(), id)});
  }
  const bool pass = worst_recon <= 1e-8 && worst_mult <= 1e-10 && worst_ends <= 1e-8;
  return {pass, "20 systems N<=6: max |X - P exp(tF)| " + fmt(worst_recon) + " (<=1e-8), |exp(T mu) - lambda| " +
                    fmt(worst_mult) + " (<=1e-10), |P(0|T) - I| " + fmt(worst_ends) + " (<=1e-8)"};
}

Outcome liouville() {
  double worst_liouville = 0.0, worst_det = 0.0;
  int iib_checked = 0, iib_equal = 0;
  auto note_iib = [&](const ParamPeriodicLODE& sys, const ParamPoint& gamma, std::optional<int> expected) {
    const FundamentalPath path = integrate_fundamental(sys, gamma);
    worst_liouville = std::max(worst_liouville, liouville_defect(sys, path));
    const FloquetDecomposition d = decompose(path, sys.period());
    ++iib_checked;
    try {
      const TypeIIbResult r = type_IIb(d.P_path, d.F, trace_integral(sys, path).back(), sys.period());
      if (r.winding == r.liouville && (!expected || r.winding == *expected)) ++iib_equal;
    } catch (const Error&) {
    }
  };
  for (int trial = 0; trial < 20; ++trial)
    note_iib(random_periodic_system(1 + trial % 6, 7000 + trial, 0.5 + 0.25 * (trial % 5)), at(0.37 * trial),
             std::nullopt);
  note_iib(mathieu_system(), at(0.0), std::nullopt);
  note_iib(scalar_winding_system(1.0), at(0.0), 1);
  note_iib(scalar_winding_system(2.5), at(0.0), 1);
  for (double a : {0.0, 1.0, 2.5}) {
    note_iib(synthetic_braid_system(), at(a), std::nullopt);
    for (int k = -2; k <= 2; ++k) note_iib(synthetic_winding_system(k), at(a), std::nullopt);
  }

  // Traceless Hill systems at five path points for each modulation.
  const ResonatorLattice lat = build_geometry();
  const SymmetryPoints sp = symmetry_points(lat);
  const std::vector<Vec2> points = {0.5 * sp.K, sp.K, 0.5 * (sp.K + sp.M), sp.M, 0.5 * sp.M};
  CapacitanceCache cache(lat, {}, kCacheDir);
  for (const std::string which : {"weak", "strong", "static"}) {
    const ModulationProfile mod = demo_config(which).modulation;
    for (const Vec2& alpha : points) {
      const ParamPeriodicLODE sys = hill_system(lat, cache.get(alpha), mod);
      const FundamentalPath path = integrate_fundamental(sys, ParamPoint::Zero(1));
      worst_liouville = std::max(worst_liouville, liouville_defect(sys, path));
      worst_det = std::max(worst_det, std::abs(monodromy(path).determinant() - 1.0));
    }
  }
  cache.flush();
  for (const std::string which : {"weak", "strong"}) {
    ++iib_checked;
    const TypeIIbResult& r = demo_run(which).report.type_IIb;
    if (r.winding == r.liouville) ++iib_equal;
  }
  const bool pass = worst_liouville <= 1e-6 && worst_det <= 1e-8 && iib_equal == iib_checked;
  return {pass, "det X(T) vs exp(int tr A) " + fmt(worst_liouville) + " (<=1e-6), Hill |det X(T) - 1| " +
                    fmt(worst_det) + " (<=1e-8), II.b == Liouville on " + std::to_string(iib_equal) + "/" +
                    std::to_string(iib_checked) + " (w=1 case included)"};
}

Outcome winding_consistency() {
  int checked = 0, consistent = 0;
  std::string detail;
  for (int k = -2; k <= 2; ++k) {
    const BandTrack t = sweep_loop(synthetic_winding_system(k), straight_loop(at(0.0), at(kTwoPi), 96));
    int sum = 0;
    for (const CompositeWinding& w : type_IIa(t)) sum += w.winding;
    ++checked;
    if (sum == determinant_winding(t) && type_IIa(t).front().winding == k) ++consistent;
  }
  for (const std::string which : {"weak", "strong"}) {
    const DemoRun& r = demo_run(which);
    int sum = 0;
    bool zero = r.report.det_winding == 0;
    for (const CompositeWinding& w : r.report.type_IIa) {
      sum += w.winding;
      zero = zero && w.winding == 0;
    }
    ++checked;
    if (sum == r.report.det_winding && zero) ++consistent;
    detail += ", " + which + " sum " + std::to_string(sum) + " det " + std::to_string(r.report.det_winding);
  }
  return {consistent == checked,
          "sum II.a == det winding on " + std::to_string(consistent) + "/" + std::to_string(checked) + detail};
}

Outcome synthetic_braid() {
  const BandTrack t = sweep_loop(synthetic_braid_system(), straight_loop(at(0.0), at(kTwoPi), 64));
  const BraidInvariant b = braid_invariant(t);
  const bool pass = b.nontrivial_lengths() == std::vector<int>{2} && b.order == 2;
  return {pass, "cycles " + cycles_text(b) + ", order " + std::to_string(b.order)};
}

Outcome capacitance_properties() {
  const ResonatorLattice lat = build_geometry();
  const SymmetryPoints sp = symmetry_points(lat);
  const std::vector<Vec2> points = {0.5 * sp.K, sp.K, 0.5 * (sp.K + sp.M), sp.M, 0.5 * sp.M};
  CapacitanceOptions opts;
  opts.convergence_tol = 1e-6;
  double herm = 0.0, conj = 0.0, conv = 0.0, min_ev = std::numeric_limits<double>::infinity();
  for (const Vec2& alpha : points) {
    const CapacitanceMatrix c = capacitance_matrix(lat, alpha, opts);
    const CMatrix m = capacitance_matrix(lat, -alpha).C;
    herm = std::max(herm, c.hermiticity_residual);
    conj = std::max(conj, (m - c.C.conjugate()).cwiseAbs().maxCoeff() / c.C.cwiseAbs().maxCoeff());
    conv = std::max(conv, c.convergence_delta);
    min_ev = std::min(min_ev, Eigen::SelfAdjointEigenSolver<CMatrix>(c.C).eigenvalues().minCoeff());
  }
  const bool pass = herm <= 1e-8 && conj <= 1e-8 && conv <= 1e-6 && min_ev >= -1e-8;
  return {pass, "5 path points: hermiticity " + fmt(herm) + " (<=1e-8), conjugation " + fmt(conj) +
                    " (<=1e-8), self-convergence " + fmt(conv) + " (<=1e-6), min eigenvalue " + fmt(min_ev) +
                    " (>=-1e-8)"};
}

Outcome static_limit() {
  RunConfig c = demo_config("static");
  c.cache_dir = kCacheDir;
  const Pipeline pipeline(c);
  const BandTrack t = pipeline.sweep();
  const InvariantReport r = pipeline.invariants(t);
  double worst = 0.0;
  for (const auto& band : t.multiplier_paths)
    for (const cplx& l : band) worst = std::max(worst, std::abs(std::abs(l) - 1.0));
  bool zero = r.det_winding == 0;
  for (const CompositeWinding& w : r.type_IIa) zero = zero && w.winding == 0;
  const bool pass = worst <= 1e-6 && r.type_Ia.order == 1 && zero;
  return {pass, "eps=0, K offset " + fmt(c.path.k_offset) + ": max ||lambda|-1| " + fmt(worst) +
                    " (<=1e-6), order " + std::to_string(r.type_Ia.order) + ", windings " +
                    (zero ? "all 0" : "nonzero")};
}

}  // namespace

int main(int argc, char** argv) {
  bool strict = false;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--strict") == 0) {
      strict = true;
    } else {
      std::fprintf(stderr, "usage: acceptance [--strict]\n");
      return 2;
    }
  }

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"weak-modulation braid", weak_braid},
      {"strong-modulation braid", strong_braid},
      {"braid stability", braid_stability},
      {"Floquet reconstruction", reconstruction},
      {"Liouville oracles", liouville},
      {"winding consistency", winding_consistency},
      {"synthetic braid", synthetic_braid},
      {"capacitance properties", capacitance_properties},
      {"static limit", static_limit},
  };
  int passed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const Error& e) {
      o = {false, std::string("error ") + e.what()};
    } catch (const std::exception& e) {
      o = {false, std::string("exception ") + e.what()};
    }
    passed += o.pass;
    std::printf("%s %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("acceptance: %d/%zu passed\n", passed, criteria.size());
  return strict && passed != static_cast<int>(criteria.size()) ? 1 : 0;
}

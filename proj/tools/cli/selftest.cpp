#include "cli/selftest.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <ostream>

#include <unsupported/Eigen/MatrixFunctions>

#include "floquet/invariants.hpp"
#include "floquet/io/config.hpp"
#include "floquet/pipeline.hpp"
#include "floquet/synthetic.hpp"

namespace floquet::cli {

namespace {

double rel_diff(const CMatrix& a, const CMatrix& b) { return (a - b).norm() / std::max(1.0, b.norm()); }

SelftestCheck bound(std::string name, double value, double tolerance, std::string detail = {}) {
  return {std::move(name), std::isfinite(value) && value <= tolerance, value, tolerance, std::move(detail)};
}

SelftestCheck exact(std::string name, bool ok, std::string detail) {
  return {std::move(name), ok, ok ? 0.0 : 1.0, 0.0, std::move(detail)};
}

/// Runs `body`; a thrown error becomes a failed check carrying its message.
void guarded(std::vector<SelftestCheck>& out, const std::string& name,
             const std::function<void(std::vector<SelftestCheck>&)>& body) {
  try {
    body(out);
  } catch (const std::exception& e) {
    out.push_back({name, false, NAN, 0.0, e.what()});
  }
}

ParamPoint point(double x) { return ParamPoint::Constant(1, x); }

}  // namespace

std::vector<SelftestCheck> run_selftest(const SelftestOptions& options) {
  IntegratorConfig integ;
  if (options.reduced_precision) integ.steps = 16;
  IntegratorConfig fine = integ;
  fine.steps *= 2;

  std::vector<SelftestCheck> out;

  guarded(out, "constant-diagonal", [&](auto& o) {
    CMatrix a = CMatrix::Zero(3, 3);
    a.diagonal() << cplx(-0.3, 1.0), cplx(0.2, -0.5), cplx(0.0, 2.0);
    const CMatrix x = integrate_monodromy(constant_system(a, 1.5), point(0.0), integ);
    o.push_back(bound("constant-diagonal", rel_diff(x, CMatrix((1.5 * a).exp())), 1e-10));
  });

  guarded(out, "mathieu-step-halving", [&](auto& o) {
    const ParamPeriodicLODE sys = mathieu_system(0.1);
    const CMatrix x1 = integrate_monodromy(sys, point(0.0), integ);
    const CMatrix x2 = integrate_monodromy(sys, point(0.0), fine);
    o.push_back(bound("mathieu-step-halving", rel_diff(x1, x2), 1e-8));
    o.push_back(bound("mathieu-det", std::abs(x2.determinant() - 1.0), 1e-10));
  });

  guarded(out, "liouville-random", [&](auto& o) {
    double worst = 0.0;
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
      const ParamPeriodicLODE sys = random_periodic_system(4, seed);
      worst = std::max(worst, liouville_defect(sys, integrate_fundamental(sys, point(0.7), integ)));
    }
    o.push_back(bound("liouville-random", worst, 1e-6));
  });

  guarded(out, "reconstruction-random", [&](auto& o) {
    const ParamPeriodicLODE sys = random_periodic_system(4, 11);
    const FundamentalPath path = integrate_fundamental(sys, point(0.3), integ);
    const FloquetDecomposition d = decompose(path, sys.period());
    const std::vector<CMatrix> p_expm = lyapunov_transform_expm(path, d.F);
    const CMatrix id = CMatrix::Identity(4, 4);
    double routes = 0.0, recon = 0.0, mult = 0.0;
    for (std::size_t k = 0; k < path.times.size(); ++k) {
      routes = std::max(routes, rel_diff(d.P_path[k], p_expm[k]));
      recon = std::max(recon, rel_diff(CMatrix(d.P_path[k] * (path.times[k] * d.F).exp()), path.values[k]));
    }
    for (std::size_t n = 0; n < d.exponents.size(); ++n)
      mult = std::max(mult, std::abs(std::exp(sys.period() * d.exponents[n]) - d.frame.multipliers[n]));
    o.push_back(bound("reconstruction-random", recon, 1e-8));
    o.push_back(bound("lyapunov-routes", routes, 1e-8));
    o.push_back(bound("lyapunov-periodic", rel_diff(d.P_path.back(), id), 1e-8));
    o.push_back(bound("exponent-multiplier", mult, 1e-10));
  });

  guarded(out, "synthetic-braid", [&](auto& o) {
    const ParamPeriodicLODE sys = synthetic_braid_system();
    const BandTrack track = sweep_loop(sys, straight_loop(point(0.0), point(kTwoPi), 64), integ);
    const BraidInvariant braid = braid_invariant(track);
    const bool ok = braid.order == 2 && braid.nontrivial_lengths() == std::vector<int>{2};
    o.push_back(exact("synthetic-braid", ok, "order " + std::to_string(braid.order)));
  });

  guarded(out, "winding-grid", [&](auto& o) {
    bool ok = true;
    std::string detail;
    for (int k = -2; k <= 2; ++k) {
      std::vector<cplx> samples;
      for (int j = 0; j <= 64; ++j) samples.push_back(std::polar(1.0 + 0.3 * std::cos(j * kTwoPi / 64), k * j * kTwoPi / 64));
      const int w = winding_number(samples);
      ok = ok && w == k;
      detail += (detail.empty() ? "" : " ") + std::to_string(w);
    }
    o.push_back(exact("winding-grid", ok, detail));
  });

  guarded(out, "winding-systems", [&](auto& o) {
    bool ok = true;
    std::string detail;
    for (int k = -2; k <= 2; ++k) {
      const BandTrack track = sweep_loop(synthetic_winding_system(k), straight_loop(point(0.0), point(kTwoPi), 96), integ);
      int sum = 0;
      bool bands_ok = true;
      for (const CompositeWinding& c : type_IIa(track)) {
        sum += c.winding;
        const int expected = c.bands.front() == 0 ? k : -k;  // band 0 has |λ| = 2
        bands_ok = bands_ok && c.winding == expected;
      }
      ok = ok && bands_ok && sum == determinant_winding(track);
      detail += (detail.empty() ? "" : " ") + std::to_string(k) + ":" + std::to_string(sum);
    }
    o.push_back(exact("winding-systems", ok, detail));
  });

  guarded(out, "type-IIb-liouville", [&](auto& o) {
    const ParamPeriodicLODE sys = scalar_winding_system(1.0);
    const FundamentalPath path = integrate_fundamental(sys, point(0.0), integ);
    FloquetDecomposition d = decompose(path, sys.period());
    if (options.inject_branch_fault) {
      std::vector<cplx> shifted = d.exponents;
      shifted[0] += cplx(0.0, kTwoPi / sys.period());
      d.F = floquet_exponent_matrix(d.frame, shifted, sys.period());
    }
    const TypeIIbResult r = type_IIb(d.P_path, d.F, trace_integral(sys, path).back(), sys.period());
    o.push_back(exact("type-IIb-liouville", r.winding == 1 && r.liouville == 1,
                      "winding " + std::to_string(r.winding) + ", liouville " + std::to_string(r.liouville)));
  });

  guarded(out, "type-IIb-random", [&](auto& o) {
    const ParamPeriodicLODE sys = random_periodic_system(3, 5, 1.0, 2.0);
    const FundamentalPath path = integrate_fundamental(sys, point(1.1), integ);
    const FloquetDecomposition d = decompose(path, sys.period());
    const TypeIIbResult r = type_IIb(d.P_path, d.F, trace_integral(sys, path).back(), sys.period());
    o.push_back(bound("type-IIb-random", r.residue, 1e-6, "winding " + std::to_string(r.winding)));
  });

  guarded(out, "hill-traceless", [&](auto& o) {
    for (const char* which : {"weak", "static"}) {
      RunConfig config = demo_config(which);
      config.integrator = integ;
      const Pipeline pipeline(config);
      const Vec2 k = symmetry_points(pipeline.lattice()).K;
      const CMatrix x = integrate_monodromy(pipeline.system(), 0.5 * k, integ);
      if (std::string(which) == "weak") {
        o.push_back(bound("hill-traceless", std::abs(x.determinant() - 1.0), 1e-8));
      } else {
        const EigenFrame f = eig_monodromy(x);
        double worst = 0.0;
        for (const cplx& l : f.multipliers) worst = std::max(worst, std::abs(std::abs(l) - 1.0));
        o.push_back(bound("static-unit-circle", worst, 1e-6));
      }
    }
  });

  return out;
}

int print_selftest(const std::vector<SelftestCheck>& checks, std::ostream& out) {
  int failed = 0;
  for (const SelftestCheck& c : checks) {
    char line[256];
    if (c.tolerance > 0.0)
      std::snprintf(line, sizeof line, "%-4s %-24s %.3e <= %.1e", c.passed ? "ok" : "FAIL", c.name.c_str(), c.value,
                    c.tolerance);
    else
      std::snprintf(line, sizeof line, "%-4s %-24s", c.passed ? "ok" : "FAIL", c.name.c_str());
    out << line;
    if (!c.detail.empty()) out << "  " << c.detail;
    out << '\n';
    failed += c.passed ? 0 : 1;
  }
  out << (failed == 0 ? "all " + std::to_string(checks.size()) + " checks passed"
                      : std::to_string(failed) + " of " + std::to_string(checks.size()) + " checks failed")
      << '\n';
  return failed == 0 ? 0 : 1;
}

}  // namespace floquet::cli

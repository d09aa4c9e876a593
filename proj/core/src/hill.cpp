#include "floquet/hill.hpp"

#include <cmath>
#include <string>

namespace floquet {

TrigPolynomial TrigPolynomial::shifted_cosine(double eps, double phase) {
  // ε cos(Ωt + φ) = ε cos φ cos Ωt − ε sin φ sin Ωt
  return {1.0, {eps * std::cos(phase)}, {-eps * std::sin(phase)}};
}

double TrigPolynomial::value(double omega, double t) const {
  double v = constant;
  for (std::size_t m = 0; m < cos_coeffs.size(); ++m) v += cos_coeffs[m] * std::cos((m + 1) * omega * t);
  for (std::size_t m = 0; m < sin_coeffs.size(); ++m) v += sin_coeffs[m] * std::sin((m + 1) * omega * t);
  return v;
}

double TrigPolynomial::derivative(double omega, double t) const {
  double v = 0.0;
  for (std::size_t m = 0; m < cos_coeffs.size(); ++m) {
    const double w = (m + 1) * omega;
    v -= cos_coeffs[m] * w * std::sin(w * t);
  }
  for (std::size_t m = 0; m < sin_coeffs.size(); ++m) {
    const double w = (m + 1) * omega;
    v += sin_coeffs[m] * w * std::cos(w * t);
  }
  return v;
}

double TrigPolynomial::second_derivative(double omega, double t) const {
  double v = 0.0;
  for (std::size_t m = 0; m < cos_coeffs.size(); ++m) {
    const double w = (m + 1) * omega;
    v -= cos_coeffs[m] * w * w * std::cos(w * t);
  }
  for (std::size_t m = 0; m < sin_coeffs.size(); ++m) {
    const double w = (m + 1) * omega;
    v -= sin_coeffs[m] * w * w * std::sin(w * t);
  }
  return v;
}

void validate_modulation(const ModulationProfile& mod, int grid) {
  if (mod.inv_kappa.empty() || mod.inv_kappa.size() != mod.inv_rho.size())
    fail(ErrorCode::InvalidArgument, "modulation needs one κ and one ρ profile per resonator");
  if (!(mod.omega > 0.0)) fail(ErrorCode::InvalidArgument, "modulation frequency must be positive");
  if (!(mod.delta > 0.0)) fail(ErrorCode::InvalidArgument, "contrast parameter must be positive");
  for (std::size_t n = 0; n < mod.size(); ++n) {
    for (int k = 0; k < grid; ++k) {
      const double t = mod.period() * k / grid;
      if (!(mod.inv_kappa[n].value(mod.omega, t) > 0.0))
        fail(ErrorCode::InvalidArgument, "κ of resonator " + std::to_string(n + 1) + " is not positive");
      if (!(mod.inv_rho[n].value(mod.omega, t) > 0.0))
        fail(ErrorCode::InvalidArgument, "ρ of resonator " + std::to_string(n + 1) + " is not positive");
    }
    if (mod.unit_rho_at_zero && std::abs(mod.rho(n, 0.0) - 1.0) > 1e-12)
      fail(ErrorCode::InvalidArgument, "ρ of resonator " + std::to_string(n + 1) + " is not normalized at t = 0");
  }
}

ModulationProfile kappa_modulation(double omega, double delta, double eps, const std::vector<double>& phases) {
  ModulationProfile mod;
  mod.omega = omega;
  mod.delta = delta;
  for (double phi : phases) {
    mod.inv_kappa.push_back(TrigPolynomial::shifted_cosine(eps, phi));
    mod.inv_rho.push_back(TrigPolynomial{});
  }
  return mod;
}

HillCoefficients hill_coefficients(const ResonatorLattice& lat, const ModulationProfile& mod, double t) {
  const auto n = static_cast<Eigen::Index>(mod.size());
  if (static_cast<std::size_t>(n) != lat.size())
    fail(ErrorCode::InvalidArgument, "modulation and geometry disagree on the number of resonators");
  HillCoefficients h{RVector(n), RVector(n), RVector(n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    const double r = lat.resonators[i].radius;
    const double area = kPi * r * r;
    const double rho = mod.rho(i, t);
    const double kappa = mod.kappa(i, t);
    const double dn = mod.delta * rho;
    const double v = std::sqrt(kappa / rho);
    h.w1[i] = v * std::pow(dn, 1.5) / area;
    h.w2[i] = v / std::sqrt(dn);
    // δₙvₙ² = δκₙ, so W₃ = κ''/(2κ) − (3/4)(κ'/κ)². With p = 1/κ this is
    // −p''/(2p) + (p'/p)²/4.
    const TrigPolynomial& p = mod.inv_kappa[i];
    const double pv = p.value(mod.omega, t);
    const double d1 = p.derivative(mod.omega, t) / pv;
    const double d2 = p.second_derivative(mod.omega, t) / pv;
    h.w3[i] = -0.5 * d2 + 0.25 * d1 * d1;
  }
  return h;
}

CMatrix hill_matrix(const ResonatorLattice& lat, const CMatrix& C, const ModulationProfile& mod, double t) {
  const HillCoefficients h = hill_coefficients(lat, mod, t);
  CMatrix m = h.w1.asDiagonal() * C * h.w2.asDiagonal();
  m.diagonal() += h.w3.cast<cplx>();
  return m;
}

namespace {

TimeCoefficient companion(const ResonatorLattice& lat, CMatrix C, const ModulationProfile& mod) {
  const auto n = static_cast<Eigen::Index>(mod.size());
  return [lat, C = std::move(C), mod, n](double t, CMatrix& out) {
    out.setZero(2 * n, 2 * n);
    out.topRightCorner(n, n).setIdentity();
    out.bottomLeftCorner(n, n) = -hill_matrix(lat, C, mod, t);
  };
}

void check_sizes(const ResonatorLattice& lat, const CMatrix& C, const ModulationProfile& mod) {
  validate_modulation(mod);
  if (lat.size() != mod.size() || C.rows() != static_cast<Eigen::Index>(lat.size()) || C.cols() != C.rows())
    fail(ErrorCode::InvalidArgument, "capacitance, geometry and modulation sizes disagree");
}

}  // namespace

ParamPeriodicLODE hill_system(const ResonatorLattice& lat, const CapacitanceMatrix& C, const ModulationProfile& mod) {
  check_sizes(lat, C.C, mod);
  const int n = static_cast<int>(mod.size());
  TimeCoefficient coeff = companion(lat, C.C, mod);
  return ParamPeriodicLODE(2 * n, mod.period(), RMatrix::Identity(1, 1),
                           CoefficientFactory([coeff](const ParamPoint&) { return coeff; }));
}

ParamPeriodicLODE hill_family(std::shared_ptr<CapacitanceCache> cache, const ModulationProfile& mod) {
  if (!cache) fail(ErrorCode::InvalidArgument, "hill_family needs a capacitance cache");
  validate_modulation(mod);
  if (cache->lattice().size() != mod.size())
    fail(ErrorCode::InvalidArgument, "modulation and geometry disagree on the number of resonators");
  const int n = static_cast<int>(mod.size());
  return ParamPeriodicLODE(2 * n, mod.period(), cache->lattice().reciprocal,
                           CoefficientFactory([cache, mod](const ParamPoint& alpha) {
                             if (alpha.size() != 2) fail(ErrorCode::InvalidArgument, "quasi-momentum must be 2D");
                             const CapacitanceMatrix c = cache->get(Vec2(alpha[0], alpha[1]));
                             return companion(cache->lattice(), c.C, mod);
                           }));
}

ParamPeriodicLODE hill_system_first_order(const ResonatorLattice& lat, const CapacitanceMatrix& C,
                                          const ModulationProfile& mod) {
  check_sizes(lat, C.C, mod);
  const auto n = static_cast<Eigen::Index>(mod.size());
  TimeCoefficient coeff = [lat, C = C.C, mod, n](double t, CMatrix& out) {
    out.setZero(2 * n, 2 * n);
    for (Eigen::Index i = 0; i < n; ++i) {
      out(i, n + i) = mod.delta * mod.kappa(i, t);
      const double r = lat.resonators[i].radius;
      const double dn = mod.delta * mod.rho(i, t);
      for (Eigen::Index j = 0; j < n; ++j) {
        const double dm = mod.delta * mod.rho(j, t);
        out(n + i, j) = -(dn / (kPi * r * r)) * C(i, j) / dm;
      }
    }
  };
  return ParamPeriodicLODE(static_cast<int>(2 * n), mod.period(), RMatrix::Identity(1, 1),
                           CoefficientFactory([coeff](const ParamPoint&) { return coeff; }));
}

namespace {
constexpr double kDemoOmega = 0.2;
constexpr double kDemoDelta = 1.0 / 9000.0;
}  // namespace

ModulationProfile demo_weak() {
  const double third = kTwoPi / 3.0;
  return kappa_modulation(kDemoOmega, kDemoDelta, 0.001, {0.0, third, 2 * third, 0.0, third, 2 * third});
}

ModulationProfile demo_strong() {
  const double third = kTwoPi / 3.0;
  const std::vector<double> phases{0.0, third, 2 * third, third, 0.0, 2 * third};
  ModulationProfile mod = kappa_modulation(kDemoOmega, kDemoDelta, 0.5, phases);
  for (std::size_t n = 0; n < phases.size(); ++n) mod.inv_rho[n] = TrigPolynomial::shifted_cosine(-0.3, phases[n]);
  // ρₙ(t) = 1/(1 − 0.3 cos(Ωt + φₙ)) is not 1 at t = 0.
  mod.unit_rho_at_zero = false;
  return mod;
}

}  // namespace floquet

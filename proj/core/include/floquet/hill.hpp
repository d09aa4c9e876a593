#pragma once

#include <memory>
#include <vector>

#include "floquet/capacitance.hpp"

namespace floquet {

/// p(t) = c₀ + Σₘ (aₘ cos(mΩt) + bₘ sin(mΩt)), m = 1, 2, …
struct TrigPolynomial {
  double constant = 1.0;
  std::vector<double> cos_coeffs;
  std::vector<double> sin_coeffs;

  /// 1 + ε cos(Ωt + φ).
  static TrigPolynomial shifted_cosine(double eps, double phase);

  double value(double omega, double t) const;
  double derivative(double omega, double t) const;
  double second_derivative(double omega, double t) const;
};

/// Per-resonator κₙ(t) = 1 / inv_kappa[n](t) and ρₙ(t) = 1 / inv_rho[n](t).
struct ModulationProfile {
  std::vector<TrigPolynomial> inv_kappa;
  std::vector<TrigPolynomial> inv_rho;
  double omega = 0.2;
  double delta = 1.0 / 9000.0;
  /// Require ρₙ(0) = 1 when validating.
  bool unit_rho_at_zero = true;

  double period() const { return kTwoPi / omega; }
  std::size_t size() const { return inv_kappa.size(); }
  double kappa(std::size_t n, double t) const { return 1.0 / inv_kappa[n].value(omega, t); }
  double rho(std::size_t n, double t) const { return 1.0 / inv_rho[n].value(omega, t); }
};

/// Positivity of κₙ and ρₙ on a fine grid over one period, and ρₙ(0) = 1 when
/// requested. Throws InvalidArgument.
void validate_modulation(const ModulationProfile& mod, int grid = 4096);

/// Uniform κ modulation 1/(1 + ε cos(Ωt + φₙ)) with ρ unmodulated.
ModulationProfile kappa_modulation(double omega, double delta, double eps, const std::vector<double>& phases);

struct HillCoefficients {
  RVector w1, w2, w3;
};

/// Diagonals of W₁ (vδ^{3/2}/|D|), W₂ (v/√δ) and W₃ at time t, with
/// δₙ = δ ρₙ(t) and vₙ = √(κₙ/ρₙ).
HillCoefficients hill_coefficients(const ResonatorLattice& lat, const ModulationProfile& mod, double t);

/// M(t) = W₁ C W₂ + W₃.
CMatrix hill_matrix(const ResonatorLattice& lat, const CMatrix& C, const ModulationProfile& mod, double t);

/// Companion first-order system Y' = [[0, I], [−M(t), 0]] Y at fixed α (the
/// parameter space is a single point; any γ evaluates the same C).
ParamPeriodicLODE hill_system(const ResonatorLattice& lat, const CapacitanceMatrix& C, const ModulationProfile& mod);

/// The Hill system as a family over quasi-momenta α ∈ ℝ² with the reciprocal
/// lattice as parameter lattice; capacitance matrices come from `cache`.
ParamPeriodicLODE hill_family(std::shared_ptr<CapacitanceCache> cache, const ModulationProfile& mod);

/// The same dynamics in the variables uₙ = δₙ yₙ and pₙ = uₙ'/(δ κₙ):
/// u' = δ κ p, p' = −(δₙ/|D|) (C y)ₙ. Multipliers agree with hill_system;
/// used as an independent route in tests.
ParamPeriodicLODE hill_system_first_order(const ResonatorLattice& lat, const CapacitanceMatrix& C,
                                          const ModulationProfile& mod);

ModulationProfile demo_weak();
ModulationProfile demo_strong();

}  // namespace floquet

#pragma once

#include <cstdint>
#include <vector>

#include "floquet/lode.hpp"

namespace floquet {

/// A(γ, t) ≡ a. Parameter lattice 2π on ℝ.
ParamPeriodicLODE constant_system(const CMatrix& a, double period);

/// x'' + (1 + q cos t) x = 0 written as a 2×2 first-order system, T = 2π.
ParamPeriodicLODE mathieu_system(double q = 0.1);

/// Scalar a(t) = i (2π/T)(1 − cos(2πt/T)): X(T) = 1 while det P winds once.
ParamPeriodicLODE scalar_winding_system(double period = 1.0);

/// Smooth random periodic system A(γ, t) = A₀ + cos γ A₁ + cos(2πt/T) A₂ +
/// sin(2πt/T + γ) A₃ with entries of size ~scale/√N.
ParamPeriodicLODE random_periodic_system(int n, std::uint64_t seed, double period = 1.0, double scale = 0.5);

/// Piecewise-exponential system with T = 1 and lattice 2π on ℝ:
///   X_α(T) = [[0, 1, 0], [e^{iα}, 0, 0], [0, 0, 2e^{−iα}]].
/// Two multipliers ±e^{iα/2} swap after one loop; the third compensates the
/// determinant winding so that A stays continuous and 2π-periodic in α.
ParamPeriodicLODE synthetic_braid_system();

/// X_α(T) = diag(2 e^{ikα}, e^{−ikα}) built from α-periodic generators.
/// Band windings (k, −k).
ParamPeriodicLODE synthetic_winding_system(int k);

/// X_α(T) = diag(e^{iα}, 1/2, 2 e^{−iα}), windings (1, 0, −1).
ParamPeriodicLODE synthetic_unit_winding_system();

/// sys with A replaced by S A S⁻¹ (fixed S).
ParamPeriodicLODE conjugated_system(const ParamPeriodicLODE& sys, const CMatrix& s);

}  // namespace floquet

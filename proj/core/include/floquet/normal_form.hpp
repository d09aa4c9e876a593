#pragma once

#include <optional>
#include <vector>

#include "floquet/lode.hpp"

namespace floquet {

/// Diagonalization X(T) = V diag(λ) V⁻¹ of a monodromy matrix.
struct EigenFrame {
  std::vector<cplx> multipliers;
  CMatrix eigvecs;  // unit-norm columns, first significant entry real positive
  double cond = 1.0;
  double residual = 0.0;  // ‖X V − V diag(λ)‖ / ‖X‖
};

inline constexpr double kDefaultCondLimit = 1e8;

/// Eigenpairs sorted by |λ| descending, then arg λ ascending (|λ| ties within
/// 1e-9 relative). Throws NearDefective if cond(V) exceeds `cond_limit`.
EigenFrame eig_monodromy(const CMatrix& m, double cond_limit = kDefaultCondLimit);

/// Same decomposition without the conditioning check.
EigenFrame eig_monodromy_unchecked(const CMatrix& m);

/// exp(Tμ) = λ. With `previous`, the branch nearest to it; otherwise the
/// principal branch Im(Tμ) ∈ (−π, π].
cplx choose_log_branch(cplx lambda, std::optional<cplx> previous, double period);

/// The integer n with Tμ = Log λ + 2πi n.
int branch_offset(cplx mu, cplx lambda, double period);

/// F = V diag(μ) V⁻¹.
CMatrix floquet_exponent_matrix(const EigenFrame& frame, const std::vector<cplx>& exponents,
                                double period, double cond_limit = kDefaultCondLimit);

/// P(t_k) = X(t_k) V diag(exp(−t_k μ)) V⁻¹ at every sample of `path`.
std::vector<CMatrix> lyapunov_transform(const FundamentalPath& path, const EigenFrame& frame,
                                        const std::vector<cplx>& exponents);

/// P(t_k) = X(t_k) exp(−t_k F) with an explicit matrix exponential; test route.
std::vector<CMatrix> lyapunov_transform_expm(const FundamentalPath& path, const CMatrix& F);

struct FloquetDecomposition {
  EigenFrame frame;
  std::vector<cplx> exponents;
  CMatrix F;
  std::vector<double> times;
  std::vector<CMatrix> P_path;
  std::vector<int> branch_offsets;
};

/// Full normal form of one fundamental path. `previous` (paired with the
/// frame columns) selects continuous branches along a sweep.
FloquetDecomposition decompose(const FundamentalPath& path, double period,
                               const std::vector<cplx>* previous = nullptr,
                               double cond_limit = kDefaultCondLimit);

/// ‖F − (1/T)∫₀ᵀ A dt‖ / max(1, ‖F‖). Only small when A(t) commutes with itself
/// at different times.
double mean_coefficient_defect(const ParamPeriodicLODE& sys, const ParamPoint& gamma,
                               const CMatrix& F, int samples = 2000);

}  // namespace floquet

#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "floquet/error.hpp"
#include "floquet/types.hpp"

namespace floquet {

/// A(γ, ·) for one fixed γ. Writes the N×N coefficient at time t into `out`
/// (already sized N×N by the caller).
using TimeCoefficient = std::function<void(double t, CMatrix& out)>;

/// Pointwise coefficient map (γ, t) ↦ A(γ, t).
using CoefficientMap = std::function<CMatrix(const ParamPoint& gamma, double t)>;

/// Staged coefficient map: per-γ setup (e.g. a capacitance solve) happens once
/// in the factory, the returned closure is evaluated at every time sample.
using CoefficientFactory = std::function<TimeCoefficient(const ParamPoint& gamma)>;

/// dX/dt = A(γ, t) X, with A periodic in t (period T) and in γ (lattice L).
class ParamPeriodicLODE {
 public:
  ParamPeriodicLODE(int dim, double period, RMatrix param_lattice, CoefficientMap coeff);
  ParamPeriodicLODE(int dim, double period, RMatrix param_lattice, CoefficientFactory factory);

  int dim() const noexcept { return dim_; }
  double period() const noexcept { return period_; }
  /// Columns generate the parameter lattice L.
  const RMatrix& param_lattice() const noexcept { return lattice_; }
  int param_dim() const noexcept { return static_cast<int>(lattice_.rows()); }

  TimeCoefficient bind(const ParamPoint& gamma) const;

 private:
  int dim_;
  double period_;
  RMatrix lattice_;
  CoefficientFactory factory_;
};

/// A(γ, t). Deterministic and side-effect free as long as the user map is.
CMatrix evaluate_coefficient(const ParamPeriodicLODE& sys, const ParamPoint& gamma, double t);

/// Largest entrywise deviation of A under γ ↦ γ + ℓ (ℓ a random lattice vector)
/// and t ↦ t + T, sampled at `samples` random points.
double periodicity_defect(const ParamPeriodicLODE& sys, int samples, std::uint64_t seed);

enum class IntegrationMethod { Rk4Fixed, DopAdaptive };

struct IntegratorConfig {
  IntegrationMethod method = IntegrationMethod::Rk4Fixed;
  int steps = 2000;        // fixed-step count; initial guess for the adaptive method
  double rel_tol = 1e-10;  // adaptive only
  double abs_tol = 1e-12;  // adaptive only
  int max_steps = 2'000'000;
};

struct StepStats {
  int accepted = 0;
  int rejected = 0;
  double min_step = 0.0;
  double max_step = 0.0;
  /// Local error estimate: the embedded error for Dormand–Prince, a
  /// step-doubling estimate taken on the first step for fixed RK4.
  double local_error = 0.0;
};

/// X_γ(t) on [0, T], stored at every accepted step.
struct FundamentalPath {
  std::vector<double> times;
  std::vector<CMatrix> values;
  ParamPoint param;
  StepStats step_stats;
};

FundamentalPath integrate_fundamental(const ParamPeriodicLODE& sys, const ParamPoint& gamma,
                                      const IntegratorConfig& config = {});

/// Same stepping as integrate_fundamental but keeps only X(T).
CMatrix integrate_monodromy(const ParamPeriodicLODE& sys, const ParamPoint& gamma,
                            const IntegratorConfig& config = {});

/// Propagates `initial` from t0 to t1 with the given fixed step count (RK4).
CMatrix propagate_rk4(const TimeCoefficient& coeff, const CMatrix& initial, double t0, double t1,
                      int steps);

const CMatrix& monodromy(const FundamentalPath& path);

/// ∫₀^{t_k} tr A(γ, s) ds at every stored time of `path`, integrated with
/// Simpson's rule on each step (the quadrature implied by RK4).
std::vector<cplx> trace_integral(const ParamPeriodicLODE& sys, const FundamentalPath& path);

/// max_k |det X(t_k) − exp(∫₀^{t_k} tr A)| / |exp(∫₀^{t_k} tr A)|.
double liouville_defect(const ParamPeriodicLODE& sys, const FundamentalPath& path);

}  // namespace floquet

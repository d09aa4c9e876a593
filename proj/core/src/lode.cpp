#include "floquet/lode.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <string>

namespace floquet {

ParamPeriodicLODE::ParamPeriodicLODE(int dim, double period, RMatrix param_lattice,
                                     CoefficientMap coeff)
    : ParamPeriodicLODE(dim, period, std::move(param_lattice),
                        CoefficientFactory([coeff = std::move(coeff)](const ParamPoint& gamma) {
                          return TimeCoefficient([coeff, gamma](double t, CMatrix& out) {
                            out = coeff(gamma, t);
                          });
                        })) {}

ParamPeriodicLODE::ParamPeriodicLODE(int dim, double period, RMatrix param_lattice,
                                     CoefficientFactory factory)
    : dim_(dim), period_(period), lattice_(std::move(param_lattice)), factory_(std::move(factory)) {
  if (dim_ < 1) fail(ErrorCode::InvalidArgument, "system dimension must be >= 1");
  if (!(period_ > 0.0) || !std::isfinite(period_))
    fail(ErrorCode::InvalidArgument, "time period must be positive");
  if (lattice_.rows() != lattice_.cols() || lattice_.rows() < 1 || lattice_.rows() > 2)
    fail(ErrorCode::InvalidArgument, "parameter lattice must be a d×d matrix with d in {1,2}");
  if (std::abs(lattice_.determinant()) < 1e-300)
    fail(ErrorCode::InvalidArgument, "parameter lattice is degenerate");
  if (!factory_) fail(ErrorCode::InvalidArgument, "empty coefficient map");
}

TimeCoefficient ParamPeriodicLODE::bind(const ParamPoint& gamma) const {
  if (gamma.size() != param_dim())
    fail(ErrorCode::InvalidArgument, "parameter point has dimension " +
                                         std::to_string(gamma.size()) + ", expected " +
                                         std::to_string(param_dim()));
  return factory_(gamma);
}

CMatrix evaluate_coefficient(const ParamPeriodicLODE& sys, const ParamPoint& gamma, double t) {
  CMatrix out(sys.dim(), sys.dim());
  sys.bind(gamma)(t, out);
  return out;
}

double periodicity_defect(const ParamPeriodicLODE& sys, int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_int_distribution<int> shift(-2, 2);
  const int d = sys.param_dim();
  double defect = 0.0;
  for (int s = 0; s < samples; ++s) {
    ParamPoint gamma(d);
    Eigen::VectorXd n(d);
    for (int i = 0; i < d; ++i) {
      gamma[i] = unit(rng) * sys.param_lattice().col(i).norm();
      n[i] = shift(rng);
    }
    const ParamPoint shifted = gamma + sys.param_lattice() * n;
    const double t = 0.5 * (unit(rng) + 1.0) * sys.period();
    const CMatrix a = evaluate_coefficient(sys, gamma, t);
    const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
    defect = std::max(defect, (evaluate_coefficient(sys, shifted, t) - a).cwiseAbs().maxCoeff() / scale);
    defect = std::max(defect,
                      (evaluate_coefficient(sys, gamma, t + sys.period()) - a).cwiseAbs().maxCoeff() /
                          scale);
  }
  return defect;
}

namespace {

struct Rk4Workspace {
  CMatrix a, k1, k2, k3, k4, tmp;
  explicit Rk4Workspace(Eigen::Index n)
      : a(n, n), k1(n, n), k2(n, n), k3(n, n), k4(n, n), tmp(n, n) {}
};

void rk4_step(const TimeCoefficient& coeff, double t, double h, CMatrix& x, Rk4Workspace& w) {
  coeff(t, w.a);
  w.k1.noalias() = w.a * x;
  coeff(t + 0.5 * h, w.a);
  w.tmp = x + (0.5 * h) * w.k1;
  w.k2.noalias() = w.a * w.tmp;
  w.tmp = x + (0.5 * h) * w.k2;
  w.k3.noalias() = w.a * w.tmp;
  coeff(t + h, w.a);
  w.tmp = x + h * w.k3;
  w.k4.noalias() = w.a * w.tmp;
  x += (h / 6.0) * (w.k1 + 2.0 * w.k2 + 2.0 * w.k3 + w.k4);
}

void check_finite(const CMatrix& x, double t) {
  if (!x.allFinite())
    fail(ErrorCode::NonFiniteState, "fundamental solution became non-finite at t = " + std::to_string(t));
}

double rk4_first_step_error(const TimeCoefficient& coeff, Eigen::Index n, double h) {
  Rk4Workspace w(n);
  CMatrix full = CMatrix::Identity(n, n);
  CMatrix half = CMatrix::Identity(n, n);
  rk4_step(coeff, 0.0, h, full, w);
  rk4_step(coeff, 0.0, 0.5 * h, half, w);
  rk4_step(coeff, 0.5 * h, 0.5 * h, half, w);
  return (full - half).cwiseAbs().maxCoeff() * 16.0 / 15.0;
}

template <typename Sink>
StepStats run_rk4(const TimeCoefficient& coeff, Eigen::Index n, double period, int steps, Sink&& sink) {
  if (steps < 16) fail(ErrorCode::InvalidArgument, "at least 16 steps per period are required");
  Rk4Workspace w(n);
  CMatrix x = CMatrix::Identity(n, n);
  const double h = period / steps;
  sink(0.0, x);
  for (int k = 0; k < steps; ++k) {
    const double t = k * h;
    rk4_step(coeff, t, h, x, w);
    check_finite(x, t + h);
    sink(k + 1 == steps ? period : (k + 1) * h, x);
  }
  StepStats stats;
  stats.accepted = steps;
  stats.min_step = stats.max_step = h;
  stats.local_error = rk4_first_step_error(coeff, n, h);
  return stats;
}

// Dormand–Prince 5(4) tableau.
constexpr std::array<double, 7> kDopC{0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
constexpr double kDopA[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
};
constexpr std::array<double, 7> kDopB{35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84, 0.0};
constexpr std::array<double, 7> kDopBStar{5179.0 / 57600, 0.0,         7571.0 / 16695, 393.0 / 640,
                                          -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};

template <typename Sink>
StepStats run_dopri(const TimeCoefficient& coeff, Eigen::Index n, double period,
                    const IntegratorConfig& cfg, Sink&& sink) {
  if (cfg.steps < 16) fail(ErrorCode::InvalidArgument, "at least 16 steps per period are required");
  if (!(cfg.rel_tol > 0.0)) fail(ErrorCode::InvalidArgument, "adaptive integration needs rel_tol > 0");
  std::array<CMatrix, 7> k;
  for (auto& ki : k) ki.resize(n, n);
  CMatrix a(n, n), stage(n, n), next(n, n), err(n, n);
  CMatrix x = CMatrix::Identity(n, n);
  double t = 0.0;
  double h = period / cfg.steps;
  const double h_floor = 1e-14 * period;
  StepStats stats;
  stats.min_step = period;
  sink(0.0, x);
  while (t < period) {
    if (stats.accepted + stats.rejected > cfg.max_steps)
      fail(ErrorCode::StepUnderflow, "adaptive integrator exceeded the step budget");
    const bool last = t + h >= period;
    if (last) h = period - t;
    for (int s = 0; s < 7; ++s) {
      stage = x;
      for (int j = 0; j < s; ++j)
        if (kDopA[s][j] != 0.0) stage += (h * kDopA[s][j]) * k[j];
      coeff(t + kDopC[s] * h, a);
      k[s].noalias() = a * stage;
    }
    next = x;
    err.setZero();
    for (int s = 0; s < 7; ++s) {
      if (kDopB[s] != 0.0) next += (h * kDopB[s]) * k[s];
      err += (h * (kDopB[s] - kDopBStar[s])) * k[s];
    }
    double e = 0.0;
    for (Eigen::Index i = 0; i < err.size(); ++i) {
      const double scale = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(x(i)), std::abs(next(i)));
      e = std::max(e, std::abs(err(i)) / scale);
    }
    if (!std::isfinite(e)) fail(ErrorCode::NonFiniteState, "non-finite error estimate at t = " + std::to_string(t));
    if (e <= 1.0) {
      t = last ? period : t + h;
      x = next;
      check_finite(x, t);
      ++stats.accepted;
      stats.min_step = std::min(stats.min_step, h);
      stats.max_step = std::max(stats.max_step, h);
      stats.local_error = std::max(stats.local_error, err.cwiseAbs().maxCoeff());
      sink(t, x);
    } else {
      ++stats.rejected;
    }
    const double factor = e == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(e, -0.2), 0.2, 5.0);
    h *= factor;
    if (h < h_floor && t < period)
      fail(ErrorCode::StepUnderflow, "adaptive step fell below 1e-14 T at t = " + std::to_string(t));
  }
  return stats;
}

template <typename Sink>
StepStats run(const ParamPeriodicLODE& sys, const ParamPoint& gamma, const IntegratorConfig& cfg,
              Sink&& sink) {
  const TimeCoefficient coeff = sys.bind(gamma);
  switch (cfg.method) {
    case IntegrationMethod::Rk4Fixed:
      return run_rk4(coeff, sys.dim(), sys.period(), cfg.steps, sink);
    case IntegrationMethod::DopAdaptive:
      return run_dopri(coeff, sys.dim(), sys.period(), cfg, sink);
  }
  fail(ErrorCode::InvalidArgument, "unknown integration method");
}

}  // namespace

FundamentalPath integrate_fundamental(const ParamPeriodicLODE& sys, const ParamPoint& gamma,
                                      const IntegratorConfig& config) {
  FundamentalPath path;
  path.param = gamma;
  if (config.method == IntegrationMethod::Rk4Fixed) {
    path.times.reserve(config.steps + 1);
    path.values.reserve(config.steps + 1);
  }
  path.step_stats = run(sys, gamma, config, [&](double t, const CMatrix& x) {
    path.times.push_back(t);
    path.values.push_back(x);
  });
  path.values.front() = CMatrix::Identity(sys.dim(), sys.dim());
  return path;
}

CMatrix integrate_monodromy(const ParamPeriodicLODE& sys, const ParamPoint& gamma,
                            const IntegratorConfig& config) {
  CMatrix last;
  run(sys, gamma, config, [&](double, const CMatrix& x) { last = x; });
  return last;
}

CMatrix propagate_rk4(const TimeCoefficient& coeff, const CMatrix& initial, double t0, double t1,
                      int steps) {
  if (steps < 1) fail(ErrorCode::InvalidArgument, "propagate_rk4 needs at least one step");
  Rk4Workspace w(initial.rows());
  CMatrix x = initial;
  const double h = (t1 - t0) / steps;
  for (int k = 0; k < steps; ++k) {
    rk4_step(coeff, t0 + k * h, h, x, w);
    check_finite(x, t0 + (k + 1) * h);
  }
  return x;
}

const CMatrix& monodromy(const FundamentalPath& path) {
  if (path.values.empty()) fail(ErrorCode::InvalidArgument, "empty fundamental path");
  return path.values.back();
}

std::vector<cplx> trace_integral(const ParamPeriodicLODE& sys, const FundamentalPath& path) {
  const TimeCoefficient coeff = sys.bind(path.param);
  CMatrix a(sys.dim(), sys.dim());
  auto trace_at = [&](double t) {
    coeff(t, a);
    return a.trace();
  };
  std::vector<cplx> out(path.times.size());
  if (out.empty()) return out;
  out[0] = 0.0;
  cplx left = trace_at(path.times[0]);
  for (std::size_t k = 1; k < path.times.size(); ++k) {
    const double t0 = path.times[k - 1];
    const double t1 = path.times[k];
    const cplx right = trace_at(t1);
    out[k] = out[k - 1] + (t1 - t0) / 6.0 * (left + 4.0 * trace_at(0.5 * (t0 + t1)) + right);
    left = right;
  }
  return out;
}

double liouville_defect(const ParamPeriodicLODE& sys, const FundamentalPath& path) {
  const std::vector<cplx> integral = trace_integral(sys, path);
  double defect = 0.0;
  for (std::size_t k = 0; k < path.values.size(); ++k) {
    const cplx expected = std::exp(integral[k]);
    const cplx actual = path.values[k].determinant();
    defect = std::max(defect, std::abs(actual - expected) / std::abs(expected));
  }
  return defect;
}

}  // namespace floquet

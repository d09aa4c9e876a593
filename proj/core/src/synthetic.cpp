#include "floquet/synthetic.hpp"

#include <cmath>
#include <random>

namespace floquet {

namespace {

RMatrix unit_lattice() { return RMatrix::Constant(1, 1, kTwoPi); }

using Generator = std::function<CMatrix(double alpha)>;

/// A(α, t) = P w(τ) G_j(α) on the j-th of P equal time slices, w(τ) = 1 − cos 2πτ,
/// so X_α(T) = exp(G_{P−1}(α)) ⋯ exp(G_0(α)) and A is continuous in t.
ParamPeriodicLODE phased_system(int n, std::vector<Generator> phases) {
  const int count = static_cast<int>(phases.size());
  return ParamPeriodicLODE(n, 1.0, unit_lattice(), CoefficientFactory([phases, count](const ParamPoint& gamma) {
                             std::vector<CMatrix> g;
                             for (const auto& p : phases) g.push_back(p(gamma[0]));
                             return TimeCoefficient([g, count](double t, CMatrix& out) {
                               double u = t - std::floor(t);
                               int j = std::min(count - 1, static_cast<int>(u * count));
                               const double tau = u * count - j;
                               out = (count * (1.0 - std::cos(kTwoPi * tau))) * g[j];
                             });
                           }));
}

/// i(π/2)(I − n·σ) on coordinates (a, b), n = (cos θ, −sin θ, 0); exp of it is n·σ.
CMatrix reflection_generator(int n, int a, int b, double theta) {
  CMatrix g = CMatrix::Zero(n, n);
  const cplx h = 0.5 * kPi * kI;
  const cplx off = std::polar(1.0, theta);  // n·σ has (a, b) entry cos θ + i sin θ
  g(a, a) = h;
  g(b, b) = h;
  g(a, b) = -h * off;
  g(b, a) = -h * std::conj(off);
  return g;
}

CMatrix diag_generator(std::vector<double> logs) {
  CMatrix g = CMatrix::Zero(static_cast<Eigen::Index>(logs.size()), static_cast<Eigen::Index>(logs.size()));
  for (std::size_t i = 0; i < logs.size(); ++i) g(i, i) = logs[i];
  return g;
}

}  // namespace

ParamPeriodicLODE constant_system(const CMatrix& a, double period) {
  return ParamPeriodicLODE(static_cast<int>(a.rows()), period, unit_lattice(),
                           CoefficientMap([a](const ParamPoint&, double) { return a; }));
}

ParamPeriodicLODE mathieu_system(double q) {
  return ParamPeriodicLODE(2, kTwoPi, unit_lattice(), CoefficientFactory([q](const ParamPoint&) {
                             return TimeCoefficient([q](double t, CMatrix& out) {
                               out.setZero(2, 2);
                               out(0, 1) = 1.0;
                               out(1, 0) = -(1.0 + q * std::cos(t));
                             });
                           }));
}

ParamPeriodicLODE scalar_winding_system(double period) {
  return ParamPeriodicLODE(1, period, unit_lattice(), CoefficientFactory([period](const ParamPoint&) {
                             return TimeCoefficient([period](double t, CMatrix& out) {
                               out.resize(1, 1);
                               out(0, 0) = kI * (kTwoPi / period) * (1.0 - std::cos(kTwoPi * t / period));
                             });
                           }));
}

ParamPeriodicLODE random_periodic_system(int n, std::uint64_t seed, double period, double scale) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, scale / std::sqrt(static_cast<double>(n)));
  auto random_matrix = [&] {
    CMatrix m(n, n);
    for (Eigen::Index i = 0; i < m.size(); ++i) m(i) = cplx(normal(rng), normal(rng));
    return m;
  };
  const CMatrix a0 = random_matrix(), a1 = random_matrix(), a2 = random_matrix(), a3 = random_matrix();
  return ParamPeriodicLODE(n, period, unit_lattice(), CoefficientFactory([=](const ParamPoint& gamma) {
                             const double g = gamma[0];
                             const CMatrix base = a0 + std::cos(g) * a1;
                             return TimeCoefficient([=](double t, CMatrix& out) {
                               const double w = kTwoPi * t / period;
                               out = base + std::cos(w) * a2 + std::sin(w + g) * a3;
                             });
                           }));
}

ParamPeriodicLODE synthetic_braid_system() {
  return phased_system(3, {
                              [](double) { return reflection_generator(3, 0, 1, 0.0); },  // swap of bands 1, 2
                              [](double) { return reflection_generator(3, 1, 2, 0.0); },
                              [](double a) { return reflection_generator(3, 1, 2, a); },
                              [](double) { return diag_generator({0.0, 0.0, std::log(2.0)}); },
                          });
}

ParamPeriodicLODE synthetic_winding_system(int k) {
  return phased_system(2, {
                              [](double) { return reflection_generator(2, 0, 1, 0.0); },
                              [k](double a) { return reflection_generator(2, 0, 1, k * a); },
                              [](double) { return diag_generator({std::log(2.0), 0.0}); },
                          });
}

ParamPeriodicLODE synthetic_unit_winding_system() {
  return phased_system(3, {
                              [](double) { return reflection_generator(3, 0, 2, 0.0); },
                              [](double a) { return reflection_generator(3, 0, 2, a); },
                              [](double) { return diag_generator({0.0, -std::log(2.0), std::log(2.0)}); },
                          });
}

ParamPeriodicLODE conjugated_system(const ParamPeriodicLODE& sys, const CMatrix& s) {
  const CMatrix sinv = s.inverse();
  const ParamPeriodicLODE inner = sys;
  return ParamPeriodicLODE(sys.dim(), sys.period(), sys.param_lattice(),
                           CoefficientFactory([inner, s, sinv](const ParamPoint& gamma) {
                             const TimeCoefficient base = inner.bind(gamma);
                             return TimeCoefficient([base, s, sinv](double t, CMatrix& out) {
                               base(t, out);
                               out = s * out * sinv;
                             });
                           }));
}

}  // namespace floquet

#include "floquet/capacitance.hpp"

#include <cmath>
#include <numbers>

#include "floquet/io/cache.hpp"

namespace floquet {

namespace {

constexpr double kEuler = std::numbers::egamma;
constexpr double kMaxEwaldArg = 36.0;

/// E1(z) + ln z + γ, the entire part of the exponential integral.
double ein(double z) {
  if (z < 1.0) {
    double term = 1.0, sum = 0.0;
    for (int k = 1; k < 40; ++k) {
      term *= -z / k;
      const double add = -term / k;
      sum += add;
      if (std::abs(add) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
  }
  return -std::expint(-z) + std::log(z) + kEuler;
}

double e1(double z) { return -std::expint(-z); }

struct Node {
  Vec2 x;
  int disk;
};

}  // namespace

double reciprocal_distance(const ResonatorLattice& lat, const Vec2& alpha) {
  const Vec2 coords = lat.reciprocal.inverse() * alpha;
  double best = std::numeric_limits<double>::infinity();
  for (int m = -1; m <= 1; ++m)
    for (int n = -1; n <= 1; ++n) {
      const Vec2 q = lat.reciprocal * Vec2(std::round(coords.x()) + m, std::round(coords.y()) + n);
      best = std::min(best, (alpha - q).norm());
    }
  return best;
}

namespace {

CMatrix assemble(const ResonatorLattice& lat, const Vec2& alpha, int quad, double cutoff, double eta) {
  const int ndisk = static_cast<int>(lat.size());
  const int total = ndisk * quad;
  std::vector<Node> nodes(total);
  std::vector<double> weight(total);
  for (int i = 0; i < ndisk; ++i) {
    const Disk& d = lat.resonators[i];
    for (int a = 0; a < quad; ++a) {
      const double th = kTwoPi * a / quad;
      nodes[i * quad + a] = {d.center + d.radius * Vec2(std::cos(th), std::sin(th)), i};
      weight[i * quad + a] = kTwoPi * d.radius / quad;
    }
  }
  const double area = lat.cell_area();

  // Spectral part: −(1/|Y|) Σ_k e^{ik·(x−y)} e^{−ηk²}/k², k = α + q, |k| ≤ cutoff.
  std::vector<Vec2> ks;
  std::vector<double> kw;
  {
    const Eigen::Matrix2d inv = lat.reciprocal.inverse();
    const double span = (cutoff + alpha.norm()) * inv.norm() + 2.0;
    const int range = static_cast<int>(std::ceil(span)) + 1;
    for (int m = -range; m <= range; ++m)
      for (int n = -range; n <= range; ++n) {
        const Vec2 k = alpha + lat.reciprocal * Vec2(m, n);
        const double k2 = k.squaredNorm();
        if (k2 > cutoff * cutoff) continue;
        ks.push_back(k);
        kw.push_back(std::exp(-eta * k2) / k2);
      }
  }
  CMatrix U(total, static_cast<Eigen::Index>(ks.size()));
  for (int a = 0; a < total; ++a)
    for (std::size_t q = 0; q < ks.size(); ++q) U(a, q) = std::polar(1.0, ks[q].dot(nodes[a].x));
  CMatrix UW = U;
  for (std::size_t q = 0; q < ks.size(); ++q) UW.col(q) *= kw[q] * (-1.0 / area);
  CMatrix G = UW * U.adjoint();

  // Real-space part over cell translates g: −(1/4π) Σ_g e^{iα·g} E1(|x − y − g|²/4η).
  double reach = 0.0;
  for (int i = 0; i < ndisk; ++i)
    for (int j = 0; j < ndisk; ++j)
      reach = std::max(reach, (lat.resonators[i].center - lat.resonators[j].center).norm() +
                                  lat.resonators[i].radius + lat.resonators[j].radius);
  const double zmax_r = std::sqrt(4.0 * eta * kMaxEwaldArg);
  std::vector<Vec2> gs;
  std::vector<cplx> gphase;
  {
    const Eigen::Matrix2d inv = lat.lattice.inverse();
    const int range = static_cast<int>(std::ceil((reach + zmax_r) * inv.norm())) + 1;
    for (int m = -range; m <= range; ++m)
      for (int n = -range; n <= range; ++n) {
        const Vec2 g = lat.lattice * Vec2(m, n);
        if (g.norm() > reach + zmax_r) continue;
        gs.push_back(g);
        gphase.push_back(std::polar(1.0, alpha.dot(g)));
      }
  }
  const double inv4eta = 1.0 / (4.0 * eta);
  const double c4pi = -1.0 / (4.0 * kPi);
  const double log4eta = std::log(4.0 * eta);
  for (int a = 0; a < total; ++a) {
    for (int b = a; b < total; ++b) {
      const Vec2 d = nodes[a].x - nodes[b].x;
      const bool same = nodes[a].disk == nodes[b].disk;
      cplx sum = 0.0;
      for (std::size_t g = 0; g < gs.size(); ++g) {
        const double z = (d - gs[g]).squaredNorm() * inv4eta;
        if (z > kMaxEwaldArg) continue;
        if (same && gs[g].isZero(0.0)) {
          // Remove (1/2π) ln|x − y|, which is integrated exactly below.
          sum += c4pi * (ein(z) - kEuler + log4eta);
        } else {
          sum += c4pi * gphase[g] * e1(z);
        }
      }
      G(a, b) += sum;
      if (b != a) G(b, a) += std::conj(sum);
    }
  }

  CMatrix S = G;
  for (int b = 0; b < total; ++b) S.col(b) *= weight[b];

  // Logarithmic part on each circle: circulant with symbols R ln R (m = 0) and −R/(2|m|).
  for (int i = 0; i < ndisk; ++i) {
    const double r = lat.resonators[i].radius;
    std::vector<double> column(quad, 0.0);
    for (int k = 0; k < quad; ++k) {
      double acc = r * std::log(r);
      for (int m = 1; m <= quad / 2; ++m) {
        const double symbol = -r / (2.0 * m);
        const double factor = (2 * m == quad) ? 1.0 : 2.0;
        acc += factor * symbol * std::cos(kTwoPi * m * k / quad);
      }
      column[k] = acc / quad;
    }
    for (int a = 0; a < quad; ++a)
      for (int b = 0; b < quad; ++b) S(i * quad + a, i * quad + b) += column[(a - b + quad) % quad];
  }

  CMatrix rhs = CMatrix::Zero(total, ndisk);
  for (int a = 0; a < total; ++a) rhs(a, nodes[a].disk) = 1.0;
  const CMatrix psi = S.partialPivLu().solve(rhs);
  CMatrix C = CMatrix::Zero(ndisk, ndisk);
  for (int a = 0; a < total; ++a) C.row(nodes[a].disk) -= weight[a] * psi.row(a);
  return C;
}

double hermiticity(const CMatrix& c) { return (c - c.adjoint()).norm() / std::max(c.norm(), 1e-300); }

double relative_change(const CMatrix& a, const CMatrix& b) {
  return (a - b).cwiseAbs().maxCoeff() / std::max(a.cwiseAbs().maxCoeff(), 1e-300);
}

}  // namespace

CapacitanceMatrix capacitance_matrix(const ResonatorLattice& lat, const Vec2& alpha,
                                     const CapacitanceOptions& options) {
  if (options.quad_points < 4) fail(ErrorCode::InvalidArgument, "at least 4 quadrature points per disk required");
  if (!(options.cutoff > 0.0)) fail(ErrorCode::InvalidArgument, "lattice-sum cutoff must be positive");
  if (!(options.ewald_eta > 0.0)) fail(ErrorCode::InvalidArgument, "Ewald parameter must be positive");
  if (lat.size() == 0) fail(ErrorCode::InvalidArgument, "empty resonator lattice");
  const double dist = reciprocal_distance(lat, alpha);
  if (dist < 1e-6)
    fail(ErrorCode::SingularAlpha, "quasi-momentum lies within " + std::to_string(dist) +
                                       " of a reciprocal lattice point");
  CapacitanceMatrix out;
  out.alpha = alpha;
  out.quad_points = options.quad_points;
  out.lattice_sum_cutoff = options.cutoff;
  out.C = assemble(lat, alpha, options.quad_points, options.cutoff, options.ewald_eta);
  out.hermiticity_residual = hermiticity(out.C);
  if (options.convergence_tol > 0.0) {
    const CMatrix wide = assemble(lat, alpha, options.quad_points, 2.0 * options.cutoff, options.ewald_eta);
    const CMatrix fine = assemble(lat, alpha, 2 * options.quad_points, options.cutoff, options.ewald_eta);
    out.convergence_delta = std::max(relative_change(out.C, wide), relative_change(out.C, fine));
    if (!(out.convergence_delta <= options.convergence_tol))
      fail(ErrorCode::NotConverged, "capacitance entries change by " + std::to_string(out.convergence_delta) +
                                        " under cutoff/quadrature doubling (tolerance " +
                                        std::to_string(options.convergence_tol) + ")");
  }
  return out;
}

CapacitanceCache::CapacitanceCache(ResonatorLattice lat, CapacitanceOptions options, std::string directory)
    : lat_(std::move(lat)), options_(options), directory_(std::move(directory)), hash_(geometry_hash(lat_)) {}

CapacitanceMatrix CapacitanceCache::get(const Vec2& alpha) {
  const Key key{alpha.x(), alpha.y()};
  {
    std::lock_guard lock(mutex_);
    if (auto it = memo_.find(key); it != memo_.end()) {
      ++hits_;
      return it->second;
    }
  }
  std::optional<CapacitanceMatrix> loaded;
  if (!directory_.empty()) loaded = load_cached_capacitance(directory_, hash_, alpha, options_);
  CapacitanceMatrix c = loaded ? *loaded : capacitance_matrix(lat_, alpha, options_);
  std::lock_guard lock(mutex_);
  loaded ? ++hits_ : ++misses_;
  if (!loaded && !directory_.empty()) pending_.insert(key);
  return memo_.emplace(key, std::move(c)).first->second;
}

void CapacitanceCache::put(const CapacitanceMatrix& c) {
  std::lock_guard lock(mutex_);
  memo_[Key{c.alpha.x(), c.alpha.y()}] = c;
}

std::size_t CapacitanceCache::flush() {
  std::lock_guard lock(mutex_);
  std::size_t written = 0;
  for (const Key& key : pending_) {
    save_cached_capacitance(directory_, hash_, memo_.at(key), options_);
    ++written;
  }
  pending_.clear();
  return written;
}

std::size_t CapacitanceCache::hits() const {
  std::lock_guard lock(mutex_);
  return hits_;
}

std::size_t CapacitanceCache::misses() const {
  std::lock_guard lock(mutex_);
  return misses_;
}

}  // namespace floquet

#include "floquet/normal_form.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

namespace floquet {

namespace {

constexpr double kModulusTieTol = 1e-9;
constexpr double kGaugeThreshold = 1e-8;

double condition_number(const CMatrix& v) {
  const Eigen::JacobiSVD<CMatrix> svd(v);
  const auto& s = svd.singularValues();
  const double smin = s(s.size() - 1);
  return smin > 0.0 ? s(0) / smin : std::numeric_limits<double>::infinity();
}

void fix_gauge(CMatrix& v) {
  for (Eigen::Index j = 0; j < v.cols(); ++j) {
    v.col(j).normalize();
    for (Eigen::Index i = 0; i < v.rows(); ++i) {
      const double a = std::abs(v(i, j));
      if (a > kGaugeThreshold) {
        v.col(j) *= std::conj(v(i, j)) / a;
        v(i, j) = a;
        break;
      }
    }
  }
}

std::vector<int> canonical_order(const Eigen::VectorXcd& lambda) {
  const auto n = static_cast<int>(lambda.size());
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](int a, int b) { return std::abs(lambda[a]) > std::abs(lambda[b]); });
  // Cluster runs of near-equal modulus, then order each run by argument.
  int start = 0;
  for (int k = 1; k <= n; ++k) {
    const bool split =
        k == n || std::abs(lambda[idx[k - 1]]) - std::abs(lambda[idx[k]]) >
                      kModulusTieTol * std::max(1.0, std::abs(lambda[idx[k - 1]]));
    if (!split) continue;
    std::stable_sort(idx.begin() + start, idx.begin() + k,
                     [&](int a, int b) { return std::arg(lambda[a]) < std::arg(lambda[b]); });
    start = k;
  }
  return idx;
}

}  // namespace

EigenFrame eig_monodromy_unchecked(const CMatrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0)
    fail(ErrorCode::InvalidArgument, "monodromy must be a non-empty square matrix");
  if (!m.allFinite()) fail(ErrorCode::NonFiniteState, "monodromy has non-finite entries");
  const Eigen::ComplexEigenSolver<CMatrix> solver(m);
  if (solver.info() != Eigen::Success) fail(ErrorCode::NearDefective, "eigensolver did not converge");
  const Eigen::VectorXcd& lambda = solver.eigenvalues();
  const std::vector<int> order = canonical_order(lambda);

  EigenFrame frame;
  const auto n = m.rows();
  frame.multipliers.resize(n);
  frame.eigvecs.resize(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    frame.multipliers[j] = lambda[order[j]];
    frame.eigvecs.col(j) = solver.eigenvectors().col(order[j]);
    if (frame.multipliers[j] == cplx(0.0))
      fail(ErrorCode::InvalidArgument, "monodromy is singular");
  }
  fix_gauge(frame.eigvecs);
  frame.cond = condition_number(frame.eigvecs);
  const Eigen::Map<const CVector> lam(frame.multipliers.data(), n);
  frame.residual = (m * frame.eigvecs - frame.eigvecs * lam.asDiagonal()).norm() /
                   std::max(m.norm(), std::numeric_limits<double>::min());
  return frame;
}

EigenFrame eig_monodromy(const CMatrix& m, double cond_limit) {
  EigenFrame frame = eig_monodromy_unchecked(m);
  if (!(frame.cond <= cond_limit))
    fail(ErrorCode::NearDefective,
         "eigenvector condition number " + std::to_string(frame.cond) + " exceeds limit");
  return frame;
}

cplx choose_log_branch(cplx lambda, std::optional<cplx> previous, double period) {
  const cplx principal = std::log(lambda) / period;
  if (!previous) return principal;
  const double spacing = kTwoPi / period;
  const double n = std::round((previous->imag() - principal.imag()) / spacing);
  return principal + cplx(0.0, n * spacing);
}

int branch_offset(cplx mu, cplx lambda, double period) {
  return static_cast<int>(std::lround((period * mu - std::log(lambda)).imag() / kTwoPi));
}

CMatrix floquet_exponent_matrix(const EigenFrame& frame, const std::vector<cplx>& exponents,
                                double period, double cond_limit) {
  (void)period;
  const auto n = frame.eigvecs.cols();
  if (static_cast<Eigen::Index>(exponents.size()) != n)
    fail(ErrorCode::InvalidArgument, "exponent count does not match the eigenframe");
  if (!(frame.cond <= cond_limit))
    fail(ErrorCode::NearDefective, "eigenframe too ill-conditioned to build F");
  const Eigen::Map<const CVector> mu(exponents.data(), n);
  const Eigen::PartialPivLU<CMatrix> lu(frame.eigvecs);
  return frame.eigvecs * mu.asDiagonal() * lu.inverse();
}

std::vector<CMatrix> lyapunov_transform(const FundamentalPath& path, const EigenFrame& frame,
                                        const std::vector<cplx>& exponents) {
  const auto n = frame.eigvecs.cols();
  if (static_cast<Eigen::Index>(exponents.size()) != n)
    fail(ErrorCode::InvalidArgument, "exponent count does not match the eigenframe");
  const CMatrix vinv = frame.eigvecs.partialPivLu().inverse();
  std::vector<CMatrix> p;
  p.reserve(path.values.size());
  CVector decay(n);
  for (std::size_t k = 0; k < path.values.size(); ++k) {
    for (Eigen::Index j = 0; j < n; ++j) decay[j] = std::exp(-path.times[k] * exponents[j]);
    p.push_back(path.values[k] * frame.eigvecs * decay.asDiagonal() * vinv);
  }
  return p;
}

std::vector<CMatrix> lyapunov_transform_expm(const FundamentalPath& path, const CMatrix& F) {
  std::vector<CMatrix> p;
  p.reserve(path.values.size());
  for (std::size_t k = 0; k < path.values.size(); ++k) {
    const CMatrix back = (-path.times[k] * F).exp();
    p.push_back(path.values[k] * back);
  }
  return p;
}

FloquetDecomposition decompose(const FundamentalPath& path, double period,
                               const std::vector<cplx>* previous, double cond_limit) {
  FloquetDecomposition d;
  d.frame = eig_monodromy(monodromy(path), cond_limit);
  const auto n = d.frame.multipliers.size();
  if (previous && previous->size() != n)
    fail(ErrorCode::InvalidArgument, "previous exponents do not match the system dimension");
  d.exponents.resize(n);
  d.branch_offsets.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const std::optional<cplx> prev = previous ? std::optional<cplx>((*previous)[j]) : std::nullopt;
    d.exponents[j] = choose_log_branch(d.frame.multipliers[j], prev, period);
    d.branch_offsets[j] = branch_offset(d.exponents[j], d.frame.multipliers[j], period);
  }
  d.F = floquet_exponent_matrix(d.frame, d.exponents, period, cond_limit);
  d.times = path.times;
  d.P_path = lyapunov_transform(path, d.frame, d.exponents);
  return d;
}

double mean_coefficient_defect(const ParamPeriodicLODE& sys, const ParamPoint& gamma,
                               const CMatrix& F, int samples) {
  if (samples < 2) fail(ErrorCode::InvalidArgument, "need at least two samples");
  const TimeCoefficient coeff = sys.bind(gamma);
  CMatrix a(sys.dim(), sys.dim());
  CMatrix mean = CMatrix::Zero(sys.dim(), sys.dim());
  // Periodic trapezoid rule: spectrally accurate for smooth periodic A.
  for (int k = 0; k < samples; ++k) {
    coeff(sys.period() * k / samples, a);
    mean += a;
  }
  mean /= static_cast<double>(samples);
  return (F - mean).norm() / std::max(1.0, F.norm());
}

}  // namespace floquet

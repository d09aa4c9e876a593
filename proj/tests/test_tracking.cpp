#include <doctest.h>

#include <cmath>
#include <random>

#include <unsupported/Eigen/MatrixFunctions>

#include "floquet/assignment.hpp"
#include "floquet/synthetic.hpp"
#include "floquet/tracking.hpp"
#include "oracles.hpp"

using namespace floquet;

namespace {

ParamPoint at(double x) { return ParamPoint::Constant(1, x); }

EigenFrame frame_of_columns(const CMatrix& v) {
  EigenFrame f;
  f.eigvecs = v;
  for (Eigen::Index i = 0; i < v.cols(); ++i) f.multipliers.push_back(cplx(1.0 + i, 0.0));
  return f;
}

CMatrix unitary(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  CMatrix m(n, n);
  for (Eigen::Index i = 0; i < m.size(); ++i) m(i) = cplx(g(rng), g(rng));
  return Eigen::HouseholderQR<CMatrix>(m).householderQ();
}

/// Hermitian 2×2 model 2 + [[s, g], [g, −s]] with an avoided crossing of gap 2g at s = 0.
EigenFrame avoided_crossing(double s, double g) {
  CMatrix m(2, 2);
  m << 2.0 + s, g, g, 2.0 - s;
  return eig_monodromy(m);
}

}  // namespace

TEST_CASE("assignment matches brute force") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + trial % 6;
    Eigen::MatrixXd score(n, n);
    std::vector<std::vector<double>> s(n, std::vector<double>(n));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) s[i][j] = score(i, j) = u(rng);
    const std::vector<int> p = max_weight_assignment(score);
    double total = 0.0;
    for (int i = 0; i < n; ++i) total += s[i][p[i]];
    CHECK(total == doctest::Approx(oracle::best_assignment_score(s)).epsilon(1e-12));
  }
}

TEST_CASE("greedy assignment is a permutation") {
  Eigen::MatrixXd score(3, 3);
  score << 0.9, 0.8, 0.0, 0.85, 0.1, 0.0, 0.0, 0.0, 1.0;
  const std::vector<int> p = greedy_assignment(score);
  CHECK(p == std::vector<int>{0, 1, 2});
}

TEST_CASE("eigenpair matching") {
  const CMatrix id = CMatrix::Identity(3, 3);
  const Matching same = match_eigenpairs(frame_of_columns(id), frame_of_columns(id));
  CHECK(same.perm == std::vector<int>{0, 1, 2});
  CHECK(same.min_overlap2 == doctest::Approx(1.0));

  CMatrix swapped = id;
  swapped.col(0).swap(swapped.col(1));
  const Matching sw = match_eigenpairs(frame_of_columns(id), frame_of_columns(swapped));
  CHECK(sw.perm == std::vector<int>{1, 0, 2});

  // A rotated random frame against the brute-force optimum (N = 4).
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const CMatrix u = unitary(4, rng);
    CMatrix generator = CMatrix::Zero(4, 4);
    const CMatrix h = unitary(4, rng);
    generator = 0.1 * (h + h.adjoint());
    const CMatrix w = u * (kI * generator).exp();
    const Matching m = match_eigenpairs_unchecked(frame_of_columns(u), frame_of_columns(w));
    std::vector<std::vector<double>> s(4, std::vector<double>(4));
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) s[i][j] = std::norm(u.col(i).dot(w.col(j)));
    std::vector<int> best;
    oracle::best_assignment_score(s, &best);
    CHECK(m.perm == best);
  }
}

TEST_CASE("overlap of exactly one half is rejected") {
  const double r = 1.0 / std::sqrt(2.0);
  CMatrix a = CMatrix::Identity(2, 2), b(2, 2);
  b << r, -r, r, r;
  try {
    match_eigenpairs(frame_of_columns(a), frame_of_columns(b));
    FAIL("expected AmbiguousMatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::AmbiguousMatch);
  }
}

TEST_CASE("nearest-multiplier matching") {
  EigenFrame a, b;
  a.multipliers = {1.0, kI, -1.0};
  b.multipliers = {-1.01, 1.01, 1.01 * kI};
  a.eigvecs = b.eigvecs = CMatrix::Identity(3, 3);
  CHECK(match_multipliers(a, b).perm == std::vector<int>{1, 2, 0});
}

TEST_CASE("loop construction") {
  const ParameterLoop line = straight_loop(at(0.5), at(kTwoPi), 64);
  CHECK(line.size() == 65);
  CHECK(line.points.back()[0] == line.points.front()[0] + kTwoPi);
  CHECK(line.max_step == doctest::Approx(kTwoPi / 64));

  const std::vector<ParamPoint> wp = {Eigen::Vector2d(0.0, 0.0), Eigen::Vector2d(1.0, 0.0),
                                      Eigen::Vector2d(1.0, 1.0)};
  const ParameterLoop tri = polyline_loop(wp, 10, Eigen::Vector2d::Zero(), {"A", "B", "C"});
  CHECK(tri.size() == 31);
  CHECK(tri.points.back() == tri.points.front());
  // The closing point repeats the first label.
  REQUIRE(tri.labels.size() == 4);
  CHECK(tri.labels[1].index == 10);
  CHECK(tri.labels[2].label == "C");
  CHECK(tri.labels[3].index == 30);
  CHECK(tri.labels[3].label == "A");
  const std::vector<double> s = tri.arc_length();
  CHECK(s.back() == doctest::Approx(2.0 + std::sqrt(2.0)));
  CHECK_THROWS_AS(polyline_loop({}, 10, Eigen::Vector2d::Zero()), Error);
}

TEST_CASE("parameter-independent system has trivial braid") {
  CMatrix a(3, 3);
  a << cplx(0.0, 1.0), 0.3, 0.0, 0.0, cplx(0.1, -0.5), 0.2, 0.1, 0.0, cplx(-0.2, 2.0);
  const BandTrack t = sweep_loop(constant_system(a, 1.0), straight_loop(at(0.0), at(kTwoPi), 32));
  CHECK(t.permutation == std::vector<int>{0, 1, 2});
  for (const auto& band : t.multiplier_paths)
    for (const cplx& l : band) CHECK(std::abs(l - band.front()) < 1e-12);
  CHECK(braid_invariant(t).order == 1);
}

TEST_CASE("synthetic braid swaps two bands") {
  const ParamPeriodicLODE sys = synthetic_braid_system();
  const BandTrack t = sweep_loop(sys, straight_loop(at(0.0), at(kTwoPi), 64));
  const BraidInvariant b = braid_invariant(t);
  CHECK(b.order == 2);
  CHECK(b.nontrivial_lengths() == std::vector<int>{2});
  // The multipliers are ±e^{iα/2} and 2e^{−iα}.
  for (std::size_t k = 0; k < t.samples(); ++k) {
    const double alpha = t.params[k][0];
    std::vector<cplx> expected = {2.0 * std::polar(1.0, -alpha), std::polar(1.0, alpha / 2), -std::polar(1.0, alpha / 2)};
    for (const cplx& e : expected) {
      double best = 1e9;
      for (std::size_t n = 0; n < 3; ++n) best = std::min(best, std::abs(t.multiplier_paths[n][k] - e));
      CHECK(best < 1e-9);
    }
  }

  // Conjugating A by a constant matrix leaves the spectrum, hence the braid, unchanged.
  CMatrix s(3, 3);
  s << 1.0, 0.5, 0.0, 0.0, 1.0, 0.3, cplx(0.0, 0.2), 0.0, 1.0;
  CHECK(braid_invariant(sweep_loop(conjugated_system(sys, s), straight_loop(at(0.0), at(kTwoPi), 64))).order == 2);

  SweepOptions nearest;
  nearest.strategy = MatchStrategy::NearestMultiplier;
  CHECK(braid_invariant(sweep_loop(sys, straight_loop(at(0.0), at(kTwoPi), 64), {}, nearest)).order == 2);
}

TEST_CASE("multiset periodicity after matching") {
  const BandTrack t = sweep_loop(random_periodic_system(3, 21), straight_loop(at(0.3), at(kTwoPi), 48));
  for (std::size_t n = 0; n < t.bands(); ++n) {
    const cplx end = t.multiplier_paths[n].back();
    const cplx start = t.multiplier_paths[t.permutation[n]].front();
    CHECK(std::abs(end - start) <= 1e-8 * std::max(1.0, std::abs(start)));
  }
}

TEST_CASE("thread count does not change the result") {
  const ParamPeriodicLODE sys = random_periodic_system(4, 8);
  const ParameterLoop loop = straight_loop(at(0.0), at(kTwoPi), 40);
  SweepOptions one, four;
  one.threads = 1;
  four.threads = 4;
  const BandTrack a = sweep_loop(sys, loop, {}, one);
  const BandTrack b = sweep_loop(sys, loop, {}, four);
  CHECK(a.permutation == b.permutation);
  CHECK(a.multiplier_paths == b.multiplier_paths);
}

TEST_CASE("refinement") {
  std::function<EigenFrame(const ParamPoint&)> frame = [](const ParamPoint& p) { return avoided_crossing(p[0], 1e-3); };

  // Smooth segment: no bisection.
  const RefinedSegment calm = refine_near_degeneracy(at(0.5), frame(at(0.5)), at(0.6), frame(at(0.6)), frame);
  CHECK(calm.points.empty());
  CHECK(calm.steps.size() == 1);

  // Across [−g, g] the eigenvectors turn by π/4, so under a strict threshold
  // the segment is bisected and followed adiabatically.
  const double g = 1e-3;
  SweepOptions strict;
  strict.accept_overlap2 = 0.9;
  const RefinedSegment seg = refine_near_degeneracy(at(-g), frame(at(-g)), at(g), frame(at(g)), frame, strict);
  CHECK(!seg.points.empty());
  CHECK(seg.depth <= 6);
  CHECK(seg.steps.size() == seg.points.size() + 1);
  for (const Matching& m : seg.steps) CHECK(m.min_overlap2 > 0.9);
  std::vector<int> perm = {0, 1};
  for (const Matching& m : seg.steps) perm = {m.perm[perm[0]], m.perm[perm[1]]};
  const EigenFrame end = frame(at(g));
  CHECK(std::abs(end.multipliers[perm[0]] - frame(at(-g)).multipliers[0]) < 1e-9);

  // The eigenbasis jumps from the standard basis to the discrete Fourier basis
  // at s = 0, where every overlap² is 1/3, so no bisection depth helps.
  CMatrix fourier(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) fourier(i, j) = std::polar(1.0 / std::sqrt(3.0), kTwoPi * i * j / 3);
  std::function<EigenFrame(const ParamPoint&)> jump = [fourier](const ParamPoint& p) {
    const double s = p[0];
    CMatrix d = CMatrix::Zero(3, 3);
    d(0, 0) = std::abs(s);
    d(2, 2) = -std::abs(s);
    const CMatrix m = 2.0 * CMatrix::Identity(3, 3) + (s < 0.0 ? d : CMatrix(fourier * d * fourier.adjoint()));
    return eig_monodromy_unchecked(m);
  };
  try {
    refine_near_degeneracy(at(-0.1), jump(at(-0.1)), at(0.1), jump(at(0.1)), jump);
    FAIL("expected DegeneracyUnresolved");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegeneracyUnresolved);
  }
}

TEST_CASE("unit-circle departures") {
  BandTrack t;
  t.params.assign(6, at(0.0));
  const double r[6] = {1.0, 1.0, 1.3, 1.2, 1.0, 1.0};
  t.multiplier_paths.assign(2, {});
  for (int k = 0; k < 6; ++k) {
    t.multiplier_paths[0].push_back(std::polar(r[k], 0.5));
    t.multiplier_paths[1].push_back(std::polar(1.0 / r[k], 0.5));
  }
  CHECK(off_circle_transitions(t) == 2);
  // 2e^{−iα} stays off the circle and ±e^{iα/2} stay on it.
  CHECK(off_circle_transitions(sweep_loop(synthetic_braid_system(), straight_loop(at(0.0), at(kTwoPi), 32))) == 0);
}

TEST_CASE("braid invariant from a permutation") {
  const BraidInvariant id = braid_invariant(std::vector<int>{0, 1, 2, 3});
  CHECK(id.order == 1);
  CHECK(id.cycles.size() == 4);
  CHECK(id.nontrivial_lengths().empty());

  // (1 2 3)(4 5 6 7) in 1-based notation; the remaining five bands fixed.
  std::vector<int> p = {1, 2, 0, 4, 5, 6, 3, 7, 8, 9, 10, 11};
  const BraidInvariant b = braid_invariant(p);
  CHECK(b.order == 12);
  CHECK(b.nontrivial_lengths() == std::vector<int>{4, 3});
  CHECK(b.cycles[0] == std::vector<int>{0, 1, 2});
  CHECK(b.band_cycle_length[5] == 4);
  CHECK_THROWS_AS(braid_invariant(std::vector<int>{0, 0}), Error);
}

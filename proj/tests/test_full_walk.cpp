#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "generators.hpp"
#include "powerwalk/full_walk.hpp"

using namespace powerwalk;
using D = Direction;
using cd = std::complex<double>;

namespace {

/// Sorted +-arccos(cos^t phi_k) from the mode formula.
std::vector<double> oracle_phases(int side, int t) {
  std::vector<double> out;
  for (int ky = 0; ky < side; ++ky)
    for (int kx = 0; kx < side; ++kx) {
      const double c = std::pow(pwtest::mode_cos(side, kx, ky), t);
      if (std::abs(c) >= 1.0 - 1e-12) continue;
      out.push_back(std::acos(c));
      out.push_back(-std::acos(c));
    }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<double> complex_phases(const WalkSpectrum& s) {
  std::vector<double> out;
  for (const auto& p : s.pairs)
    if (p.kind == PhaseKind::complex) out.push_back(p.phase);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST(FullWalk, ShiftBasisExample) {
  const FullWalk w(TorusGrid(4), 1);
  const FullState out = w.shift(w.basis_state({{1, 2}, {D::right}}));
  const FullState want = w.basis_state({{2, 2}, {D::left}});
  EXPECT_EQ((out - want).norm(), 0.0);
}

TEST(FullWalk, ReflectionsSquareToIdentity) {
  auto rng = pwtest::make_rng(20);
  for (auto [side, t] : {std::pair{3, 1}, {3, 3}, {4, 1}, {5, 3}, {2, 5}}) {
    const FullWalk w(TorusGrid(side), t);
    const FullState x = pwtest::random_state(w.dimension(), rng);
    const Vertex m{1, 1};
    EXPECT_LE((w.shift(w.shift(x)) - x).norm(), 1e-14);
    EXPECT_LE((w.coin(w.coin(x)) - x).norm(), 1e-14);
    EXPECT_LE((w.oracle(m, w.oracle(m, x)) - x).norm(), 1e-12);
  }
}

TEST(FullWalk, ShiftMatrixIsSymmetricPermutationWithZeroDiagonal) {
  const FullWalk w(TorusGrid(3), 3);
  const Eigen::MatrixXd s = w.shift_matrix();
  EXPECT_EQ((s - s.transpose()).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(s.diagonal().cwiseAbs().maxCoeff(), 0.0);
  for (Eigen::Index i = 0; i < s.rows(); ++i) {
    EXPECT_EQ(s.row(i).sum(), 1.0);
    EXPECT_EQ(s.row(i).maxCoeff(), 1.0);
    EXPECT_EQ(s.col(i).sum(), 1.0);
  }
}

TEST(FullWalk, CoinFixesUniformAndNegatesComplement) {
  const FullWalk w(TorusGrid(3), 3);
  const FullState psi = w.coin_uniform_state({2, 1});
  EXPECT_LE((w.coin(psi) - psi).norm(), 1e-14);
  const FullState a = w.basis_state({{2, 1}, {D::right, D::up, D::up}});
  const FullState b = w.basis_state({{2, 1}, {D::left, D::down, D::up}});
  const FullState orth = (a - b) / std::sqrt(2.0);
  EXPECT_LE((w.coin(orth) + orth).norm(), 1e-14);
}

TEST(FullWalk, OracleReflectsOnlyTarget) {
  const FullWalk w(TorusGrid(5), 3);
  const Vertex m{3, 4};
  const FullState pm = w.coin_uniform_state(m);
  EXPECT_LE((w.oracle(m, pm) + pm).norm(), 1e-14);
  const FullState pu = w.coin_uniform_state({0, 4});
  EXPECT_LE((w.oracle(m, pu) - pu).norm(), 1e-14);
  EXPECT_THROW(w.oracle({5, 0}, pm), std::invalid_argument);
}

TEST(FullWalk, WalkIsShiftAfterCoin) {
  const FullWalk w(TorusGrid(4), 3);
  auto rng = pwtest::make_rng(21);
  const FullState x = pwtest::random_state(w.dimension(), rng);
  EXPECT_LE((w.walk(x) - w.shift(w.coin(x))).norm(), 1e-15);
  const Eigen::MatrixXd wm = w.walk_matrix();
  EXPECT_LE((wm - w.shift_matrix() * w.coin_matrix()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(FullWalk, NormPreservedOverManyApplications) {
  const FullWalk w(TorusGrid(5), 1);
  auto rng = pwtest::make_rng(22);
  FullState x = pwtest::random_state(w.dimension(), rng);
  const Vertex m{2, 2};
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    x = (i % 2) ? w.walk(x) : w.oracle(m, x);
    worst = std::max(worst, std::abs(x.norm() - 1.0));
  }
  EXPECT_LE(worst, 1e-12);
}

TEST(FullWalk, DimensionMismatchRejected) {
  const FullWalk w(TorusGrid(3), 1);
  EXPECT_THROW(w.shift(FullState::Zero(5)), std::invalid_argument);
  EXPECT_THROW(w.coin(FullState::Zero(37)), std::invalid_argument);
}

TEST(WalkSpectrum, PhasesMatchModeFormula) {
  for (int t : {1, 3}) {
    const FullWalk w(TorusGrid(5), t);
    const WalkSpectrum s = walk_spectrum(w);
    const std::vector<double> got = complex_phases(s);
    const std::vector<double> want = oracle_phases(5, t);
    ASSERT_EQ(got.size(), want.size()) << "t=" << t;
    EXPECT_LE(multiset_distance(got, want), 1e-9);
    EXPECT_EQ(got.size(), 48u);  // 2 (N - 1), plus the uniform state gives 2N - 1
  }
}

TEST(WalkSpectrum, CosineOfPhaseIsCubeAtT3) {
  const WalkSpectrum s = walk_spectrum(FullWalk(TorusGrid(5), 3));
  std::vector<double> cos_measured;
  for (double p : complex_phases(s)) cos_measured.push_back(std::cos(p));
  std::vector<double> cubes;
  for (int ky = 0; ky < 5; ++ky)
    for (int kx = 0; kx < 5; ++kx) {
      if (kx == 0 && ky == 0) continue;
      const double c = pwtest::mode_cos(5, kx, ky);
      cubes.push_back(c * c * c);
      cubes.push_back(c * c * c);
    }
  EXPECT_LE(multiset_distance(cos_measured, cubes), 1e-9);
}

TEST(WalkSpectrum, UniformStateIsOnlyPlusOneDirectionInCoinSpan) {
  for (int t : {1, 3}) {
    const FullWalk w(TorusGrid(5), t);
    const WalkSpectrum s = walk_spectrum(w);
    std::vector<Eigen::Index> plus;
    for (std::size_t j = 0; j < s.pairs.size(); ++j)
      if (s.pairs[j].kind == PhaseKind::plus_one) plus.push_back(static_cast<Eigen::Index>(j));
    Eigen::MatrixXcd basis(w.dimension(), static_cast<Eigen::Index>(plus.size()));
    for (std::size_t i = 0; i < plus.size(); ++i) basis.col(static_cast<Eigen::Index>(i)) = s.eigenvectors.col(plus[i]);
    Eigen::MatrixXcd psi(w.dimension(), 25);
    for (int u = 0; u < 25; ++u) psi.col(u) = w.coin_uniform_state(w.grid().vertex(u));
    const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXcd>(basis.adjoint() * psi).singularValues();
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) rank += sv(i) > 1e-9;
    EXPECT_EQ(rank, 1);
    EXPECT_NEAR((basis.adjoint() * w.uniform_state()).norm(), 1.0, 1e-10);
  }
}

TEST(ProjectionSum, HalfOnEveryNonRealEigenvector) {
  for (int t : {1, 3}) {
    const FullWalk w(TorusGrid(5), t);
    const WalkSpectrum s = walk_spectrum(w);
    for (std::size_t j = 0; j < s.pairs.size(); ++j) {
      if (s.pairs[j].kind != PhaseKind::complex) continue;
      EXPECT_NEAR(s.pairs[j].projection_sum, 0.5, 1e-9);
      EXPECT_NEAR(projection_sum(w, s.eigenvectors.col(static_cast<Eigen::Index>(j))), 0.5, 1e-9);
    }
  }
}

TEST(ProjectionSum, HalfAtT5FromModeEigenvectors) {
  const FullWalk w(TorusGrid(3), 5);
  for (std::int64_t i = 1; i < 9; ++i)
    for (int sign : {1, -1}) {
      const Mode k = w.grid().mode(i);
      const FullState v = fourier_eigenvector(w, k, sign);
      const double phase = sign * std::acos(std::pow(pwtest::mode_cos(3, k.kx, k.ky), 5));
      EXPECT_LE((w.walk(v) - std::polar(1.0, phase) * v).norm(), 1e-10);
      EXPECT_NEAR(projection_sum(w, v), 0.5, 1e-10);
    }
}

TEST(ProjectionSum, UniformAndRealEigenvectors) {
  const FullWalk w(TorusGrid(5), 1);
  EXPECT_NEAR(projection_sum(w, w.uniform_state()), 1.0, 1e-12);
  const WalkSpectrum s = walk_spectrum(w);
  double plus_total = 0.0;
  for (std::size_t j = 0; j < s.pairs.size(); ++j) {
    if (s.pairs[j].kind == PhaseKind::minus_one) EXPECT_NEAR(s.pairs[j].projection_sum, 0.0, 1e-9);
    if (s.pairs[j].kind == PhaseKind::plus_one) plus_total += s.pairs[j].projection_sum;
  }
  EXPECT_NEAR(plus_total, 1.0, 1e-9);
}

TEST(OverlapLaw, EveryTargetInEveryEigenspace) {
  for (int t : {1, 3}) {
    const FullWalk w(TorusGrid(5), t);
    const WalkSpectrum s = walk_spectrum(w);
    std::vector<Eigen::Index> cols;
    for (std::size_t j = 0; j < s.pairs.size(); ++j)
      if (s.pairs[j].kind == PhaseKind::complex) cols.push_back(static_cast<Eigen::Index>(j));
    std::sort(cols.begin(), cols.end(), [&](auto a, auto b) { return s.pairs[a].phase < s.pairs[b].phase; });
    std::size_t begin = 0;
    while (begin < cols.size()) {
      std::size_t end = begin + 1;
      while (end < cols.size() && s.pairs[cols[end]].phase - s.pairs[cols[end - 1]].phase < 1e-7) ++end;
      for (int m = 0; m < 25; ++m) {
        const FullState pm = w.coin_uniform_state(w.grid().vertex(m));
        double weight = 0.0;
        for (std::size_t i = begin; i < end; ++i) weight += std::norm(s.eigenvectors.col(cols[i]).dot(pm));
        // mixing within the eigenspace leaves each member at 1/(2N) on average
        EXPECT_NEAR(weight / static_cast<double>(end - begin), 0.02, 1e-9);
      }
      begin = end;
    }
  }
}

TEST(OverlapLaw, ModeEigenvectorsHaveUniformTargetWeight) {
  const FullWalk w(TorusGrid(5), 3);
  for (std::int64_t i = 1; i < 25; ++i) {
    const Eigen::VectorXcd a = w.coin_overlaps(fourier_eigenvector(w, w.grid().mode(i), 1));
    for (Eigen::Index m = 0; m < a.size(); ++m) EXPECT_NEAR(std::norm(a(m)), 0.02, 1e-12);
  }
}

TEST(PathComponents, MatchPredictionL3T3) {
  const FullWalk w(TorusGrid(3), 3);
  const WalkSpectrum s = walk_spectrum(w);
  double worst = 0.0;
  int checked = 0;
  for (std::size_t j = 0; j < s.pairs.size(); ++j) {
    if (s.pairs[j].kind != PhaseKind::complex) continue;
    const FullState v = s.eigenvectors.col(static_cast<Eigen::Index>(j));
    for (std::int64_t i = 0; i < w.dimension(); ++i) {
      const PathComponent c = path_component_check(w, v, s.pairs[j].phase, i);
      worst = std::max(worst, std::abs(c.measured_plus - c.predicted_plus));
      if (!c.minus_null) worst = std::max(worst, std::abs(c.measured_minus - c.predicted_minus));
      ++checked;
    }
  }
  EXPECT_GT(checked, 0);
  EXPECT_LE(worst, 1e-9);
}

TEST(PathComponents, ClosedPathHasNoMinusComponent) {
  // three steps right on L = 3 return to the start, so a_u = a_v
  const FullWalk w(TorusGrid(3), 3);
  const std::int64_t idx = w.basis_index({{1, 2}, {D::right, D::right, D::right}});
  ASSERT_EQ(w.grid().vertex(w.shift_target(idx) / w.coin_dimension()), (Vertex{1, 2}));
  const WalkSpectrum s = walk_spectrum(w);
  for (std::size_t j = 0; j < s.pairs.size(); ++j) {
    if (s.pairs[j].kind != PhaseKind::complex) continue;
    const PathComponent c = path_component_check(w, s.eigenvectors.col(static_cast<Eigen::Index>(j)), s.pairs[j].phase, idx);
    EXPECT_LE(std::abs(c.measured_minus), 1e-9);
    EXPECT_LE(std::abs(c.predicted_minus), 1e-9);
  }
}

TEST(PathComponents, SignFlipMovesMeasuredAndPredictedTogether) {
  const FullWalk w(TorusGrid(3), 3);
  const WalkSpectrum s = walk_spectrum(w);
  auto rng = pwtest::make_rng(23);
  int done = 0;
  for (std::size_t j = 0; j < s.pairs.size() && done < 5; ++j) {
    if (s.pairs[j].kind != PhaseKind::complex) continue;
    const FullState v = s.eigenvectors.col(static_cast<Eigen::Index>(j));
    const std::int64_t idx = pwtest::uniform_int(rng, 0, static_cast<int>(w.dimension()) - 1);
    const PathComponent a = path_component_check(w, v, s.pairs[j].phase, idx);
    const PathComponent b = path_component_check(w, FullState(-v), s.pairs[j].phase, idx);
    EXPECT_LE(std::abs(a.measured_minus + b.measured_minus), 1e-12);
    EXPECT_LE(std::abs(a.predicted_minus + b.predicted_minus), 1e-12);
    EXPECT_LE(std::abs(b.measured_minus - b.predicted_minus), 1e-9);
    ++done;
  }
}

TEST(WalkSpectrum, RefusesOverBudget) {
  const FullWalk w(TorusGrid(3), 5);
  EXPECT_THROW(walk_spectrum(w), BudgetExceeded);
  EXPECT_THROW(FullWalk(TorusGrid(3), 5, 1000), BudgetExceeded);
}

TEST(VerifySpectrum, AllChecksPassOnOddGrid) {
  for (int t : {1, 3}) {
    for (const auto& c : verify_walk_spectrum(FullWalk(TorusGrid(5), t)))
      EXPECT_TRUE(c.pass) << c.name << " t=" << t << " value=" << c.value << " " << c.detail;
  }
}

TEST(VerifySpectrum, BipartiteGridPasses) {
  for (int t : {1, 3}) {
    const auto checks = verify_walk_spectrum(FullWalk(TorusGrid(4), t));
    for (const auto& c : checks) EXPECT_TRUE(c.pass) << c.name << " t=" << t << " " << c.detail;
    const auto dim = std::find_if(checks.begin(), checks.end(), [](const auto& c) { return c.name == "invariant_dimension"; });
    ASSERT_NE(dim, checks.end());
    EXPECT_EQ(dim->value, 30.0);  // 2(N - 2) complex, one +1 and one -1 direction
  }
}

TEST(MultisetDistance, SizeMismatchIsInfinite) {
  EXPECT_TRUE(std::isinf(multiset_distance({1.0}, {1.0, 2.0})));
  EXPECT_DOUBLE_EQ(multiset_distance({2.0, 1.0}, {1.0, 2.5}), 0.5);
}

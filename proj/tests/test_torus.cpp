#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "generators.hpp"
#include "powerwalk/torus.hpp"

using namespace powerwalk;
using D = Direction;

TEST(Rotation, ShiftRule) {
  const TorusGrid g(4);
  const DirectedPort out = apply_rotation(g, {{1, 2}, D::right});
  EXPECT_EQ(out, (DirectedPort{{2, 2}, D::left}));
}

TEST(Rotation, Wraparound) {
  const TorusGrid g(4);
  EXPECT_EQ(apply_rotation(g, {{0, 0}, D::left}), (DirectedPort{{3, 0}, D::right}));
  EXPECT_EQ(apply_rotation(g, {{3, 3}, D::up}), (DirectedPort{{3, 0}, D::down}));
  EXPECT_EQ(apply_rotation(g, {{2, 0}, D::down}), (DirectedPort{{2, 3}, D::up}));
}

TEST(Rotation, InvolutionSingleStep) {
  const TorusGrid g(5);
  const DirectedPort p{{2, 3}, D::up};
  EXPECT_EQ(apply_rotation(g, apply_rotation(g, p)), p);
}

TEST(Rotation, ReversalPairs) {
  EXPECT_EQ(reversed(D::right), D::left);
  EXPECT_EQ(reversed(D::left), D::right);
  EXPECT_EQ(reversed(D::up), D::down);
  EXPECT_EQ(reversed(D::down), D::up);
}

TEST(PoweredRotation, DegeneratePowerMatchesRotation) {
  const TorusGrid g(6);
  for (int i = 0; i < 36; ++i)
    for (int d = 0; d < 4; ++d) {
      const Vertex v = g.vertex(i);
      const DirectedPort one = apply_rotation(g, {v, static_cast<D>(d)});
      const PathPort many = apply_powered_rotation(g, {v, {static_cast<D>(d)}});
      EXPECT_EQ(many.vertex, one.vertex);
      ASSERT_EQ(many.labels.size(), 1u);
      EXPECT_EQ(many.labels[0], one.label);
    }
}

TEST(PoweredRotation, ThreeStepExample) {
  const TorusGrid g(4);
  const PathPort out = apply_powered_rotation(g, {{0, 0}, {D::right, D::right, D::up}});
  EXPECT_EQ(out.vertex, (Vertex{2, 1}));
  EXPECT_EQ(out.labels, (std::vector<D>{D::down, D::left, D::left}));
}

TEST(PoweredRotation, InvolutionRandomPortsL5T3) {
  const TorusGrid g(5);
  auto rng = pwtest::make_rng(1);
  for (int i = 0; i < 100; ++i) {
    const PathPort p = pwtest::random_port(g, 3, rng);
    EXPECT_EQ(apply_powered_rotation(g, apply_powered_rotation(g, p)), p);
  }
}

TEST(PoweredRotation, InvolutionPropertyAcrossSizes) {
  auto rng = pwtest::make_rng(2);
  for (int trial = 0; trial < 300; ++trial) {
    const TorusGrid g(pwtest::uniform_int(rng, 2, 40));
    const int t = pwtest::random_odd(rng, 1, 9);
    const PathPort p = pwtest::random_port(g, t, rng);
    const PathPort q = apply_powered_rotation(g, p);
    EXPECT_EQ(apply_powered_rotation(g, q), p) << "L=" << g.side() << " t=" << t;
    const std::int64_t idx = g.index(p.vertex) * label_space_size(t) + encode_labels(p.labels);
    EXPECT_EQ(powered_rotation_index(g, t, idx), g.index(q.vertex) * label_space_size(t) + encode_labels(q.labels));
  }
}

TEST(PoweredRotation, OddWalkHasNoFixedPorts) {
  const TorusGrid g(3);
  const int t = 3;
  for (std::int64_t i = 0; i < g.vertex_count() * label_space_size(t); ++i)
    EXPECT_NE(powered_rotation_index(g, t, i), i);
}

TEST(Labels, EncodeDecodeRoundTrip) {
  auto rng = pwtest::make_rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const int t = pwtest::uniform_int(rng, 1, 10);
    const std::int64_t code = std::uniform_int_distribution<std::int64_t>(0, label_space_size(t) - 1)(rng);
    EXPECT_EQ(encode_labels(decode_labels(code, t)), code);
  }
  const std::vector<D> labels{D::left, D::right, D::down};
  EXPECT_EQ(encode_labels(labels), 1 * 16 + 0 * 4 + 3);
  EXPECT_EQ(label_space_size(3), 64);
}

TEST(Adjacency, EigenvalueExamples) {
  EXPECT_DOUBLE_EQ(adjacency_eigenvalue(TorusGrid(7), {0, 0}), 1.0);
  for (int side : {2, 4, 10}) EXPECT_NEAR(adjacency_eigenvalue(TorusGrid(side), {side / 2, side / 2}), -1.0, 1e-15);
  EXPECT_NEAR(adjacency_eigenvalue(TorusGrid(4), {1, 0}), 0.5, 1e-15);
}

TEST(Adjacency, SpectrumMatchesDenseMatrix) {
  for (int side = 2; side <= 8; ++side) {
    const TorusGrid g(side);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(pwtest::neighbor_matrix(side));
    std::vector<double> dense(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
    std::vector<double> formula;
    for (const auto& m : adjacency_spectrum(g).modes) formula.push_back(m.cos_phi);
    std::sort(dense.begin(), dense.end());
    std::sort(formula.begin(), formula.end());
    ASSERT_EQ(dense.size(), formula.size());
    for (std::size_t i = 0; i < dense.size(); ++i) EXPECT_NEAR(dense[i], formula[i], 1e-10) << "L=" << side;
  }
}

TEST(Adjacency, MatrixMatchesNeighborRules) {
  for (int side : {2, 3, 5, 6}) EXPECT_LE((adjacency_matrix(TorusGrid(side)) - pwtest::neighbor_matrix(side)).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Adjacency, LaplacianRowsSumToZero) {
  for (int side : {2, 3, 7, 12}) {
    const Eigen::MatrixXd a = adjacency_matrix(TorusGrid(side));
    const Eigen::MatrixXd lap = a - Eigen::MatrixXd::Identity(a.rows(), a.cols());
    EXPECT_LE(lap.rowwise().sum().cwiseAbs().maxCoeff(), 1e-12);
    for (const auto& m : adjacency_spectrum(TorusGrid(side)).modes) EXPECT_NEAR(m.laplacian_shift, m.cos_phi - 1.0, 1e-15);
  }
}

TEST(AdjacencyPower, SingleStepEntries) {
  const TorusGrid g(5);
  EXPECT_DOUBLE_EQ(adjacency_power_entry(g, 1, {1, 1}, {2, 1}), 0.25);
  EXPECT_DOUBLE_EQ(adjacency_power_entry(g, 1, {1, 1}, {1, 0}), 0.25);
  EXPECT_DOUBLE_EQ(adjacency_power_entry(g, 1, {1, 1}, {1, 1}), 0.0);
  EXPECT_DOUBLE_EQ(adjacency_power_entry(g, 1, {1, 1}, {3, 3}), 0.0);
  // L = 2: left and right neighbors coincide
  EXPECT_DOUBLE_EQ(adjacency_power_entry(TorusGrid(2), 1, {0, 0}, {1, 0}), 0.5);
}

TEST(AdjacencyPower, CubeMatchesDensePower) {
  const TorusGrid g(5);
  const Eigen::MatrixXd a = pwtest::neighbor_matrix(5);
  const Eigen::MatrixXd cube = a * a * a;
  double worst = 0.0;
  for (std::int64_t u = 0; u < g.vertex_count(); ++u)
    for (std::int64_t v = 0; v < g.vertex_count(); ++v)
      worst = std::max(worst, std::abs(adjacency_power_entry(g, 3, g.vertex(u), g.vertex(v)) - cube(u, v)));
  EXPECT_LE(worst, 1e-12);
}

TEST(AdjacencyPower, DoublyStochastic) {
  auto rng = pwtest::make_rng(4);
  for (int trial = 0; trial < 12; ++trial) {
    const TorusGrid g(pwtest::uniform_int(rng, 2, 6));
    const int t = pwtest::uniform_int(rng, 1, 5);
    const Vertex u = g.vertex(pwtest::uniform_int(rng, 0, static_cast<int>(g.vertex_count()) - 1));
    double row = 0.0;
    double col = 0.0;
    for (std::int64_t v = 0; v < g.vertex_count(); ++v) {
      row += adjacency_power_entry(g, t, u, g.vertex(v));
      col += adjacency_power_entry(g, t, g.vertex(v), u);
    }
    EXPECT_NEAR(row, 1.0, 1e-12);
    EXPECT_NEAR(col, 1.0, 1e-12);
  }
}

TEST(AdjacencyPower, RefusesOverBudget) {
  const TorusGrid g(3);
  EXPECT_THROW(adjacency_power_entry(g, 8, {0, 0}, {0, 0}), BudgetExceeded);
  EXPECT_NO_THROW(adjacency_power_entry(g, 8, {0, 0}, {0, 0}, 1 << 16));
  EXPECT_THROW(adjacency_power_entry(g, 0, {0, 0}, {0, 0}), std::invalid_argument);
}

TEST(Gaps, PoweredGapMatchesDirectFormula) {
  auto rng = pwtest::make_rng(5);
  for (int trial = 0; trial < 500; ++trial) {
    const int side = pwtest::uniform_int(rng, 2, 2000);
    const TorusGrid g(side);
    const Mode k{pwtest::uniform_int(rng, 0, side - 1), pwtest::uniform_int(rng, 0, side - 1)};
    const int t = pwtest::uniform_int(rng, 1, 15);
    const long double pi = 3.141592653589793238462643383279502884L;
    const long double c = 0.5L * (std::cos(2 * pi * k.kx / side) + std::cos(2 * pi * k.ky / side));
    const long double ref = 1.0L - std::pow(c, t);
    const double got = powered_gap(g, k, t);
    if (ref == 0.0L)
      EXPECT_EQ(got, 0.0);
    else
      EXPECT_NEAR(got / static_cast<double>(ref), 1.0, 1e-9) << "L=" << side << " t=" << t;
  }
}

TEST(Gaps, SmallGapHasFullRelativeAccuracy) {
  const TorusGrid g(20001);
  const double w = 2.0 * std::acos(-1.0) / 20001.0;
  // 1 - (1 + cos w)/2 = sin^2(w/2)
  const double expected = std::sin(w / 2) * std::sin(w / 2);
  EXPECT_NEAR(adjacency_gap(g, {1, 0}) / expected, 1.0, 1e-12);
  EXPECT_NEAR(powered_gap(g, {1, 0}, 1) / expected, 1.0, 1e-12);
  EXPECT_NEAR(powered_gap(g, {1, 0}, 5) / -std::expm1(5 * std::log1p(-expected)), 1.0, 1e-12);
}

TEST(Grid, RejectsTinySides) {
  EXPECT_THROW(TorusGrid(1), std::invalid_argument);
  EXPECT_THROW(TorusGrid(0), std::invalid_argument);
}

TEST(Grid, IndexRoundTrip) {
  const TorusGrid g(7);
  for (std::int64_t i = 0; i < g.vertex_count(); ++i) {
    EXPECT_EQ(g.index(g.vertex(i)), i);
    EXPECT_EQ(g.mode_index(g.mode(i)), i);
  }
  EXPECT_EQ(g.wrap(-1, 8), (Vertex{6, 1}));
}

#pragma once

// Exact simulation of the powered flip-flop walk on the full N * 4^t
// dimensional space. Small instances only: this is the brute-force reference
// that the reduced engine and the spectral statements are checked against.

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "powerwalk/orthogonal_eigen.hpp"
#include "powerwalk/torus.hpp"

namespace powerwalk {

/// Amplitudes indexed by vertex * 4^t + label code.
using FullState = Eigen::VectorXcd;

inline constexpr std::int64_t kDefaultDenseBudget = 4096;

class FullWalk {
 public:
  FullWalk(const TorusGrid& grid, int t, std::int64_t max_dimension = std::int64_t{1} << 24);

  const TorusGrid& grid() const noexcept { return grid_; }
  int steps() const noexcept { return t_; }
  std::int64_t coin_dimension() const noexcept { return coin_dim_; }
  std::int64_t dimension() const noexcept { return grid_.vertex_count() * coin_dim_; }

  FullState shift(const FullState& state) const;
  FullState coin(const FullState& state) const;
  FullState walk(const FullState& state) const;
  FullState oracle(Vertex marked, const FullState& state) const;

  /// |psi_u> = 4^{-t/2} sum_g |u, g>
  FullState coin_uniform_state(Vertex u) const;
  /// |Phi_0> = N^{-1/2} sum_u |psi_u>
  FullState uniform_state() const;
  FullState basis_state(const PathPort& port) const;

  std::int64_t basis_index(const PathPort& port) const;
  std::int64_t shift_target(std::int64_t index) const {
    return shift_table_[static_cast<std::size_t>(index)];
  }

  /// a_u = <state|psi_u> for every vertex u.
  Eigen::VectorXcd coin_overlaps(const FullState& state) const;

  Eigen::MatrixXd shift_matrix() const;
  Eigen::MatrixXd coin_matrix() const;
  Eigen::MatrixXd walk_matrix() const;
  Eigen::MatrixXd oracle_matrix(Vertex marked) const;

 private:
  void check_state(const FullState& state) const;
  std::int64_t block(Vertex v) const;

  TorusGrid grid_;
  int t_;
  std::int64_t coin_dim_;
  std::vector<std::int64_t> shift_table_;
};

struct WalkEigenpair {
  double phase = 0.0;
  PhaseKind kind = PhaseKind::complex;
  double projection_sum = 0.0;  // sum_u |<Phi|psi_u>|^2
};

struct WalkSpectrum {
  std::vector<WalkEigenpair> pairs;
  Eigen::MatrixXcd eigenvectors;  // column j belongs to pairs[j]
};

/// Full eigendecomposition of W_t. Refuses when N * 4^t exceeds the budget.
WalkSpectrum walk_spectrum(const FullWalk& walk, std::int64_t budget = kDefaultDenseBudget);

double projection_sum(const FullWalk& walk, const FullState& eigenvector);

struct PathComponent {
  std::complex<double> measured_plus;
  std::complex<double> predicted_plus;
  std::complex<double> measured_minus;
  std::complex<double> predicted_minus;
  bool minus_null = false;  // path is its own reversal, |p-> vanishes
};

/// Overlaps of an eigenvector with the path vectors |p+->, where the path runs
/// from the basis state at `basis_index` to its image under the powered
/// rotation map, measured directly and predicted from the vertex overlaps.
PathComponent path_component_check(const FullWalk& walk, const FullState& eigenvector,
                                   double phase, std::int64_t basis_index);

/// Eigenvector of W_t with eigenvalue e^{sign * i phi} assembled from the
/// complex Fourier mode k of the adjacency matrix through its path-basis
/// components. Requires 0 < phi < pi.
FullState fourier_eigenvector(const FullWalk& walk, Mode k, int sign);

/// |<psi_m|(W_t O_t)^q|Phi_0>|^2 for q = 0..steps.
std::vector<double> full_search_trajectory(const FullWalk& walk, Vertex marked, std::int64_t steps);

/// Sorted multiset {+-arccos(cos^t phi_k)} over modes with |cos^t phi_k| < 1.
std::vector<double> predicted_walk_phases(const TorusGrid& grid, int t);

/// Largest elementwise deviation of two sorted multisets, +inf on size mismatch.
double multiset_distance(std::vector<double> a, std::vector<double> b);

struct SpectrumCheck {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string detail;
};

struct SpectrumTolerances {
  double phase = 1e-9;
  double projection = 1e-9;
  double component = 1e-9;
  double unitarity = 1e-12;
};

/// Runs every spectral statement on one (L, t) instance and reports one line
/// per statement.
std::vector<SpectrumCheck> verify_walk_spectrum(const FullWalk& walk,
                                                const SpectrumTolerances& tol = {},
                                                std::int64_t budget = kDefaultDenseBudget);

}  // namespace powerwalk

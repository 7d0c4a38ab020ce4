#pragma once

// Szegedy quantization of symmetric Markov chains and its k-step version on
// k + 1 registers of dimension N, leftmost register most significant.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace powerwalk {

class MarkovChain {
 public:
  /// Validates symmetry, nonnegativity and unit row sums within `tol`.
  explicit MarkovChain(Eigen::MatrixXd transition, double tol = 1e-12);

  int size() const noexcept { return static_cast<int>(m_.rows()); }
  const Eigen::MatrixXd& matrix() const noexcept { return m_; }

  /// M^k as a chain.
  MarkovChain power(int k) const;

 private:
  Eigen::MatrixXd m_;
};

/// Reads an N x N grid of numbers. Blank lines and lines starting with '#'
/// are skipped; fields may be separated by commas or whitespace.
MarkovChain load_chain_csv(const std::string& path, double tol = 1e-12);

MarkovChain cycle_chain(int n);
MarkovChain complete_chain(int n);
/// laziness * I + (1 - laziness) * M
MarkovChain lazy_chain(const MarkovChain& chain, double laziness = 0.5);
/// Random symmetric off-diagonal weights, diagonal filling each row to 1.
MarkovChain random_symmetric_chain(int n, std::mt19937_64& rng);

/// Builds a chain by name: cycle, complete, lazy-cycle, lazy-complete, random.
MarkovChain named_chain(const std::string& name, int n, std::mt19937_64& rng);

inline constexpr std::int64_t kDefaultSzegedyBudget = 4096;

struct SzegedyWalk {
  int n = 0;
  int k = 0;
  Eigen::MatrixXd a;  // column i is |A^k_i>
  Eigen::MatrixXd b;  // column i is |B^k_i>

  std::int64_t dimension() const noexcept { return a.rows(); }
};

/// Prepares register r + 1 from register r:
/// |.., j, 0, ..> -> sum_x sqrt(M_jx) |.., j, x, ..>. Amplitude on basis
/// states whose register r + 1 is nonzero must be zero.
Eigen::VectorXd prepare_register(const MarkovChain& chain, int k, int r, const Eigen::VectorXd& state);

/// Reverses the order of the k + 1 registers.
Eigen::VectorXd reverse_registers(int n, int k, const Eigen::VectorXd& state);

SzegedyWalk build_isometries(const MarkovChain& chain, int k, std::int64_t budget = kDefaultSzegedyBudget);

/// A_k^T B_k
Eigen::MatrixXd discriminant(const SzegedyWalk& walk);

/// (2 B B^T - I)(2 A A^T - I) applied to a state.
Eigen::VectorXcd walk_apply(const SzegedyWalk& walk, const Eigen::VectorXcd& state);

Eigen::MatrixXd walk_matrix(const SzegedyWalk& walk);

/// Orthonormal basis of the complement of the simultaneous eigenspaces of the
/// two projectors: eigenvectors of A A^T + B B^T whose eigenvalue is farther
/// than `threshold` from 0, 1 and 2.
Eigen::MatrixXd nontrivial_subspace(const SzegedyWalk& walk, double threshold = 1e-9);

/// Sorted eigenphases of the walk restricted to its nontrivial subspace.
std::vector<double> nontrivial_phases(const SzegedyWalk& walk, double threshold = 1e-9);

/// Sorted +-2 arccos(sigma) over singular values sigma of D with
/// threshold < sigma < 1 - threshold.
std::vector<double> discriminant_phases(const Eigen::MatrixXd& d, double threshold = 1e-9);

/// Queries to the state-preparation maps per walk step: 4 k Q.
std::int64_t query_cost(int k, std::int64_t per_step_queries = 1);

}  // namespace powerwalk

#include "powerwalk/szegedy.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "powerwalk/orthogonal_eigen.hpp"
#include "powerwalk/torus.hpp"

namespace powerwalk {

namespace {

std::int64_t ipow(std::int64_t base, int exp) {
  std::int64_t r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

}  // namespace

MarkovChain::MarkovChain(Eigen::MatrixXd transition, double tol) : m_(std::move(transition)) {
  if (m_.rows() == 0 || m_.rows() != m_.cols()) throw std::invalid_argument("transition matrix must be square and nonempty");
  if (!m_.allFinite()) throw std::invalid_argument("transition matrix has non-finite entries");
  if (m_.minCoeff() < 0.0) throw std::invalid_argument("transition matrix has negative entries");
  if ((m_ - m_.transpose()).cwiseAbs().maxCoeff() > tol) throw std::invalid_argument("transition matrix is not symmetric");
  const Eigen::VectorXd rows = m_.rowwise().sum();
  if ((rows.array() - 1.0).abs().maxCoeff() > tol) throw std::invalid_argument("transition matrix rows do not sum to 1");
}

MarkovChain MarkovChain::power(int k) const {
  if (k < 1) throw std::invalid_argument("chain power must be >= 1");
  Eigen::MatrixXd p = m_;
  for (int i = 1; i < k; ++i) p = p * m_;
  p = 0.5 * (p + p.transpose());
  return MarkovChain(p, 1e-10);
}

MarkovChain load_chain_csv(const std::string& path, double tol) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open chain file: " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream fields(line);
    std::vector<double> row;
    std::string tok;
    while (fields >> tok) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(tok, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != tok.size()) throw std::runtime_error(path + ": not a number: '" + tok + "'");
      row.push_back(v);
    }
    rows.push_back(std::move(row));
  }
  const auto n = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (static_cast<Eigen::Index>(rows[static_cast<std::size_t>(i)].size()) != n)
      throw std::runtime_error(path + ": expected " + std::to_string(n) + " columns in row " + std::to_string(i + 1));
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }
  return MarkovChain(m, tol);
}

MarkovChain cycle_chain(int n) {
  if (n < 2) throw std::invalid_argument("cycle chain needs n >= 2");
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    m(i, (i + 1) % n) += 0.5;
    m(i, (i + n - 1) % n) += 0.5;
  }
  return MarkovChain(m);
}

MarkovChain complete_chain(int n) {
  if (n < 2) throw std::invalid_argument("complete chain needs n >= 2");
  Eigen::MatrixXd m = Eigen::MatrixXd::Constant(n, n, 1.0 / (n - 1));
  m.diagonal().setZero();
  return MarkovChain(m);
}

MarkovChain lazy_chain(const MarkovChain& chain, double laziness) {
  if (!(laziness >= 0.0 && laziness <= 1.0)) throw std::invalid_argument("laziness must lie in [0, 1]");
  const auto n = chain.size();
  return MarkovChain(laziness * Eigen::MatrixXd::Identity(n, n) + (1.0 - laziness) * chain.matrix());
}

MarkovChain random_symmetric_chain(int n, std::mt19937_64& rng) {
  if (n < 1) throw std::invalid_argument("chain size must be >= 1");
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) w(i, j) = w(j, i) = unit(rng);
  const double top = w.rowwise().sum().maxCoeff();
  const double fill = 0.5 + 0.5 * unit(rng);
  if (top > 0.0) w *= fill / top;
  for (int i = 0; i < n; ++i) w(i, i) = std::max(0.0, 1.0 - (w.row(i).sum() - w(i, i)));
  return MarkovChain(w);
}

MarkovChain named_chain(const std::string& name, int n, std::mt19937_64& rng) {
  if (name == "cycle") return cycle_chain(n);
  if (name == "complete") return complete_chain(n);
  if (name == "lazy-cycle") return lazy_chain(cycle_chain(n));
  if (name == "lazy-complete") return lazy_chain(complete_chain(n));
  if (name == "random") return random_symmetric_chain(n, rng);
  throw std::invalid_argument("unknown chain generator: " + name);
}

Eigen::VectorXd prepare_register(const MarkovChain& chain, int k, int r, const Eigen::VectorXd& state) {
  const int n = chain.size();
  if (r < 0 || r >= k) throw std::out_of_range("register index out of range");
  const std::int64_t dim = ipow(n, k + 1);
  if (state.size() != dim) throw std::invalid_argument("state dimension mismatch");
  const std::int64_t src_stride = ipow(n, k - r);
  const std::int64_t dst_stride = ipow(n, k - r - 1);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(dim);
  const Eigen::MatrixXd root = chain.matrix().cwiseSqrt();
  for (std::int64_t idx = 0; idx < dim; ++idx) {
    const double amp = state[idx];
    if (amp == 0.0) continue;
    if ((idx / dst_stride) % n != 0) throw std::invalid_argument("target register is not in |0>");
    const auto j = static_cast<Eigen::Index>((idx / src_stride) % n);
    for (Eigen::Index x = 0; x < n; ++x) out[idx + x * dst_stride] += amp * root(j, x);
  }
  return out;
}

Eigen::VectorXd reverse_registers(int n, int k, const Eigen::VectorXd& state) {
  const std::int64_t dim = ipow(n, k + 1);
  if (state.size() != dim) throw std::invalid_argument("state dimension mismatch");
  Eigen::VectorXd out(dim);
  for (std::int64_t idx = 0; idx < dim; ++idx) {
    std::int64_t rest = idx;
    std::int64_t rev = 0;
    for (int r = 0; r <= k; ++r) {
      rev = rev * n + rest % n;
      rest /= n;
    }
    out[rev] = state[idx];
  }
  return out;
}

SzegedyWalk build_isometries(const MarkovChain& chain, int k, std::int64_t budget) {
  if (k < 1) throw std::invalid_argument("step count k must be >= 1");
  const int n = chain.size();
  double dim_estimate = std::pow(static_cast<double>(n), k + 1);
  if (dim_estimate > static_cast<double>(budget))
    throw BudgetExceeded("N^(k+1) = " + std::to_string(static_cast<long long>(dim_estimate)) +
                         " exceeds budget " + std::to_string(budget));
  const std::int64_t dim = ipow(n, k + 1);
  SzegedyWalk w;
  w.n = n;
  w.k = k;
  w.a.resize(dim, n);
  w.b.resize(dim, n);
  const std::int64_t lead = ipow(n, k);
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(dim);
    v[i * lead] = 1.0;
    for (int r = 0; r < k; ++r) v = prepare_register(chain, k, r, v);
    w.a.col(i) = v;
    w.b.col(i) = reverse_registers(n, k, v);
  }
  return w;
}

Eigen::MatrixXd discriminant(const SzegedyWalk& walk) { return walk.a.transpose() * walk.b; }

Eigen::VectorXcd walk_apply(const SzegedyWalk& walk, const Eigen::VectorXcd& state) {
  if (state.size() != walk.dimension()) throw std::invalid_argument("state dimension mismatch");
  const Eigen::MatrixXcd a = walk.a.cast<std::complex<double>>();
  const Eigen::MatrixXcd b = walk.b.cast<std::complex<double>>();
  Eigen::VectorXcd x = 2.0 * (a * (a.adjoint() * state)) - state;
  return 2.0 * (b * (b.adjoint() * x)) - x;
}

Eigen::MatrixXd walk_matrix(const SzegedyWalk& walk) {
  const auto dim = walk.dimension();
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(dim, dim);
  const Eigen::MatrixXd ra = 2.0 * walk.a * walk.a.transpose() - id;
  const Eigen::MatrixXd rb = 2.0 * walk.b * walk.b.transpose() - id;
  return rb * ra;
}

Eigen::MatrixXd nontrivial_subspace(const SzegedyWalk& walk, double threshold) {
  const Eigen::MatrixXd p = walk.a * walk.a.transpose() + walk.b * walk.b.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(p);
  std::vector<Eigen::Index> keep;
  for (Eigen::Index j = 0; j < p.rows(); ++j) {
    const double lam = solver.eigenvalues()[j];
    if (std::min({std::abs(lam), std::abs(lam - 1.0), std::abs(lam - 2.0)}) > threshold) keep.push_back(j);
  }
  Eigen::MatrixXd basis(p.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c) basis.col(static_cast<Eigen::Index>(c)) = solver.eigenvectors().col(keep[c]);
  return basis;
}

std::vector<double> nontrivial_phases(const SzegedyWalk& walk, double threshold) {
  const Eigen::MatrixXd basis = nontrivial_subspace(walk, threshold);
  if (basis.cols() == 0) return {};
  const Eigen::MatrixXd restricted = basis.transpose() * walk_matrix(walk) * basis;
  const OrthogonalEigen eig = eig_orthogonal(restricted);
  std::vector<double> phases(eig.phases.data(), eig.phases.data() + eig.phases.size());
  std::sort(phases.begin(), phases.end());
  return phases;
}

std::vector<double> discriminant_phases(const Eigen::MatrixXd& d, double threshold) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(d);
  std::vector<double> phases;
  for (Eigen::Index j = 0; j < svd.singularValues().size(); ++j) {
    const double s = svd.singularValues()[j];
    if (s > threshold && s < 1.0 - threshold) {
      phases.push_back(2.0 * std::acos(s));
      phases.push_back(-2.0 * std::acos(s));
    }
  }
  std::sort(phases.begin(), phases.end());
  return phases;
}

std::int64_t query_cost(int k, std::int64_t per_step_queries) {
  if (k < 1) throw std::invalid_argument("step count k must be >= 1");
  if (per_step_queries < 0) throw std::invalid_argument("per-step query count must be >= 0");
  return 4 * static_cast<std::int64_t>(k) * per_step_queries;
}

}  // namespace powerwalk

#include "powerwalk/orthogonal_eigen.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace powerwalk {

OrthogonalEigen eig_orthogonal(const Eigen::MatrixXd& w, double cluster_tol) {
  if (w.rows() != w.cols()) throw std::invalid_argument("eig_orthogonal: matrix not square");
  const Eigen::Index n = w.rows();

  const Eigen::MatrixXd sym = 0.5 * (w + w.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> sym_solver(sym);
  if (sym_solver.info() != Eigen::Success)
    throw std::runtime_error("eig_orthogonal: symmetric eigensolver failed");
  const Eigen::VectorXd& cosines = sym_solver.eigenvalues();
  const Eigen::MatrixXd& basis = sym_solver.eigenvectors();

  OrthogonalEigen out;
  out.phases.resize(n);
  out.eigenvectors.resize(n, n);

  Eigen::Index begin = 0;
  while (begin < n) {
    Eigen::Index end = begin + 1;
    while (end < n && cosines(end) - cosines(end - 1) < cluster_tol) ++end;
    const Eigen::Index m = end - begin;
    const Eigen::MatrixXd e = basis.middleCols(begin, m);
    const Eigen::MatrixXd we = w * e;
    const Eigen::MatrixXd restricted = e.transpose() * we;
    const Eigen::MatrixXd skew = restricted - restricted.transpose();
    const double c = cosines.segment(begin, m).mean();
    if (std::abs(c) > 1.0 - cluster_tol && skew.cwiseAbs().maxCoeff() < 1e-10) {
      // real +-1 eigenspace
      out.phases.segment(begin, m).setConstant(c > 0 ? 0.0 : std::numbers::pi);
      out.eigenvectors.middleCols(begin, m) = e.cast<std::complex<double>>();
      begin = end;
      continue;
    }
    const Eigen::MatrixXcd herm =
        std::complex<double>(0.0, 0.5) * skew.cast<std::complex<double>>();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> split(herm);
    if (split.info() != Eigen::Success)
      throw std::runtime_error("eig_orthogonal: cluster eigensolver failed");
    const Eigen::MatrixXcd vecs = e.cast<std::complex<double>>() * split.eigenvectors();
    const Eigen::MatrixXcd images = we.cast<std::complex<double>>() * split.eigenvectors();
    for (Eigen::Index j = 0; j < m; ++j) {
      const Eigen::VectorXcd v = vecs.col(j);
      const std::complex<double> lambda = v.dot(images.col(j));
      const double phase = std::arg(lambda);
      out.phases(begin + j) = phase <= -std::numbers::pi ? std::numbers::pi : phase;
      out.eigenvectors.col(begin + j) = v;
    }
    begin = end;
  }
  return out;
}

PhaseKind classify_phase(double phase, double tol) {
  const double a = std::abs(phase);
  if (a < tol) return PhaseKind::plus_one;
  if (a > std::numbers::pi - tol) return PhaseKind::minus_one;
  return PhaseKind::complex;
}

}  // namespace powerwalk

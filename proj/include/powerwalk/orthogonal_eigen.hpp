#pragma once

// Eigendecomposition of a real orthogonal matrix with an orthonormal set of
// complex eigenvectors.
//
// The symmetric part (W + W^T)/2 commutes with W and has eigenvalue cos(phi)
// on the e^{+-i phi} eigenvectors. Each of its eigenspaces is W-invariant, and
// inside one with |cos(phi)| < 1 the Hermitian matrix i(W - W^T)/2 separates
// the two conjugate phases. Degenerate eigenspaces therefore come out with an
// arbitrary but orthonormal basis.

#include <Eigen/Dense>

namespace powerwalk {

struct OrthogonalEigen {
  Eigen::VectorXd phases;         // in (-pi, pi]
  Eigen::MatrixXcd eigenvectors;  // columns, orthonormal
};

OrthogonalEigen eig_orthogonal(const Eigen::MatrixXd& w, double cluster_tol = 1e-8);

/// Eigenphase classification used across the walk modules.
enum class PhaseKind { plus_one, minus_one, complex };

PhaseKind classify_phase(double phase, double tol = 1e-8);

}  // namespace powerwalk

#pragma once

#include <cstdint>
#include <functional>

#include <Eigen/Dense>

namespace xyneg {

using MatVec = std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&)>;

/// All eigenvalues of a real symmetric matrix, ascending (LAPACK dsyevd).
Eigen::VectorXd symmetric_eigenvalues(const Eigen::MatrixXd& a);

/// Full decomposition; eigenvalues ascending, columns of `vectors` match.
void symmetric_eigen(const Eigen::MatrixXd& a, Eigen::VectorXd& values,
                     Eigen::MatrixXd& vectors);

struct LanczosOptions {
  double residual_tol = 0.0;   // absolute residual target (0 = off)
  double rel_residual_tol = 1e-9;  // residual target relative to |theta|
  int max_basis = 250;         // Krylov vectors per restart cycle
  int max_restarts = 200;
  std::uint32_t seed = 0x5eedu;  // deterministic start vector when none given
};

struct LanczosResult {
  double eigenvalue = 0.0;
  double second = 0.0;  // next Ritz value, a gap estimate
  Eigen::VectorXd eigenvector;
  double residual = 0.0;
  int matvecs = 0;
  bool converged = false;
};

/// Smallest eigenpair of a symmetric operator given by its action.
/// Fully reorthogonalized, restarted, deterministic for fixed inputs.
LanczosResult lanczos_ground(const MatVec& apply, Eigen::Index dim,
                             const LanczosOptions& opt,
                             const Eigen::VectorXd* start = nullptr);

/// Reproducible pseudo-random unit vector.
Eigen::VectorXd deterministic_unit_vector(Eigen::Index dim, std::uint32_t seed);

}  // namespace xyneg

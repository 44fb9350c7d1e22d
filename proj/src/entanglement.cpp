#include "xyneg/entanglement.hpp"

#include <cmath>
#include <stdexcept>

#include "xyneg/linalg.hpp"

namespace xyneg {

void DensityOperator::check(double tol) const {
  if (matrix.rows() != matrix.cols())
    throw std::invalid_argument("density operator not square");
  if (d_s * d_e != matrix.rows())
    throw std::invalid_argument("dimension does not factor into d_s * d_e");
  if (std::abs(matrix.trace() - 1.0) > tol)
    throw std::runtime_error("density operator trace deviates from 1 by " +
                             std::to_string(std::abs(matrix.trace() - 1.0)));
  if ((matrix - matrix.transpose()).cwiseAbs().maxCoeff() > tol)
    throw std::runtime_error("density operator not symmetric");
}

Eigen::MatrixXd partial_transpose(const DensityOperator& rho) {
  const Eigen::Index ds = rho.d_s, de = rho.d_e;
  if (ds * de != rho.matrix.rows())
    throw std::invalid_argument("dimension does not factor into d_s * d_e");
  Eigen::MatrixXd out(ds * de, ds * de);
  for (Eigen::Index i = 0; i < ds; ++i)
    for (Eigen::Index k = 0; k < ds; ++k)
      out.block(i * de, k * de, de, de) = rho.matrix.block(k * de, i * de, de, de);
  return out;
}

NegativityResult negativity(const DensityOperator& rho) {
  const Eigen::MatrixXd pt = partial_transpose(rho);
  const Eigen::VectorXd evs = symmetric_eigenvalues(pt);

  NegativityResult r;
  r.d_s = rho.d_s;
  r.d_e = rho.d_e;
  r.block_len = rho.block_len;
  r.separation = rho.separation;
  r.mu = rho.block_len > 0 ? rho.mu() : 0.0;
  r.min_eigenvalue = evs(0);
  double neg = evs.cwiseAbs().sum() - 1.0;
  if (std::abs(neg) < 1e-12) neg = 0.0;
  r.negativity = neg;
  r.log_negativity = std::log2(neg + 1.0);
  return r;
}

double von_neumann_entropy(const DensityOperator& rho) {
  const Eigen::VectorXd evs = symmetric_eigenvalues(rho.matrix);
  if (evs(0) < -1e-8)
    throw std::runtime_error("density operator has eigenvalue " +
                             std::to_string(evs(0)));
  double s = 0.0;
  for (Eigen::Index i = 0; i < evs.size(); ++i)
    if (evs(i) > 1e-14) s -= evs(i) * std::log2(evs(i));
  return s;
}

}  // namespace xyneg

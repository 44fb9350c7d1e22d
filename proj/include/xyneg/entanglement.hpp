#pragma once

#include <Eigen/Dense>

#include "xyneg/density_operator.hpp"

namespace xyneg {

struct NegativityResult {
  double negativity = 0.0;      // sum |a_i| - 1 over partial-transpose eigenvalues
  double log_negativity = 0.0;  // log2(negativity + 1)
  double min_eigenvalue = 0.0;  // most negative partial-transpose eigenvalue
  Eigen::Index d_s = 0, d_e = 0;
  int block_len = 0;
  int separation = 0;
  double mu = 0.0;
};

/// Partial transpose on the system factor:
///   <ij| rho^Ts |kl> = <kj| rho |il>.
/// Trace preserving, involutive, output symmetric.
Eigen::MatrixXd partial_transpose(const DensityOperator& rho);

/// Negativity of rho from the full partial-transpose spectrum. Values with
/// |N| < 1e-12 are reported as exactly zero.
NegativityResult negativity(const DensityOperator& rho);

/// -sum p log2 p over eigenvalues p > 1e-14. Throws if rho has an
/// eigenvalue below -1e-8.
double von_neumann_entropy(const DensityOperator& rho);

}  // namespace xyneg

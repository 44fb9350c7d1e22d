#pragma once

#include <Eigen/Dense>

namespace xyneg {

enum class BasisTag { decimated, physical };

// Hermitian (here: real symmetric) operator on a labeled product space
// system (x) environment. For block pairs cut out of a chain of N sites,
// N = 2*block_len + separation.
struct DensityOperator {
  Eigen::MatrixXd matrix;  // (d_s*d_e) square; system index slow
  Eigen::Index d_s = 0;
  Eigen::Index d_e = 0;
  int block_len = 0;    // sites per block
  int separation = 0;   // sites between the blocks
  BasisTag basis = BasisTag::physical;

  double mu() const { return static_cast<double>(separation) / block_len; }

  // trace 1, symmetry, factorizable dimension; throws on violation
  void check(double tol = 1e-8) const;
};

}  // namespace xyneg

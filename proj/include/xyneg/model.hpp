#pragma once

#include <complex>

#include <Eigen/Dense>

namespace xyneg {

// Parameters of the open-boundary XY chain
//
//   H = -sum_{k=1}^{N-1} [ (1+g)/2 x_k x_{k+1} + (1-g)/2 y_k y_{k+1} ]
//       - lambda sum_{k=1}^{N} z_k
//
// g interpolates between the transverse Ising chain (g=1) and the XX
// chain (g=0). Every matrix element of H is real, so the whole code base
// works in real symmetric storage; the y-y coupling enters through the
// real generator i*sigma_y.
struct ModelParams {
  int n_sites = 0;
  double gamma = 1.0;
  double lambda = 1.0;

  bool is_xx() const { return gamma == 0.0; }
  void validate() const;  // throws std::invalid_argument
};

// the three critical points used throughout
ModelParams critical_ising(int n_sites);  // (gamma, lambda) = (1, 1)
ModelParams critical_xy(int n_sites);     // (0.5, 1)
ModelParams critical_xx(int n_sites);     // (0, 0)

/// 2x2 single-site operator tagged with its Pauli label ('x','y','z','i')
struct LocalOperator {
  Eigen::Matrix2cd matrix;
  char label = 'i';
};
LocalOperator local_operator(char label);

// real single-site generators; bit 0 = spin up (sigma_z eigenvalue +1)
Eigen::Matrix2d pauli_x();
Eigen::Matrix2d pauli_z();
Eigen::Matrix2d pauli_iy();  // i*sigma_y = [[0,1],[-1,0]]

/// Two-site coupling -[(1+g)/2] xx - [(1-g)/2] yy as a real 4x4 matrix.
/// The first site is the slow index of the tensor-product basis.
Eigen::Matrix4d bond_term(const ModelParams& p);

/// Dense H on the full 2^N space, real symmetric. Site 1 is the most
/// significant bit of the basis index. Guarded to n_sites <= 14 since the
/// matrix holds 4^N doubles. Accepts any real lambda (sign tests use
/// lambda < 0); gamma outside [0,1] is rejected.
Eigen::MatrixXd build_dense_hamiltonian(const ModelParams& p);

/// Matrix-free out = H*v on the full 2^N space (n_sites <= 24).
void apply_hamiltonian(const ModelParams& p, const Eigen::VectorXd& v,
                       Eigen::VectorXd& out);

}  // namespace xyneg

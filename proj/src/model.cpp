#include "xyneg/model.hpp"

#include <stdexcept>
#include <string>

#include <unsupported/Eigen/KroneckerProduct>

namespace xyneg {

namespace {
constexpr int kDenseGuard = 14;  // 4^14 doubles = 2 GiB, the practical ceiling
constexpr int kFullSpaceGuard = 24;

void check_gamma(double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0))
    throw std::invalid_argument("gamma must lie in [0,1], got " + std::to_string(gamma));
}
}  // namespace

void ModelParams::validate() const {
  if (n_sites < 2) throw std::invalid_argument("n_sites must be >= 2");
  check_gamma(gamma);
  if (lambda < 0.0) throw std::invalid_argument("lambda must be >= 0");
}

ModelParams critical_ising(int n_sites) { return {n_sites, 1.0, 1.0}; }
ModelParams critical_xy(int n_sites) { return {n_sites, 0.5, 1.0}; }
ModelParams critical_xx(int n_sites) { return {n_sites, 0.0, 0.0}; }

LocalOperator local_operator(char label) {
  using namespace std::complex_literals;
  LocalOperator op;
  op.label = label;
  op.matrix.setZero();
  switch (label) {
    case 'x': op.matrix << 0, 1, 1, 0; break;
    case 'y': op.matrix << 0, -1i, 1i, 0; break;
    case 'z': op.matrix << 1, 0, 0, -1; break;
    case 'i': op.matrix.setIdentity(); break;
    default: throw std::invalid_argument("unknown operator label");
  }
  return op;
}

Eigen::Matrix2d pauli_x() {
  Eigen::Matrix2d m;
  m << 0, 1, 1, 0;
  return m;
}

Eigen::Matrix2d pauli_z() {
  Eigen::Matrix2d m;
  m << 1, 0, 0, -1;
  return m;
}

Eigen::Matrix2d pauli_iy() {
  Eigen::Matrix2d m;
  m << 0, 1, -1, 0;
  return m;
}

Eigen::Matrix4d bond_term(const ModelParams& p) {
  check_gamma(p.gamma);
  // -[(1+g)/2] x(x) - [(1-g)/2] y(y); with t = i*sigma_y, y(y) = -t(t)
  const Eigen::Matrix2d x = pauli_x();
  const Eigen::Matrix2d t = pauli_iy();
  Eigen::Matrix4d b = -0.5 * (1.0 + p.gamma) * Eigen::kroneckerProduct(x, x)
                      + 0.5 * (1.0 - p.gamma) * Eigen::kroneckerProduct(t, t);
  return b;
}

Eigen::MatrixXd build_dense_hamiltonian(const ModelParams& p) {
  if (p.n_sites < 2) throw std::invalid_argument("n_sites must be >= 2");
  check_gamma(p.gamma);
  if (p.n_sites > kDenseGuard)
    throw std::length_error("dense Hamiltonian limited to n_sites <= " +
                            std::to_string(kDenseGuard));

  const int n = p.n_sites;
  const long dim = 1L << n;
  const double wx = 0.5 * (1.0 + p.gamma);
  const double wy = 0.5 * (1.0 - p.gamma);

  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  for (long i = 0; i < dim; ++i) {
    // field: bit 0 means up (sigma_z = +1); site k sits at bit n-k
    double diag = 0.0;
    for (int k = 0; k < n; ++k)
      diag += ((i >> (n - 1 - k)) & 1) ? 1.0 : -1.0;
    h(i, i) += p.lambda * diag;  // -lambda * sum z  with z = +1 for bit 0

    for (int k = 0; k < n - 1; ++k) {
      const int bk = n - 1 - k, bk1 = n - 2 - k;
      const long j = i ^ (1L << bk) ^ (1L << bk1);
      // t|up> = -|down>, t|down> = +|up>
      const double sk = ((i >> bk) & 1) ? 1.0 : -1.0;
      const double sk1 = ((i >> bk1) & 1) ? 1.0 : -1.0;
      h(j, i) += -wx + wy * sk * sk1;
    }
  }
  return h;
}

void apply_hamiltonian(const ModelParams& p, const Eigen::VectorXd& v,
                       Eigen::VectorXd& out) {
  if (p.n_sites < 2 || p.n_sites > kFullSpaceGuard)
    throw std::length_error("full-space apply limited to 2 <= n_sites <= " +
                            std::to_string(kFullSpaceGuard));
  check_gamma(p.gamma);
  const int n = p.n_sites;
  const long dim = 1L << n;
  if (v.size() != dim) throw std::invalid_argument("state dimension mismatch");

  const double wx = 0.5 * (1.0 + p.gamma);
  const double wy = 0.5 * (1.0 - p.gamma);

  out.resize(dim);
  for (long i = 0; i < dim; ++i) {
    double diag = 0.0;
    for (int k = 0; k < n; ++k)
      diag += ((i >> (n - 1 - k)) & 1) ? 1.0 : -1.0;
    out(i) = p.lambda * diag * v(i);
  }
  for (int k = 0; k < n - 1; ++k) {
    const int bk = n - 1 - k, bk1 = n - 2 - k;
    const long mask = (1L << bk) | (1L << bk1);
    for (long i = 0; i < dim; ++i) {
      const long j = i ^ mask;
      const double sk = ((i >> bk) & 1) ? 1.0 : -1.0;
      const double sk1 = ((i >> bk1) & 1) ? 1.0 : -1.0;
      out(j) += (-wx + wy * sk * sk1) * v(i);
    }
  }
}

}  // namespace xyneg

#include "xyneg/exact.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>
#include <string>

#include "xyneg/entanglement.hpp"
#include "xyneg/linalg.hpp"

namespace xyneg {

namespace {

constexpr int kFullSpaceGuard = 24;
constexpr int kDenseSolveGuard = 12;
constexpr int kSubsetGuard = 12;

// deterministic start vector restricted to the zero-magnetization sector
Eigen::VectorXd sector_start(int n, std::uint32_t seed) {
  const long dim = 1L << n;
  Eigen::VectorXd v = deterministic_unit_vector(dim, seed);
  for (long i = 0; i < dim; ++i)
    if (2 * std::popcount(static_cast<unsigned long>(i)) != n) v(i) = 0.0;
  const double nrm = v.norm();
  if (nrm == 0.0) throw std::runtime_error("empty magnetization sector");
  return v / nrm;
}

}  // namespace

ExactGroundState exact_ground_state(const ModelParams& p) {
  p.validate();
  if (p.n_sites > kFullSpaceGuard)
    throw std::length_error("exact solver limited to n_sites <= " +
                            std::to_string(kFullSpaceGuard));
  const int n = p.n_sites;
  const long dim = 1L << n;
  const bool sector = p.is_xx() && n % 2 == 0;

  ExactGroundState gs;
  gs.state.n_sites = n;

  if (n <= kDenseSolveGuard && !sector) {
    Eigen::MatrixXd h = build_dense_hamiltonian(p);
    Eigen::VectorXd vals;
    Eigen::MatrixXd vecs;
    symmetric_eigen(h, vals, vecs);
    gs.energy = vals(0);
    gs.state.amplitudes = vecs.col(0);
    gs.gap = vals(1) - vals(0);
  } else {
    LanczosOptions opt;
    opt.residual_tol = 1e-10;
    opt.rel_residual_tol = 0.0;
    opt.max_basis = n > 20 ? 48 : 250;
    MatVec hv = [&p](const Eigen::VectorXd& v, Eigen::VectorXd& out) {
      apply_hamiltonian(p, v, out);
    };
    Eigen::VectorXd v0;
    const Eigen::VectorXd* v0p = nullptr;
    if (sector) {
      // the XX Hamiltonian conserves magnetization exactly, so iterates
      // started inside the sector stay there
      v0 = sector_start(n, opt.seed);
      v0p = &v0;
    }
    LanczosResult r = lanczos_ground(hv, dim, opt, v0p);
    if (!r.converged)
      throw std::runtime_error("exact ground state did not converge, residual " +
                               std::to_string(r.residual));
    gs.energy = r.eigenvalue;
    gs.state.amplitudes = r.eigenvector;
    gs.gap = r.second - r.eigenvalue;
  }
  gs.degenerate = gs.gap < 1e-10;
  return gs;
}

DensityOperator reduced_density_operator(const PureState& psi,
                                         const std::vector<int>& sites) {
  const int n = psi.n_sites;
  if (psi.amplitudes.size() != (1L << n))
    throw std::invalid_argument("state dimension mismatch");
  if (sites.empty() || sites.size() > kSubsetGuard)
    throw std::invalid_argument("site subset must have 1..12 elements");
  std::vector<int> sorted = sites;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw std::invalid_argument("site list has duplicates");
  if (sorted.front() < 1 || sorted.back() > n)
    throw std::invalid_argument("site index outside 1..n_sites");

  const int na = static_cast<int>(sites.size());
  const int nb = n - na;
  std::vector<int> rest;
  rest.reserve(static_cast<size_t>(nb));
  for (int k = 1; k <= n; ++k)
    if (!std::binary_search(sorted.begin(), sorted.end(), k)) rest.push_back(k);

  const long da = 1L << na, db = 1L << nb;
  // T(a, b) = amplitude; first listed site = most significant bit of a
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(da, db);
  const long dim = 1L << n;
  for (long i = 0; i < dim; ++i) {
    long a = 0, b = 0;
    for (int k = 0; k < na; ++k)
      a = (a << 1) | ((i >> (n - sites[static_cast<size_t>(k)])) & 1);
    for (int k = 0; k < nb; ++k)
      b = (b << 1) | ((i >> (n - rest[static_cast<size_t>(k)])) & 1);
    t(a, b) = psi.amplitudes(i);
  }

  DensityOperator rho;
  rho.matrix.noalias() = t * t.transpose();
  rho.d_s = da;
  rho.d_e = 1;
  rho.basis = BasisTag::physical;
  return rho;
}

DensityOperator exact_rho_se(const PureState& psi, int block_len,
                             int separation) {
  const int n = psi.n_sites;
  if (block_len < 1 || separation < 0 || 2 * block_len + separation > n)
    throw std::invalid_argument("blocks do not fit the chain");
  const int span = 2 * block_len + separation;
  if ((n - span) % 2 != 0)
    throw std::invalid_argument("blocks cannot be centered on this chain");
  const int offset = (n - span) / 2;

  std::vector<int> sites;
  for (int k = 1; k <= block_len; ++k) sites.push_back(offset + k);
  for (int k = 1; k <= block_len; ++k)
    sites.push_back(offset + block_len + separation + k);

  DensityOperator rho = reduced_density_operator(psi, sites);
  rho.d_s = 1L << block_len;
  rho.d_e = 1L << block_len;
  rho.block_len = block_len;
  rho.separation = separation;
  return rho;
}

double oracle_negativity(const ModelParams& p, int block_len, int separation) {
  if (2 * block_len + separation > p.n_sites)
    throw std::invalid_argument("blocks do not fit the chain");
  const ExactGroundState gs = exact_ground_state(p);
  const DensityOperator rho = exact_rho_se(gs.state, block_len, separation);
  return negativity(rho).negativity;
}

Eigen::VectorXd schmidt_weights(const PureState& psi, int left_sites) {
  const int n = psi.n_sites;
  if (left_sites < 1 || left_sites >= n)
    throw std::invalid_argument("bipartition cut outside the chain");
  const long dl = 1L << left_sites, dr = 1L << (n - left_sites);
  // site 1 is the most significant bit, so the amplitude vector in
  // row-major (left, right) order is exactly a dl x dr matrix
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                 Eigen::RowMajor>>
      a(psi.amplitudes.data(), dl, dr);
  Eigen::VectorXd sv = a.jacobiSvd().singularValues();
  Eigen::VectorXd w = sv.array().square();
  std::sort(w.data(), w.data() + w.size(), std::greater<double>());
  return w;
}

}  // namespace xyneg

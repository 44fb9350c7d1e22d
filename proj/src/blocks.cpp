#include "xyneg/blocks.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace xyneg {

namespace {

using Eigen::Index;
using Eigen::Map;
using Eigen::MatrixXd;

constexpr double kIsometryTol = 1e-10;
constexpr double kTraceTol = 1e-8;

// rho -> (K (x) I_fast) rho (K (x) I_fast)^T for a factor on the slow index,
// accumulated into acc. Both multiplications run as single large GEMMs on
// reshaped views; the column grouping (slow index outermost) makes the
// right-multiplied result land directly in the correct layout.
void conj_slow_accumulate(const MatrixXd& rho, const MatrixXd& k, Index d_fast,
                          MatrixXd& acc) {
  const Index d_old = k.cols(), d_new = k.rows();
  const Index nrow = rho.rows();
  // right: z = rho * (k^T (x) I)
  MatrixXd z(nrow, d_new * d_fast);
  Map<MatrixXd>(z.data(), nrow * d_fast, d_new).noalias() =
      Map<const MatrixXd>(rho.data(), nrow * d_fast, d_old) * k.transpose();
  // left: apply the same trick to z^T
  MatrixXd zt = z.transpose();
  MatrixXd w(d_new * d_fast, d_new * d_fast);
  Map<MatrixXd>(w.data(), z.cols() * d_fast, d_new).noalias() =
      Map<const MatrixXd>(zt.data(), z.cols() * d_fast, d_old) * k.transpose();
  acc.noalias() += w.transpose();
}

// same for a factor on the fast index: rho -> (I_slow (x) K) rho (...)^T
void conj_fast_accumulate(const MatrixXd& rho, const MatrixXd& k, Index d_slow,
                          MatrixXd& acc) {
  const Index d_old = k.cols(), d_new = k.rows();
  const Index nrow = rho.rows();
  MatrixXd z(nrow, d_slow * d_new);
  for (Index t = 0; t < d_slow; ++t)
    z.middleCols(t * d_new, d_new).noalias() =
        rho.middleCols(t * d_old, d_old) * k.transpose();
  MatrixXd zt = z.transpose();
  MatrixXd w(d_slow * d_new, d_slow * d_new);
  for (Index t = 0; t < d_slow; ++t)
    w.middleCols(t * d_new, d_new).noalias() =
        zt.middleCols(t * d_old, d_old) * k.transpose();
  acc.noalias() += w.transpose();
}

}  // namespace

DensityOperator extract_rho_se(const SuperblockState& state) {
  const Index ds = state.dim_s, de = state.dim_e;
  if (state.psi.size() != ds * 4 * de)
    throw std::invalid_argument("superblock state dimensions are inconsistent");
  if (state.n_sites / 2 != state.bond)
    throw std::invalid_argument("state is not at the symmetric bond");

  // gather psi into rows (s*de + e), columns (s1, s2), then trace the pair
  MatrixXd b(ds * de, 4);
  for (Index s = 0; s < ds; ++s)
    for (int s1 = 0; s1 < 2; ++s1)
      for (int s2 = 0; s2 < 2; ++s2)
        b.col(2 * s1 + s2).segment(s * de, de) =
            state.psi.segment(de * (s2 + 2 * (s1 + 2 * s)), de);

  DensityOperator rho;
  rho.matrix.noalias() = b * b.transpose();
  rho.d_s = ds;
  rho.d_e = de;
  rho.block_len = state.n_sites / 2 - 1;
  rho.separation = 2;
  rho.basis = BasisTag::decimated;

  const double tr = rho.matrix.trace();
  if (std::abs(tr - 1.0) > kTraceTol)
    throw std::runtime_error("rho_SE trace deviates from 1 by " +
                             std::to_string(std::abs(tr - 1.0)));
  return rho;
}

DensityOperator unnest_step(const DensityOperator& rho,
                            const BlockBasis& left_block,
                            const BlockBasis& right_block) {
  if (left_block.dim != rho.d_s || right_block.dim != rho.d_e)
    throw std::invalid_argument("transforms do not match the operator dimensions");
  if (left_block.block_len != rho.block_len ||
      right_block.block_len != rho.block_len)
    throw std::invalid_argument("transforms belong to a different block size");
  if (rho.block_len < 2)
    throw std::invalid_argument("single-site blocks cannot be unnested");
  if (!left_block.is_isometry(kIsometryTol) ||
      !right_block.is_isometry(kIsometryTol))
    throw std::runtime_error("stored block transform is not an isometry");

  const MatrixXd& tl = left_block.transform;   // (2*dsp) x d_s, site fastest
  const MatrixXd& tr = right_block.transform;  // (2*dep) x d_e, site slowest
  const Index dsp = tl.rows() / 2;
  const Index dep = tr.rows() / 2;
  const Index de = rho.d_e;

  // unfold the system factor and trace its freed boundary site
  MatrixXd mid = MatrixXd::Zero(dsp * de, dsp * de);
  MatrixXd slice(dsp, rho.d_s);
  for (int sig = 0; sig < 2; ++sig) {
    for (Index i = 0; i < dsp; ++i) slice.row(i) = tl.row(2 * i + sig);
    conj_slow_accumulate(rho.matrix, slice, de, mid);
  }

  // same for the environment factor
  MatrixXd out = MatrixXd::Zero(dsp * dep, dsp * dep);
  MatrixXd rslice(dep, de);
  for (int sig = 0; sig < 2; ++sig) {
    rslice = tr.middleRows(sig * dep, dep);
    conj_fast_accumulate(mid, rslice, dsp, out);
  }

  DensityOperator next;
  next.matrix = std::move(out);
  next.d_s = dsp;
  next.d_e = dep;
  next.block_len = rho.block_len - 1;
  next.separation = rho.separation + 2;
  next.basis = BasisTag::decimated;

  const double tr_dev = std::abs(next.matrix.trace() - 1.0);
  if (tr_dev > kTraceTol)
    throw std::runtime_error("unnesting lost trace weight: deviation " +
                             std::to_string(tr_dev));
  return next;
}

void mu_series(const SuperblockState& state, const DmrgChains& chains,
               const std::function<bool(const MuStep&)>& sink) {
  MuStep step;
  step.rho = extract_rho_se(state);
  while (true) {
    step.block_len = step.rho.block_len;
    step.separation = step.rho.separation;
    step.mu = step.rho.mu();
    if (!sink(step) || step.block_len <= 1) return;
    step.rho = unnest_step(step.rho,
                           chains.left[static_cast<size_t>(step.block_len)],
                           chains.right[static_cast<size_t>(step.block_len)]);
  }
}

std::vector<MuStep> mu_series(const SuperblockState& state,
                              const DmrgChains& chains) {
  std::vector<MuStep> steps;
  mu_series(state, chains, [&steps](const MuStep& s) {
    steps.push_back(s);
    return true;
  });
  return steps;
}

}  // namespace xyneg

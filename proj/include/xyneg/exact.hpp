#pragma once

#include <vector>

#include <Eigen/Dense>

#include "xyneg/density_operator.hpp"
#include "xyneg/model.hpp"

namespace xyneg {

struct PureState {
  Eigen::VectorXd amplitudes;  // 2^n, unit norm
  int n_sites = 0;
};

struct ExactGroundState {
  double energy = 0.0;
  PureState state;
  double gap = 0.0;         // to the next level in the solved sector
  bool degenerate = false;  // gap below 1e-10
};

/// Brute-force ground state: dense diagonalization for n <= 12, restarted
/// Lanczos up to n = 24. For gamma = 0 and even n the solve is pinned to
/// the zero-magnetization sector, where the open XX ground state is unique.
ExactGroundState exact_ground_state(const ModelParams& p);

/// Reduced density operator over the listed sites (1-based). The first
/// listed site becomes the most significant bit of the operator index.
/// At most 12 sites.
DensityOperator reduced_density_operator(const PureState& psi,
                                         const std::vector<int>& sites);

/// rho_SE for two blocks of `block_len` sites separated by `separation`
/// sites, placed symmetrically about the chain center. System sites
/// (ascending) are the slow index, environment sites the fast index.
DensityOperator exact_rho_se(const PureState& psi, int block_len,
                             int separation);

/// Negativity of the exact rho_SE, computed without any decimation.
double oracle_negativity(const ModelParams& p, int block_len, int separation);

/// Squared Schmidt coefficients (descending) across {1..left_sites}|{rest}.
Eigen::VectorXd schmidt_weights(const PureState& psi, int left_sites);

}  // namespace xyneg

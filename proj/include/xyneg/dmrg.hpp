#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "xyneg/model.hpp"

namespace xyneg {

// One decimated DMRG block: the kept basis of at most M states, the
// isometry that built it from (smaller block (x) site), and the boundary
// operators needed to couple it onward.
//
// Left blocks grow rightward: product row index (prev, site), site fastest.
// Right blocks grow leftward: product row index (site, prev), site slowest.
struct BlockBasis {
  int block_len = 0;
  Eigen::Index dim = 0;
  Eigen::MatrixXd transform;  // (2*prev_dim) x dim isometry, columns = kept states
  Eigen::MatrixXd block_h;    // dim x dim
  Eigen::MatrixXd edge_x;     // sigma_x of the boundary site in the kept basis
  Eigen::MatrixXd edge_iy;    // i*sigma_y of the boundary site in the kept basis
  Eigen::VectorXi sz;         // total magnetization label per kept state

  bool is_isometry(double tol = 1e-12) const;
};

struct DmrgConfig {
  int max_kept_states = 32;  // M
  int n_sweeps = 4;          // full sweeps after warmup (upper bound)
  double eigensolver_tol = 1e-12;
  double target_epsilon = 1e-10;  // truncation weight beyond this raises a warning
  bool conserve_sz = false;       // sector-resolved decimation, enable for gamma = 0

  void validate() const;
};

// superblock wavefunction in the S..E configuration
struct SuperblockState {
  Eigen::VectorXd psi;  // indexed (s, s1, s2, e), environment index fastest
  Eigen::Index dim_s = 0, dim_e = 0;
  int n_sites = 0;
  int bond = 0;  // the free sites are `bond` and `bond+1`
  double energy = 0.0;
  Eigen::VectorXd schmidt_spectrum;  // center-bond weights, descending
  double truncated_weight = 0.0;     // sum of center-bond weights beyond M
};

struct DmrgChains {
  std::vector<BlockBasis> left;   // [b] = block of b sites; [0] unused
  std::vector<BlockBasis> right;
};

struct SweepStats {
  bool converged = false;
  int sweeps_done = 0;
  std::vector<double> sweep_energies;  // center energy after each full sweep
  double max_truncated_weight = 0.0;   // over all sweep decimations
  std::vector<double> bond_truncated_weights;  // [l] = last decimation at bond l
  bool epsilon_exceeded = false;       // some truncation was above target_epsilon
  bool monotonicity_violated = false;  // sweep energy rose beyond tolerance
};

/// Infinite-system style growth out to n_sites. Both chains are built
/// independently; every transform is stored so the nesting can be undone
/// later. Blocks of 1 site keep the physical basis.
DmrgChains warmup(const ModelParams& p, const DmrgConfig& c,
                  double* max_truncated_weight = nullptr);

/// Finite-system sweeps until the center-bond energy settles (or the sweep
/// budget runs out; then `stats->converged` stays false). Returns the
/// state at the symmetric configuration, blocks of N/2 - 1 sites each.
SuperblockState sweep_to_convergence(DmrgChains& chains, const ModelParams& p,
                                     const DmrgConfig& c,
                                     SweepStats* stats = nullptr);

/// -sum w log2 w over the center-bond Schmidt spectrum, in bits.
double schmidt_entropy(const SuperblockState& s);

struct DmrgRun {
  ModelParams params;
  DmrgConfig config;
  DmrgChains chains;
  SuperblockState state;
  SweepStats stats;
  double warmup_truncated_weight = 0.0;
};

/// warmup + sweeps in one call; conserve_sz is switched on for gamma = 0.
DmrgRun run_dmrg(const ModelParams& p, const DmrgConfig& c);

// versioned little-endian binary container (see README for the layout)
void save_checkpoint(const DmrgRun& run, const std::string& path);
DmrgRun load_checkpoint(const std::string& path);

}  // namespace xyneg

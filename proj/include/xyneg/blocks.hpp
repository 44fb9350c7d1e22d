#pragma once

#include <functional>
#include <vector>

#include "xyneg/density_operator.hpp"
#include "xyneg/dmrg.hpp"

namespace xyneg {

/// rho_SE of the two decimated blocks, obtained from the centered
/// superblock state by tracing out the two free sites. The result has
/// block_len = N/2 - 1 and separation 2.
DensityOperator extract_rho_se(const SuperblockState& state);

/// One unnesting step: re-expresses each block as (smaller block (x)
/// boundary site) through the stored growth transforms and traces out the
/// two freed inner sites. block_len drops by 1, separation grows by 2.
DensityOperator unnest_step(const DensityOperator& rho,
                            const BlockBasis& left_block,
                            const BlockBasis& right_block);

struct MuStep {
  int block_len = 0;
  int separation = 0;
  double mu = 0.0;
  DensityOperator rho;
};

/// The full sequence (N/2-1, 2), (N/2-2, 4), ..., (1, N-2). The sink is
/// called once per step and may return false to stop early; operators are
/// streamed, never all held at once.
void mu_series(const SuperblockState& state, const DmrgChains& chains,
               const std::function<bool(const MuStep&)>& sink);

/// Convenience form that collects every step (small systems only).
std::vector<MuStep> mu_series(const SuperblockState& state,
                              const DmrgChains& chains);

}  // namespace xyneg

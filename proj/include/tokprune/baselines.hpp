#pragma once

#include <cstdint>

#include "tokprune/core.hpp"

namespace tokprune {

/// How maxmin_diversity_select picks its first token.
enum class MaxMinSeedRule {
  LowestIndex,  ///< deterministic default: token 0
  MaxNorm,      ///< largest embedding norm, ties by lowest index
};

/// The `budget` highest-weight tokens (ties by ascending index), in rank
/// order.  budget > n returns all tokens.
Selection topk_select(const SaliencyVector& weights, TokenIndex budget);

/// Weight-blind farthest-point selection under cosine distance (1 - cos):
/// starts from the seed, then repeatedly adds the candidate whose minimum
/// distance to the selected set is largest (ties by lowest index), until
/// min(budget, n) tokens are picked.  Indices appear in pick order.
/// Throws zero_norm_vector for degenerate rows.
Selection maxmin_diversity_select(
    const TokenMatrix& tokens, TokenIndex budget,
    MaxMinSeedRule seed_rule = MaxMinSeedRule::LowestIndex);

/// Uniform sample of `budget` distinct indices from [0, n) via a partial
/// Fisher-Yates shuffle driven by std::mt19937_64(seed); the k-th pick swaps
/// position k with k + gen() % (n - k).  Fully reproducible across
/// platforms from the seed (the slight modulo bias is accepted for that).
/// Throws budget_exceeds_n when budget > n.
Selection random_select(TokenIndex n, TokenIndex budget, std::uint64_t seed);

/// Evenly strided sample over a w x h grid flattened row-major:
/// index_k = (k * n) / budget for k in [0, budget), evaluated in integer
/// arithmetic.  budget >= n returns all indices.  Throws grid_mismatch when
/// grid_w * grid_h != n and invalid_argument for non-positive dims.
Selection uniform_grid_select(TokenIndex n, TokenIndex grid_w,
                              TokenIndex grid_h, TokenIndex budget);

}  // namespace tokprune

#pragma once

#include "tokprune/core.hpp"

namespace tokprune {

/// Token indices in descending-weight order plus the weights themselves.
/// Ties are broken by ascending index, so the order is total and stable.
struct RankedTokens {
  std::vector<TokenIndex> order;
  SaliencyVector weights;
};

/// Query-conditioned saliency: cosine of every token row against the query.
/// Throws dimension_mismatch if the query length differs from the embedding
/// dim and zero_norm_vector (naming the row) on degenerate inputs.
SaliencyVector compute_saliency(const TokenMatrix& tokens,
                                std::span<const double> query);

/// Sorts tokens by descending weight, ties by ascending index.
/// Weights must be finite.
RankedTokens rank_tokens(const SaliencyVector& weights);

/// The top floor(fraction * n) tokens by weight as a Selection (a small
/// epsilon absorbs float error in the product so e.g. 0.3 of 10 keeps 3).
/// fraction must lie in [0, 1].
Selection ablate_top_fraction(const SaliencyVector& weights, double fraction);

}  // namespace tokprune

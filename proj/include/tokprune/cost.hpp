#pragma once

#include <cstdint>

#include "tokprune/core.hpp"

namespace tokprune {

/// Shape of a decoder-style transformer forward pass with a visual-token
/// prefix.  The first `prune_layer` layers see the full sequence; the rest
/// see the reduced one.
struct CostParams {
  std::int32_t total_layers = 1;   ///< T >= 1
  std::int32_t prune_layer = 0;    ///< K in [0, T]: layers before the cut
  std::int64_t text_len = 0;       ///< N >= 0 text tokens
  std::int64_t orig_visual = 0;    ///< M >= 0 visual tokens before pruning
  std::int64_t pruned_visual = 0;  ///< retained visual tokens, in [0, M]
  std::int64_t hidden_dim = 1;     ///< d >= 1
  std::int64_t ffn_dim = 1;        ///< m >= 1

  std::int64_t full_seq_len() const { return text_len + orig_visual; }
  std::int64_t pruned_seq_len() const { return text_len + pruned_visual; }

  /// Throws invalid_argument on any bound violation, including sequence
  /// lengths at or beyond hidden_dim + ffn_dim / 2 where per-layer cost
  /// stops growing with length and the ratio loses its meaning.
  void validate() const;
};

/// Per-layer forward FLOPs for sequence length mu:
///   4*mu*d^2 - 2*mu^2*d + 2*mu*d*m
/// (attention projections + scores + FFN), evaluated in double precision in
/// exactly that term order.
double layer_flops(std::int64_t seq_len, std::int64_t hidden_dim,
                   std::int64_t ffn_dim);

/// Compute kept after pruning, as a fraction of the unpruned forward pass:
///   [K * f(mu) + (T - K) * f(mu~)] / [T * f(mu)].
/// Exactly 1.0 when nothing is pruned (pruned_visual == orig_visual) or the
/// cut sits after the last layer (prune_layer == total_layers); those cases
/// return before any arithmetic since the float expression need not cancel.
/// Throws degenerate_model when the unpruned layer cost is not positive
/// (empty sequence).
double tflops_ratio(const CostParams& params);

/// Largest retained-token count whose ratio is <= target (params.pruned_visual
/// is ignored).  target must lie in (0, 1].  Throws target_unachievable —
/// reporting the floor ratio at zero retained tokens — when even that
/// exceeds the target.
std::int64_t tokens_for_ratio(double target, const CostParams& params);

}  // namespace tokprune

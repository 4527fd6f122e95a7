#pragma once

#include "tokprune/core.hpp"

namespace tokprune {

/// Knobs for greedy_prune.
struct PruneConfig {
  TokenIndex budget = 1;   ///< target selection size M, >= 1
  double tau = 0.9;        ///< pairwise cosine ceiling
  bool backfill = true;    ///< refill from eliminated tokens when short of M
  /// Penalty multiplier handed to marginal_score when callers report
  /// per-step scores; the hard cosine cut itself never uses it.  >= 0.
  double lambda_uniform = 1.0;
};

/// Replayable log of one greedy run: for every accepted pivot, which
/// still-pending candidates it eliminated (cosine strictly above tau).
/// Pivots, eliminated tokens and untouched leftovers partition [0, n).
struct GreedyTrace {
  enum class Termination { BudgetReached, CandidatesExhausted };

  struct Step {
    TokenIndex pivot = 0;
    std::vector<TokenIndex> eliminated;  // in candidate-queue order
  };

  std::vector<Step> steps;
  Termination terminated_by = Termination::CandidatesExhausted;
};

struct GreedyResult {
  Selection selection;
  GreedyTrace trace;
};

/// Diversity-constrained greedy selection.
///
/// Candidates are ordered by descending weight (ties by ascending index).
/// Each round pops the best remaining candidate as a pivot, then drops every
/// pending candidate whose cosine to the pivot is strictly above tau
/// (equality survives).  Stops when `budget` pivots are accepted or the
/// queue empties.  If backfill is on and fewer than `budget` pivots were
/// accepted, eliminated tokens are re-admitted in descending-weight order
/// (ties ascending index); those trail the selection and are counted in
/// Selection::backfilled — the pairwise guarantee does not cover them.
///
/// Similarities are evaluated lazily (pivot row vs. candidate rows) with the
/// same kernel as pairwise_similarities, so results match the dense path
/// bit for bit.  Runs in O(rounds * candidates * d); the full n x n matrix
/// is never formed.
GreedyResult greedy_prune(const TokenMatrix& tokens,
                          const SaliencyVector& weights,
                          const PruneConfig& config);

/// Penalty-adjusted score of adding one candidate given its similarity to
/// the current selection: weight - lambda * (cos - tau).  Positive lambda
/// discounts redundant tokens; at cos == tau the score equals the weight.
double marginal_score(double weight, double cos_to_selected, double tau,
                      double lambda);

}  // namespace tokprune

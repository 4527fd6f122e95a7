#include "tokprune/greedy.hpp"

#include <algorithm>
#include <cmath>

#include "tokprune/saliency.hpp"

namespace tokprune {

GreedyResult greedy_prune(const TokenMatrix& tokens,
                          const SaliencyVector& weights,
                          const PruneConfig& config) {
  const TokenIndex n = tokens.count();
  if (n < 1) {
    throw Error(Errc::empty_input, "greedy_prune requires at least one token");
  }
  if (static_cast<TokenIndex>(weights.size()) != n) {
    throw Error(Errc::dimension_mismatch,
                "got " + std::to_string(weights.size()) + " weights for " +
                    std::to_string(n) + " tokens");
  }
  if (config.budget < 1) {
    throw Error(Errc::invalid_argument,
                "budget must be >= 1, got " + std::to_string(config.budget));
  }
  if (!std::isfinite(config.tau)) {
    throw Error(Errc::invalid_argument, "tau must be finite");
  }
  if (!(config.lambda_uniform >= 0.0)) {
    throw Error(Errc::invalid_argument, "lambda_uniform must be >= 0");
  }

  std::vector<double> norms(static_cast<std::size_t>(n));
  for (TokenIndex i = 0; i < n; ++i) {
    norms[i] = detail::norm(tokens.row(i));
    if (norms[i] == 0.0) {
      throw Error(Errc::zero_norm_vector,
                  "row " + std::to_string(i) + " has zero norm");
    }
  }

  GreedyResult result;
  Selection& sel = result.selection;
  sel.budget = config.budget;

  std::vector<TokenIndex> queue = rank_tokens(weights).order;
  std::vector<TokenIndex> eliminated;
  std::size_t head = 0;

  const auto cosine_at = [&](TokenIndex pivot, std::span<const double> prow,
                             TokenIndex cand) {
    return std::clamp(detail::dot(prow, tokens.row(cand)) /
                          (norms[pivot] * norms[cand]),
                      -1.0, 1.0);
  };

  // For wide rows the elimination scan is memory-bound, so cosines for the
  // next few pivots are precomputed in one streaming pass: each candidate row
  // is then read once per kPivotBatch pivots instead of once per pivot.  A
  // cache slot holds exactly the value cosine_at would return, so decisions,
  // ordering and traces are identical to the direct path; a slot is merely
  // wasted when its token is eliminated by an earlier pivot of its own batch.
  // Narrow rows skip the cache: the pass saves nothing there and the cache
  // would dwarf the matrix itself for very small dimensions.
  constexpr std::size_t kPivotBatch = 8;
  const std::size_t un = static_cast<std::size_t>(n);
  const bool batch_scan = tokens.dim() >= 32;
  std::vector<double> cos_cache;
  std::vector<std::int8_t> cache_slot;
  if (batch_scan) {
    cos_cache.resize(kPivotBatch * un);
    cache_slot.assign(un, -1);
  }
  const auto fill_cache = [&](std::size_t from) {
    const std::size_t batch = std::min(kPivotBatch, queue.size() - from);
    for (std::size_t b = 0; b < batch; ++b) {
      cache_slot[static_cast<std::size_t>(queue[from + b])] =
          static_cast<std::int8_t>(b);
    }
    for (std::size_t k = from + 1; k < queue.size(); ++k) {
      const TokenIndex cand = queue[k];
      // Batch members ahead of position k are candidates of everything that
      // precedes them, so the pair count ramps up over the first few rows.
      const std::size_t upto = std::min(batch, k - from);
      for (std::size_t b = 0; b < upto; ++b) {
        const TokenIndex piv = queue[from + b];
        cos_cache[b * un + static_cast<std::size_t>(cand)] =
            cosine_at(piv, tokens.row(piv), cand);
      }
    }
  };

  while (head < queue.size() && sel.size() < config.budget) {
    const TokenIndex pivot = queue[head++];
    sel.indices.push_back(pivot);
    GreedyTrace::Step step;
    step.pivot = pivot;
    if (sel.size() < config.budget) {
      const double* cached = nullptr;
      if (batch_scan) {
        if (cache_slot[static_cast<std::size_t>(pivot)] < 0) {
          fill_cache(head - 1);
        }
        cached = cos_cache.data() +
                 static_cast<std::size_t>(
                     cache_slot[static_cast<std::size_t>(pivot)]) *
                     un;
      }
      // Drop pending candidates too close to the pivot, compacting in place
      // so surviving order (and thus every later tie-break) is preserved.
      const auto prow = tokens.row(pivot);
      std::size_t keep = head;
      for (std::size_t k = head; k < queue.size(); ++k) {
        const TokenIndex cand = queue[k];
        const double c = cached != nullptr
                             ? cached[static_cast<std::size_t>(cand)]
                             : cosine_at(pivot, prow, cand);
        if (c > config.tau) {
          step.eliminated.push_back(cand);
          eliminated.push_back(cand);
        } else {
          queue[keep++] = cand;
        }
      }
      queue.resize(keep);
    }
    result.trace.steps.push_back(std::move(step));
  }

  result.trace.terminated_by = sel.size() == config.budget
                                   ? GreedyTrace::Termination::BudgetReached
                                   : GreedyTrace::Termination::CandidatesExhausted;

  if (config.backfill && sel.size() < config.budget) {
    std::sort(eliminated.begin(), eliminated.end(),
              [&](TokenIndex a, TokenIndex b) {
                if (weights[a] != weights[b]) return weights[a] > weights[b];
                return a < b;
              });
    for (TokenIndex idx : eliminated) {
      if (sel.size() == config.budget) break;
      sel.indices.push_back(idx);
      ++sel.backfilled;
    }
  }
  return result;
}

double marginal_score(double weight, double cos_to_selected, double tau,
                      double lambda) {
  return weight - lambda * (cos_to_selected - tau);
}

}  // namespace tokprune

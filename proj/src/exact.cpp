#include "tokprune/exact.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace tokprune {
namespace {

/// Sum `weights` over ascending `indices`.  Every candidate (and the final
/// reported objective) goes through this one accumulation order so that
/// equal subsets always produce the identical double.
double canonical_objective(const SaliencyVector& weights,
                           const std::vector<TokenIndex>& ascending) {
  double total = 0.0;
  for (TokenIndex idx : ascending) total += weights[idx];
  return total;
}

struct BnbState {
  const SaliencyVector* weights = nullptr;
  std::vector<TokenIndex> order;        // positions -> original index
  std::vector<double> ordered_weight;   // descending
  std::vector<std::uint64_t> conflict;  // per position, mask of conflicting positions
  TokenIndex n = 0;
  TokenIndex budget = 0;

  std::vector<TokenIndex> best_set;  // ascending original indices
  double best_objective = 0.0;
  std::uint64_t nodes = 0;

  void consider(std::uint64_t mask) {
    std::vector<TokenIndex> chosen;
    for (TokenIndex p = 0; p < n; ++p) {
      if (mask >> p & 1u) chosen.push_back(order[p]);
    }
    std::sort(chosen.begin(), chosen.end());
    const double obj = canonical_objective(*weights, chosen);
    if (obj > best_objective ||
        (obj == best_objective && chosen < best_set)) {
      best_objective = obj;
      best_set = std::move(chosen);
    }
  }

  void dfs(TokenIndex pos, std::uint64_t mask, TokenIndex count, double acc) {
    ++nodes;
    if (count == budget || pos == n) {
      consider(mask);
      return;
    }
    // Optimistic completion: the largest still-compatible positive weights,
    // ignoring conflicts among themselves — a valid upper bound.
    double bound = acc;
    TokenIndex room = budget - count;
    for (TokenIndex q = pos; q < n && room > 0; ++q) {
      if ((conflict[q] & mask) != 0) continue;
      if (ordered_weight[q] <= 0.0) break;  // descending: rest can't help
      bound += ordered_weight[q];
      --room;
    }
    // Strictly-below-incumbent pruning with slack keeps float ties alive so
    // the lexicographic rule, not visit order, decides between them.
    if (bound < best_objective - 1e-9) return;

    if ((conflict[pos] & mask) == 0) {
      dfs(pos + 1, mask | (std::uint64_t{1} << pos), count + 1,
          acc + ordered_weight[pos]);
    }
    dfs(pos + 1, mask, count, acc);
  }
};

}  // namespace

ExactSolution exact_solve(const SaliencyVector& weights,
                          const SimilarityMatrix& sim, double tau,
                          TokenIndex budget, TokenIndex cap) {
  const auto n = static_cast<TokenIndex>(weights.size());
  if (sim.size() != n) {
    throw Error(Errc::dimension_mismatch,
                "similarity matrix size " + std::to_string(sim.size()) +
                    " does not match " + std::to_string(n) + " weights");
  }
  const TokenIndex effective_cap = std::min(cap, kMaskCap);
  if (n > effective_cap) {
    throw Error(Errc::instance_too_large,
                "exact solve limited to " + std::to_string(effective_cap) +
                    " tokens, got " + std::to_string(n));
  }
  if (budget < 0) {
    throw Error(Errc::invalid_argument,
                "budget must be >= 0, got " + std::to_string(budget));
  }

  BnbState state;
  state.weights = &weights;
  state.n = n;
  state.budget = std::min(budget, n);
  state.order.resize(n);
  std::iota(state.order.begin(), state.order.end(), 0);
  std::sort(state.order.begin(), state.order.end(),
            [&](TokenIndex a, TokenIndex b) {
              if (weights[a] != weights[b]) return weights[a] > weights[b];
              return a < b;
            });
  state.ordered_weight.resize(n);
  state.conflict.assign(n, 0);
  for (TokenIndex p = 0; p < n; ++p) {
    state.ordered_weight[p] = weights[state.order[p]];
    for (TokenIndex q = 0; q < n; ++q) {
      if (q != p && sim.at(state.order[p], state.order[q]) > tau) {
        state.conflict[p] |= std::uint64_t{1} << q;
      }
    }
  }

  if (state.budget == 0 || n == 0) {
    ExactSolution out;
    out.selection.budget = budget;
    out.proven_optimal = true;
    out.nodes_explored = 1;
    return out;
  }

  state.dfs(0, 0, 0, 0.0);

  ExactSolution out;
  out.selection.indices = state.best_set;
  out.selection.budget = budget;
  out.objective = state.best_objective;
  out.nodes_explored = state.nodes;
  out.proven_optimal = true;
  return out;
}

LagrangeMultipliers LagrangeMultipliers::uniform(double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw Error(Errc::invalid_argument, "multiplier must be finite and >= 0");
  }
  LagrangeMultipliers out;
  out.n_ = -1;
  out.uniform_value_ = lambda;
  return out;
}

LagrangeMultipliers LagrangeMultipliers::matrix(TokenIndex n,
                                                std::vector<double> values) {
  if (n < 0 ||
      values.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(n)) {
    throw Error(Errc::dimension_mismatch,
                "multiplier matrix needs n*n values, got " +
                    std::to_string(values.size()) + " for n=" + std::to_string(n));
  }
  for (TokenIndex i = 0; i < n; ++i) {
    for (TokenIndex j = 0; j < n; ++j) {
      const double v = values[static_cast<std::size_t>(i) * n + j];
      if (!(v >= 0.0) || !std::isfinite(v)) {
        throw Error(Errc::invalid_argument,
                    "multiplier (" + std::to_string(i) + ", " +
                        std::to_string(j) + ") must be finite and >= 0");
      }
      if (v != values[static_cast<std::size_t>(j) * n + i]) {
        throw Error(Errc::invalid_argument, "multiplier matrix must be symmetric");
      }
    }
  }
  LagrangeMultipliers out;
  out.n_ = n;
  out.values_ = std::move(values);
  return out;
}

double LagrangeMultipliers::at(TokenIndex i, TokenIndex j) const {
  if (is_uniform()) return uniform_value_;
  if (i < 0 || i >= n_ || j < 0 || j >= n_) {
    throw Error(Errc::index_out_of_range,
                "multiplier index (" + std::to_string(i) + ", " +
                    std::to_string(j) + ") outside n=" + std::to_string(n_));
  }
  return values_[static_cast<std::size_t>(i) * n_ + j];
}

double lagrangian_value(const std::vector<std::uint8_t>& z,
                        const SaliencyVector& weights,
                        const SimilarityMatrix& sim, double tau,
                        const LagrangeMultipliers& lambda) {
  const auto n = static_cast<TokenIndex>(weights.size());
  if (static_cast<TokenIndex>(z.size()) != n || sim.size() != n) {
    throw Error(Errc::dimension_mismatch,
                "assignment, weights and similarity sizes disagree");
  }
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (z[i] > 1) {
      throw Error(Errc::invalid_argument,
                  "assignment entries must be 0 or 1, z[" + std::to_string(i) +
                      "]=" + std::to_string(int(z[i])));
    }
  }
  double value = 0.0;
  for (TokenIndex i = 0; i < n; ++i) {
    if (z[i]) value += weights[i];
  }
  for (TokenIndex i = 0; i < n; ++i) {
    if (!z[i]) continue;
    for (TokenIndex j = i + 1; j < n; ++j) {
      if (!z[j]) continue;
      value -= lambda.at(i, j) * (sim.at(i, j) - tau);
    }
  }
  return value;
}

LagrangianMax lagrangian_brute_max(const SaliencyVector& weights,
                                   const SimilarityMatrix& sim, double tau,
                                   const LagrangeMultipliers& lambda,
                                   TokenIndex cap) {
  const auto n = static_cast<TokenIndex>(weights.size());
  if (sim.size() != n) {
    throw Error(Errc::dimension_mismatch,
                "similarity matrix size " + std::to_string(sim.size()) +
                    " does not match " + std::to_string(n) + " weights");
  }
  const TokenIndex effective_cap = std::min(cap, kMaskCap);
  if (n > effective_cap || n >= 63) {
    throw Error(Errc::instance_too_large,
                "enumeration limited to " + std::to_string(effective_cap) +
                    " tokens, got " + std::to_string(n));
  }

  LagrangianMax best;
  best.z.assign(static_cast<std::size_t>(n), 0);
  best.value = lagrangian_value(best.z, weights, sim, tau, lambda);

  std::vector<std::uint8_t> z(static_cast<std::size_t>(n), 0);
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
    for (TokenIndex i = 0; i < n; ++i) z[i] = (mask >> i) & 1u;
    const double value = lagrangian_value(z, weights, sim, tau, lambda);
    if (value > best.value || (value == best.value && z < best.z)) {
      best.value = value;
      best.z = z;
    }
  }
  return best;
}

}  // namespace tokprune

#include "tokprune/baselines.hpp"

#include <algorithm>
#include <random>

#include "tokprune/saliency.hpp"

namespace tokprune {

Selection topk_select(const SaliencyVector& weights, TokenIndex budget) {
  if (budget < 0) {
    throw Error(Errc::invalid_argument,
                "budget must be >= 0, got " + std::to_string(budget));
  }
  const RankedTokens ranked = rank_tokens(weights);
  const auto take =
      std::min<std::size_t>(ranked.order.size(), static_cast<std::size_t>(budget));
  Selection sel;
  sel.budget = budget;
  sel.indices.assign(ranked.order.begin(), ranked.order.begin() + take);
  return sel;
}

Selection maxmin_diversity_select(const TokenMatrix& tokens, TokenIndex budget,
                                  MaxMinSeedRule seed_rule) {
  const TokenIndex n = tokens.count();
  if (n < 1) {
    throw Error(Errc::empty_input, "maxmin selection requires at least one token");
  }
  if (budget < 1) {
    throw Error(Errc::invalid_argument,
                "budget must be >= 1, got " + std::to_string(budget));
  }
  std::vector<double> norms(static_cast<std::size_t>(n));
  for (TokenIndex i = 0; i < n; ++i) {
    norms[i] = detail::norm(tokens.row(i));
    if (norms[i] == 0.0) {
      throw Error(Errc::zero_norm_vector,
                  "row " + std::to_string(i) + " has zero norm");
    }
  }

  TokenIndex seed = 0;
  if (seed_rule == MaxMinSeedRule::MaxNorm) {
    for (TokenIndex i = 1; i < n; ++i) {
      if (norms[i] > norms[seed]) seed = i;  // strict: ties keep lowest index
    }
  }

  Selection sel;
  sel.budget = budget;
  sel.indices.push_back(seed);

  // min_dist[c] = distance from c to the selected set so far; adding one
  // token per round keeps the whole run at O(budget * n * d).
  std::vector<double> min_dist(static_cast<std::size_t>(n));
  std::vector<char> picked(static_cast<std::size_t>(n), 0);
  picked[seed] = 1;
  auto update_from = [&](TokenIndex s) {
    const auto srow = tokens.row(s);
    for (TokenIndex c = 0; c < n; ++c) {
      if (picked[c]) continue;
      const double cos = std::clamp(
          detail::dot(srow, tokens.row(c)) / (norms[s] * norms[c]), -1.0, 1.0);
      min_dist[c] = std::min(min_dist[c], 1.0 - cos);
    }
  };
  min_dist.assign(min_dist.size(), 2.0);  // cosine distance never exceeds 2
  update_from(seed);

  const TokenIndex target = std::min(budget, n);
  while (sel.size() < target) {
    TokenIndex pick = -1;
    for (TokenIndex c = 0; c < n; ++c) {
      if (picked[c]) continue;
      if (pick == -1 || min_dist[c] > min_dist[pick]) pick = c;
    }
    picked[pick] = 1;
    sel.indices.push_back(pick);
    if (sel.size() < target) update_from(pick);
  }
  return sel;
}

Selection random_select(TokenIndex n, TokenIndex budget, std::uint64_t seed) {
  if (n < 0 || budget < 0) {
    throw Error(Errc::invalid_argument, "n and budget must be >= 0");
  }
  if (budget > n) {
    throw Error(Errc::budget_exceeds_n,
                "budget " + std::to_string(budget) + " exceeds population " +
                    std::to_string(n));
  }
  std::mt19937_64 gen(seed);
  std::vector<TokenIndex> pool(static_cast<std::size_t>(n));
  for (TokenIndex i = 0; i < n; ++i) pool[i] = i;
  Selection sel;
  sel.budget = budget;
  for (TokenIndex k = 0; k < budget; ++k) {
    const auto j = static_cast<TokenIndex>(
        k + static_cast<TokenIndex>(gen() % static_cast<std::uint64_t>(n - k)));
    std::swap(pool[k], pool[j]);
    sel.indices.push_back(pool[k]);
  }
  return sel;
}

Selection uniform_grid_select(TokenIndex n, TokenIndex grid_w,
                              TokenIndex grid_h, TokenIndex budget) {
  if (grid_w < 1 || grid_h < 1 || budget < 1 || n < 1) {
    throw Error(Errc::invalid_argument,
                "grid dims, n and budget must all be >= 1");
  }
  if (static_cast<std::int64_t>(grid_w) * grid_h != n) {
    throw Error(Errc::grid_mismatch,
                std::to_string(grid_w) + "x" + std::to_string(grid_h) +
                    " grid does not hold " + std::to_string(n) + " tokens");
  }
  Selection sel;
  sel.budget = budget;
  if (budget >= n) {
    for (TokenIndex i = 0; i < n; ++i) sel.indices.push_back(i);
    return sel;
  }
  for (TokenIndex k = 0; k < budget; ++k) {
    sel.indices.push_back(static_cast<TokenIndex>(
        static_cast<std::int64_t>(k) * n / budget));
  }
  return sel;
}

}  // namespace tokprune

#include "tokprune/saliency.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace tokprune {

SaliencyVector compute_saliency(const TokenMatrix& tokens,
                                std::span<const double> query) {
  if (static_cast<TokenIndex>(query.size()) != tokens.dim()) {
    throw Error(Errc::dimension_mismatch,
                "query has " + std::to_string(query.size()) +
                    " dims, embeddings have " + std::to_string(tokens.dim()));
  }
  const double qnorm = detail::norm(query);
  if (qnorm == 0.0) {
    throw Error(Errc::zero_norm_vector, "query vector has zero norm");
  }
  SaliencyVector weights(static_cast<std::size_t>(tokens.count()));
  for (TokenIndex i = 0; i < tokens.count(); ++i) {
    const auto r = tokens.row(i);
    const double rnorm = detail::norm(r);
    if (rnorm == 0.0) {
      throw Error(Errc::zero_norm_vector,
                  "row " + std::to_string(i) + " has zero norm");
    }
    weights[i] = std::clamp(detail::dot(r, query) / (rnorm * qnorm), -1.0, 1.0);
  }
  return weights;
}

RankedTokens rank_tokens(const SaliencyVector& weights) {
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (!std::isfinite(weights[i])) {
      throw Error(Errc::invalid_argument,
                  "weight " + std::to_string(i) + " is not finite");
    }
  }
  RankedTokens out;
  out.weights = weights;
  out.order.resize(weights.size());
  std::iota(out.order.begin(), out.order.end(), 0);
  std::sort(out.order.begin(), out.order.end(),
            [&](TokenIndex a, TokenIndex b) {
              if (weights[a] != weights[b]) return weights[a] > weights[b];
              return a < b;
            });
  return out;
}

Selection ablate_top_fraction(const SaliencyVector& weights, double fraction) {
  if (!(fraction >= 0.0 && fraction <= 1.0)) {
    throw Error(Errc::invalid_argument,
                "fraction must lie in [0, 1], got " + std::to_string(fraction));
  }
  const RankedTokens ranked = rank_tokens(weights);
  // 1e-9 absorbs representation error in fraction * n (e.g. 0.3 * 10) so the
  // count matches the exact rational value whenever one exists.
  const auto count = static_cast<TokenIndex>(
      std::floor(fraction * static_cast<double>(weights.size()) + 1e-9));
  Selection sel;
  sel.budget = count;
  sel.indices.assign(ranked.order.begin(), ranked.order.begin() + count);
  return sel;
}

}  // namespace tokprune

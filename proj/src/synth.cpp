#include "tokprune/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "tokprune/saliency.hpp"

namespace tokprune {

PlantedInstance generate_clustered(const SynthParams& params) {
  const TokenIndex clusters = params.n_clusters;
  const TokenIndex per = params.per_cluster;
  const TokenIndex dim = params.dim;
  if (clusters < 1 || per < 1) {
    throw Error(Errc::invalid_argument,
                "need n_clusters >= 1 and per_cluster >= 1");
  }
  if (!(params.inter_sim_max >= 0.0 && params.inter_sim_max < params.intra_sim_min &&
        params.intra_sim_min <= 1.0)) {
    throw Error(Errc::invalid_argument,
                "similarity bands must satisfy 0 <= inter < intra <= 1");
  }
  if (dim < 2 * clusters) {
    throw Error(Errc::infeasible_geometry,
                "dim " + std::to_string(dim) + " cannot host " +
                    std::to_string(clusters) +
                    " orthogonal cluster planes (needs dim >= 2*n_clusters)");
  }
  if (per > 1 && params.intra_sim_min >= 1.0) {
    throw Error(Errc::infeasible_geometry,
                "intra_sim_min = 1 leaves no room for distinct cluster members");
  }

  // The post-construction self-check is O(n^2 * dim); keep instances small
  // enough that it stays instant.
  const std::int64_t n_wide = static_cast<std::int64_t>(clusters) * per;
  if (n_wide > 4096) {
    throw Error(Errc::instance_too_large,
                "refusing to generate " + std::to_string(n_wide) +
                    " tokens (limit 4096)");
  }
  const auto n = static_cast<TokenIndex>(n_wide);
  const double theta_max = std::acos(params.intra_sim_min);
  std::mt19937_64 gen(params.seed);

  // Strictly decreasing anchor coefficients; jitter stays below half the
  // spacing so the order (and hence each planted critical) is preserved.
  std::vector<double> alpha(static_cast<std::size_t>(clusters));
  const double spacing = 0.5 / static_cast<double>(clusters);
  for (TokenIndex c = 0; c < clusters; ++c) {
    const double jitter =
        (static_cast<double>(gen() >> 11) * 0x1.0p-53 - 0.5) * 0.4 * spacing;
    alpha[c] = 1.0 - spacing * static_cast<double>(c) + jitter;
  }

  // Assign (cluster, angle-step) members to token slots by a full shuffle.
  std::vector<std::pair<TokenIndex, TokenIndex>> members;
  members.reserve(static_cast<std::size_t>(n));
  for (TokenIndex c = 0; c < clusters; ++c) {
    for (TokenIndex j = 0; j < per; ++j) members.emplace_back(c, j);
  }
  for (TokenIndex k = 0; k + 1 < n; ++k) {
    const auto j = static_cast<TokenIndex>(
        k + static_cast<TokenIndex>(gen() % static_cast<std::uint64_t>(n - k)));
    std::swap(members[k], members[j]);
  }

  PlantedInstance inst;
  inst.intra_sim_min = params.intra_sim_min;
  inst.inter_sim_max = params.inter_sim_max;
  inst.cluster_of.resize(static_cast<std::size_t>(n));
  inst.planted_critical.assign(static_cast<std::size_t>(clusters), -1);

  std::vector<double> data(static_cast<std::size_t>(n) * dim, 0.0);
  for (TokenIndex t = 0; t < n; ++t) {
    const auto [c, j] = members[t];
    const double theta =
        per == 1 ? 0.0
                 : theta_max * static_cast<double>(j) / static_cast<double>(per);
    data[static_cast<std::size_t>(t) * dim + 2 * c] = std::cos(theta);
    data[static_cast<std::size_t>(t) * dim + 2 * c + 1] = std::sin(theta);
    inst.cluster_of[t] = c;
    if (j == 0) inst.planted_critical[c] = t;
  }
  inst.tokens = TokenMatrix(std::move(data), n, dim);

  inst.query.assign(static_cast<std::size_t>(dim), 0.0);
  for (TokenIndex c = 0; c < clusters; ++c) inst.query[2 * c] = alpha[c];

  // Re-verify every promised property on the finished instance; any failure
  // here is a construction bug, not a caller error.
  const SaliencyVector weights = compute_saliency(inst.tokens, inst.query);
  for (TokenIndex a = 0; a < n; ++a) {
    for (TokenIndex b = a + 1; b < n; ++b) {
      const double cos = cosine(inst.tokens.row(a), inst.tokens.row(b));
      const bool same = inst.cluster_of[a] == inst.cluster_of[b];
      if (same && cos < params.intra_sim_min) {
        throw std::logic_error("planted instance violates intra-cluster floor");
      }
      if (!same && cos > params.inter_sim_max) {
        throw std::logic_error("planted instance violates inter-cluster ceiling");
      }
    }
  }
  for (TokenIndex c = 0; c < clusters; ++c) {
    const TokenIndex crit = inst.planted_critical[c];
    for (TokenIndex t = 0; t < n; ++t) {
      if (t != crit && inst.cluster_of[t] == c && weights[t] >= weights[crit]) {
        throw std::logic_error("planted critical is not its cluster's strict max");
      }
    }
  }
  return inst;
}

double recall_of_planted(const Selection& sel, const PlantedInstance& inst) {
  const TokenIndex n = inst.tokens.count();
  std::vector<char> in_sel(static_cast<std::size_t>(n), 0);
  for (TokenIndex idx : sel.indices) {
    if (idx < 0 || idx >= n) {
      throw Error(Errc::index_out_of_range,
                  "selection index " + std::to_string(idx) +
                      " outside instance with " + std::to_string(n) + " tokens");
    }
    in_sel[idx] = 1;
  }
  std::size_t hit = 0;
  for (TokenIndex crit : inst.planted_critical) {
    if (in_sel[crit]) ++hit;
  }
  return static_cast<double>(hit) /
         static_cast<double>(inst.planted_critical.size());
}

}  // namespace tokprune

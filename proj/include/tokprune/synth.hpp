#pragma once

#include <cstdint>

#include "tokprune/core.hpp"

namespace tokprune {

/// Parameters for generate_clustered.
struct SynthParams {
  std::uint64_t seed = 0;
  TokenIndex n_clusters = 1;
  TokenIndex per_cluster = 1;
  TokenIndex dim = 2;             ///< needs dim >= 2 * n_clusters
  double intra_sim_min = 0.95;    ///< same-cluster cosine floor, in (inter, 1]
  double inter_sim_max = 0.3;     ///< cross-cluster cosine ceiling, in [0, intra)
};

/// A generated instance with its ground truth.
struct PlantedInstance {
  TokenMatrix tokens;                        ///< n = n_clusters * per_cluster rows
  std::vector<double> query;                 ///< drives saliency
  std::vector<TokenIndex> cluster_of;        ///< per token
  std::vector<TokenIndex> planted_critical;  ///< per cluster: its saliency argmax
  double intra_sim_min = 1.0;
  double inter_sim_max = 0.0;
};

/// Builds unit-norm token clusters with guaranteed similarity structure:
/// cluster c lives in the plane of basis axes 2c and 2c+1, its members fan
/// out from the axis-2c anchor by angles theta_j = acos(intra_sim_min)*j/per,
/// so same-cluster cosines stay >= intra_sim_min (strictly, with margin)
/// and cross-cluster cosines are exactly 0 (disjoint coordinate support).
/// The query combines the anchors with strictly decreasing coefficients, so
/// each cluster's angle-0 member is its strict saliency maximum — those are
/// the planted critical tokens.  Member-to-slot assignment is shuffled by
/// mt19937_64(seed).  All guarantees are re-verified by direct computation
/// before returning.
///
/// Throws infeasible_geometry when dim < 2*n_clusters or when per_cluster>1
/// with intra_sim_min >= 1 (a zero-width cone cannot hold distinct members),
/// invalid_argument for band violations (needs 0 <= inter < intra <= 1).
PlantedInstance generate_clustered(const SynthParams& params);

/// Fraction of the planted critical tokens present in the selection.
double recall_of_planted(const Selection& sel, const PlantedInstance& inst);

}  // namespace tokprune

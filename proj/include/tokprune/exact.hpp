#pragma once

#include <cstdint>

#include "tokprune/core.hpp"

namespace tokprune {

/// Hard size limits for the exponential solvers.  Conflict sets are 64-bit
/// masks, so even a caller-raised cap cannot exceed 62 tokens.
inline constexpr TokenIndex kDefaultExactCap = 24;
inline constexpr TokenIndex kEnumerationCap = 20;
inline constexpr TokenIndex kMaskCap = 62;

struct ExactSolution {
  Selection selection;  ///< optimal subset, indices ascending
  double objective = 0.0;
  std::uint64_t nodes_explored = 0;
  bool proven_optimal = false;
};

/// Optimal budgeted selection under the pairwise cosine ceiling, by
/// depth-first branch and bound over include/exclude decisions in
/// descending-weight order.
///
/// The bound at each node is the current weight plus the largest remaining
/// compatible positive weights up to the unused budget; a branch is pruned only
/// when its bound falls strictly below the incumbent minus 1e-9, so
/// floating-point ties are always explored.  Candidate objectives are
/// re-accumulated in ascending index order and ties resolved by
/// lexicographically smallest ascending index list, making the result
/// independent of visit order (and identical to brute-force enumeration).
/// The empty selection (objective 0) is the initial incumbent, so instances
/// where every weight is negative return the empty set.
///
/// Throws instance_too_large when weights.size() > cap (or > 62 regardless),
/// dimension_mismatch when sim disagrees, invalid_argument for budget < 0.
ExactSolution exact_solve(const SaliencyVector& weights,
                          const SimilarityMatrix& sim, double tau,
                          TokenIndex budget,
                          TokenIndex cap = kDefaultExactCap);

/// Pairwise penalty multipliers: either one shared value or a full
/// symmetric non-negative matrix.
class LagrangeMultipliers {
 public:
  static LagrangeMultipliers uniform(double lambda);
  static LagrangeMultipliers matrix(TokenIndex n, std::vector<double> values);

  /// Multiplier for the unordered pair {i, j}, i != j.
  double at(TokenIndex i, TokenIndex j) const;
  bool is_uniform() const noexcept { return n_ < 0; }

 private:
  LagrangeMultipliers() = default;
  TokenIndex n_ = -1;           // -1 marks the uniform representation
  double uniform_value_ = 0.0;
  std::vector<double> values_;  // row-major n x n when non-uniform
};

/// Penalized objective of an explicit 0/1 assignment:
///   sum_i w_i z_i  -  sum_{i<j} lambda_ij (cos_ij - tau) z_i z_j.
/// Both sums accumulate in ascending index order, so with lambda == 0 the
/// result is bitwise equal to objective_value of the induced selection.
double lagrangian_value(const std::vector<std::uint8_t>& z,
                        const SaliencyVector& weights,
                        const SimilarityMatrix& sim, double tau,
                        const LagrangeMultipliers& lambda);

struct LagrangianMax {
  std::vector<std::uint8_t> z;
  double value = 0.0;
};

/// Unbudgeted maximizer of lagrangian_value over all 2^n assignments.
/// Ties resolve to the lexicographically smallest z (compared entry by
/// entry from index 0), chosen explicitly rather than by iteration order.
/// Throws instance_too_large beyond `cap`.
LagrangianMax lagrangian_brute_max(const SaliencyVector& weights,
                                   const SimilarityMatrix& sim, double tau,
                                   const LagrangeMultipliers& lambda,
                                   TokenIndex cap = kEnumerationCap);

}  // namespace tokprune

#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace tokprune {

using TokenIndex = std::int32_t;
using SaliencyVector = std::vector<double>;

/// Machine-readable failure categories, shared across the library and the
/// C API (which maps them 1:1 onto tp_status codes).
enum class Errc {
  invalid_argument,
  dimension_mismatch,
  zero_norm_vector,
  index_out_of_range,
  empty_input,
  instance_too_large,
  budget_exceeds_n,
  grid_mismatch,
  target_unachievable,
  infeasible_geometry,
  degenerate_model,
  bad_magic,
  unsupported_version,
  truncated_file,
  non_finite_value,
  parse_error,
  io_error,
};

/// Stable identifier string for an error category, e.g. "zero_norm_vector".
const char* errc_name(Errc code) noexcept;

/// Exception carrying an Errc alongside the human-readable message.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

/// Row-major n x d matrix of token embeddings.  All entries must be finite;
/// construction rejects NaN/Inf.  d >= 1 always; n may be zero.
class TokenMatrix {
 public:
  TokenMatrix() = default;
  TokenMatrix(std::vector<double> data, TokenIndex n, TokenIndex d);

  TokenIndex count() const noexcept { return n_; }
  TokenIndex dim() const noexcept { return d_; }
  std::span<const double> row(TokenIndex i) const;
  const std::vector<double>& data() const noexcept { return data_; }

 private:
  std::vector<double> data_;
  TokenIndex n_ = 0;
  TokenIndex d_ = 1;
};

/// Dense symmetric n x n cosine matrix with unit diagonal.
class SimilarityMatrix {
 public:
  SimilarityMatrix() = default;
  explicit SimilarityMatrix(TokenIndex n);

  TokenIndex size() const noexcept { return n_; }
  double at(TokenIndex i, TokenIndex j) const;
  /// Sets [i][j] and [j][i].  Value must be finite and within [-1, 1] (a
  /// 1e-6 slack is tolerated for round-off on externally built matrices).
  void set_pair(TokenIndex i, TokenIndex j, double value);

 private:
  void check_index(TokenIndex i) const;

  TokenIndex n_ = 0;
  std::vector<double> values_;
};

/// A chosen subset of tokens.  `indices` is ordered by construction (greedy
/// emits pick order, file records ascending order); `backfilled` counts the
/// trailing entries that were re-admitted after the diversity pass and are
/// exempt from the pairwise-similarity guarantee.
struct Selection {
  std::vector<TokenIndex> indices;
  TokenIndex budget = 0;
  TokenIndex backfilled = 0;

  TokenIndex size() const noexcept {
    return static_cast<TokenIndex>(indices.size());
  }

  /// The leading, diversity-guaranteed part (drops the backfilled tail).
  Selection feasible_prefix() const;
};

/// One pairwise constraint violation: selected tokens i < j with cosine
/// similarity strictly above the threshold.
struct SimilarityViolation {
  TokenIndex i = 0;
  TokenIndex j = 0;
  double cosine = 0.0;
};

namespace detail {

/// Fixed-order eight-accumulator dot product.  Every cosine in the library
/// is computed through this kernel so that lazily evaluated similarities are
/// bitwise identical to the dense pairwise matrix.
double dot(std::span<const double> a, std::span<const double> b) noexcept;
double norm(std::span<const double> a) noexcept;

}  // namespace detail

/// Cosine similarity of two equal-length vectors, clamped to [-1, 1].
/// Throws dimension_mismatch on length mismatch or empty input and
/// zero_norm_vector when either vector has zero norm.
double cosine(std::span<const double> u, std::span<const double> v);

/// Full pairwise cosine matrix.  Throws zero_norm_vector naming the first
/// offending row.
SimilarityMatrix pairwise_similarities(const TokenMatrix& tokens);

/// Sum of weights over the selection, accumulated in stored index order.
/// Throws index_out_of_range if any index falls outside the weight vector.
double objective_value(const SaliencyVector& weights, const Selection& sel);

/// All selected pairs with similarity strictly above tau, emitted with
/// i < j in ascending lexicographic order.
std::vector<SimilarityViolation> feasibility_violations(
    const SimilarityMatrix& sim, const Selection& sel, double tau);

}  // namespace tokprune

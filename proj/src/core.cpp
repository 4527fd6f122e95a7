#include "tokprune/core.hpp"

#include <algorithm>
#include <cmath>

namespace tokprune {

const char* errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::invalid_argument: return "invalid_argument";
    case Errc::dimension_mismatch: return "dimension_mismatch";
    case Errc::zero_norm_vector: return "zero_norm_vector";
    case Errc::index_out_of_range: return "index_out_of_range";
    case Errc::empty_input: return "empty_input";
    case Errc::instance_too_large: return "instance_too_large";
    case Errc::budget_exceeds_n: return "budget_exceeds_n";
    case Errc::grid_mismatch: return "grid_mismatch";
    case Errc::target_unachievable: return "target_unachievable";
    case Errc::infeasible_geometry: return "infeasible_geometry";
    case Errc::degenerate_model: return "degenerate_model";
    case Errc::bad_magic: return "bad_magic";
    case Errc::unsupported_version: return "unsupported_version";
    case Errc::truncated_file: return "truncated_file";
    case Errc::non_finite_value: return "non_finite_value";
    case Errc::parse_error: return "parse_error";
    case Errc::io_error: return "io_error";
  }
  return "unknown";
}

TokenMatrix::TokenMatrix(std::vector<double> data, TokenIndex n, TokenIndex d)
    : data_(std::move(data)), n_(n), d_(d) {
  if (n < 0 || d < 1) {
    throw Error(Errc::invalid_argument,
                "token matrix requires n >= 0 and d >= 1, got n=" +
                    std::to_string(n) + " d=" + std::to_string(d));
  }
  if (data_.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(d)) {
    throw Error(Errc::dimension_mismatch,
                "token matrix data has " + std::to_string(data_.size()) +
                    " values, expected " + std::to_string(n) + "*" +
                    std::to_string(d));
  }
  for (std::size_t k = 0; k < data_.size(); ++k) {
    if (!std::isfinite(data_[k])) {
      throw Error(Errc::non_finite_value,
                  "non-finite embedding value at row " +
                      std::to_string(k / static_cast<std::size_t>(d)) +
                      ", col " + std::to_string(k % static_cast<std::size_t>(d)));
    }
  }
}

std::span<const double> TokenMatrix::row(TokenIndex i) const {
  if (i < 0 || i >= n_) {
    throw Error(Errc::index_out_of_range,
                "row " + std::to_string(i) + " outside matrix with " +
                    std::to_string(n_) + " rows");
  }
  return std::span<const double>(data_.data() +
                                     static_cast<std::size_t>(i) * d_,
                                 static_cast<std::size_t>(d_));
}

SimilarityMatrix::SimilarityMatrix(TokenIndex n) : n_(n) {
  if (n < 0) {
    throw Error(Errc::invalid_argument,
                "similarity matrix size must be >= 0, got " + std::to_string(n));
  }
  values_.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0.0);
  for (TokenIndex i = 0; i < n; ++i) {
    values_[static_cast<std::size_t>(i) * n + i] = 1.0;
  }
}

void SimilarityMatrix::check_index(TokenIndex i) const {
  if (i < 0 || i >= n_) {
    throw Error(Errc::index_out_of_range,
                "index " + std::to_string(i) + " outside similarity matrix of size " +
                    std::to_string(n_));
  }
}

double SimilarityMatrix::at(TokenIndex i, TokenIndex j) const {
  check_index(i);
  check_index(j);
  return values_[static_cast<std::size_t>(i) * n_ + j];
}

void SimilarityMatrix::set_pair(TokenIndex i, TokenIndex j, double value) {
  check_index(i);
  check_index(j);
  // Entries built from float-narrowed embeddings can land slightly outside
  // [-1, 1]; allow a small slack before rejecting.
  if (!std::isfinite(value) || value < -1.0 - 1e-6 || value > 1.0 + 1e-6) {
    throw Error(Errc::invalid_argument,
                "cosine value " + std::to_string(value) + " outside [-1, 1]");
  }
  values_[static_cast<std::size_t>(i) * n_ + j] = value;
  values_[static_cast<std::size_t>(j) * n_ + i] = value;
}

Selection Selection::feasible_prefix() const {
  Selection out;
  out.budget = budget;
  out.backfilled = 0;
  out.indices.assign(indices.begin(), indices.end() - backfilled);
  return out;
}

namespace detail {

// Cloned per vector ISA and dispatched once at load time.  Every clone keeps
// the same eight independent accumulator chains with contraction disabled
// (-ffp-contract=off build-wide), so wider units change throughput only --
// the returned bits are identical across targets.
#if defined(__x86_64__) && defined(__GNUC__) && !defined(__clang__)
[[gnu::target_clones("default", "avx2", "avx512f")]]
#endif
double dot(std::span<const double> a, std::span<const double> b) noexcept {
  const double* x = a.data();
  const double* y = b.data();
  const std::size_t n = a.size();
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  double s4 = 0.0, s5 = 0.0, s6 = 0.0, s7 = 0.0;
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    s0 += x[i] * y[i];
    s1 += x[i + 1] * y[i + 1];
    s2 += x[i + 2] * y[i + 2];
    s3 += x[i + 3] * y[i + 3];
    s4 += x[i + 4] * y[i + 4];
    s5 += x[i + 5] * y[i + 5];
    s6 += x[i + 6] * y[i + 6];
    s7 += x[i + 7] * y[i + 7];
  }
  for (; i < n; ++i) s0 += x[i] * y[i];
  return ((s0 + s1) + (s2 + s3)) + ((s4 + s5) + (s6 + s7));
}

double norm(std::span<const double> a) noexcept { return std::sqrt(dot(a, a)); }

}  // namespace detail

double cosine(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size() || u.empty()) {
    throw Error(Errc::dimension_mismatch,
                "cosine requires equal non-zero lengths, got " +
                    std::to_string(u.size()) + " and " + std::to_string(v.size()));
  }
  const double nu = detail::norm(u);
  const double nv = detail::norm(v);
  if (nu == 0.0 || nv == 0.0) {
    throw Error(Errc::zero_norm_vector, "cosine undefined for zero-norm vector");
  }
  const double c = detail::dot(u, v) / (nu * nv);
  return std::clamp(c, -1.0, 1.0);
}

SimilarityMatrix pairwise_similarities(const TokenMatrix& tokens) {
  const TokenIndex n = tokens.count();
  SimilarityMatrix sim(n);
  std::vector<double> norms(static_cast<std::size_t>(n));
  for (TokenIndex i = 0; i < n; ++i) {
    norms[i] = detail::norm(tokens.row(i));
    if (norms[i] == 0.0) {
      throw Error(Errc::zero_norm_vector,
                  "row " + std::to_string(i) + " has zero norm");
    }
  }
  for (TokenIndex i = 0; i < n; ++i) {
    const auto ri = tokens.row(i);
    for (TokenIndex j = i + 1; j < n; ++j) {
      const double c = detail::dot(ri, tokens.row(j)) / (norms[i] * norms[j]);
      sim.set_pair(i, j, std::clamp(c, -1.0, 1.0));
    }
  }
  return sim;
}

double objective_value(const SaliencyVector& weights, const Selection& sel) {
  const auto n = static_cast<TokenIndex>(weights.size());
  double total = 0.0;
  for (TokenIndex idx : sel.indices) {
    if (idx < 0 || idx >= n) {
      throw Error(Errc::index_out_of_range,
                  "selection index " + std::to_string(idx) +
                      " outside weight vector of size " + std::to_string(n));
    }
    total += weights[idx];
  }
  return total;
}

std::vector<SimilarityViolation> feasibility_violations(
    const SimilarityMatrix& sim, const Selection& sel, double tau) {
  std::vector<TokenIndex> sorted = sel.indices;
  for (TokenIndex idx : sorted) {
    if (idx < 0 || idx >= sim.size()) {
      throw Error(Errc::index_out_of_range,
                  "selection index " + std::to_string(idx) +
                      " outside similarity matrix of size " +
                      std::to_string(sim.size()));
    }
  }
  std::sort(sorted.begin(), sorted.end());
  std::vector<SimilarityViolation> out;
  for (std::size_t a = 0; a < sorted.size(); ++a) {
    for (std::size_t b = a + 1; b < sorted.size(); ++b) {
      const double c = sim.at(sorted[a], sorted[b]);
      if (c > tau) out.push_back({sorted[a], sorted[b], c});
    }
  }
  return out;
}

}  // namespace tokprune

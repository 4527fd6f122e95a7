#include "tokprune.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include "tokprune/baselines.hpp"
#include "tokprune/core.hpp"
#include "tokprune/cost.hpp"
#include "tokprune/exact.hpp"
#include "tokprune/greedy.hpp"
#include "tokprune/gridmap.hpp"
#include "tokprune/io.hpp"
#include "tokprune/saliency.hpp"
#include "tokprune/synth.hpp"

struct tp_tokens {
  tokprune::TokenMatrix matrix;
  std::optional<std::vector<double>> query;
  std::uint64_t checksum = 0;
};

struct tp_result {
  tokprune::Selection selection;
  std::string method_name;
  double tau = 0.0;
  std::int32_t budget = 0;
  std::optional<std::uint64_t> seed;
  double objective = 0.0;
  double feasible_objective = 0.0;
  std::int64_t violations = 0;
  double min_pairwise_distance = std::numeric_limits<double>::quiet_NaN();
  double mean_pairwise_cosine = std::numeric_limits<double>::quiet_NaN();
  std::int64_t runtime_us = 0;
  std::uint64_t nodes_explored = 0;
  bool proven_optimal = false;
  std::uint64_t checksum = 0;
};

struct tp_record {
  tokprune::SelectionRecord rec;
};

struct tp_planted {
  tokprune::PlantedInstance inst;
  tp_tokens tokens_view;
};

namespace {

using tokprune::Errc;
using tokprune::Error;

thread_local std::string t_last_error = "no error";

tp_status status_of(Errc code) {
  switch (code) {
    case Errc::invalid_argument: return TP_ERR_INVALID_ARGUMENT;
    case Errc::dimension_mismatch: return TP_ERR_DIMENSION_MISMATCH;
    case Errc::zero_norm_vector: return TP_ERR_ZERO_NORM_VECTOR;
    case Errc::index_out_of_range: return TP_ERR_INDEX_OUT_OF_RANGE;
    case Errc::empty_input: return TP_ERR_EMPTY_INPUT;
    case Errc::instance_too_large: return TP_ERR_INSTANCE_TOO_LARGE;
    case Errc::budget_exceeds_n: return TP_ERR_BUDGET_EXCEEDS_N;
    case Errc::grid_mismatch: return TP_ERR_GRID_MISMATCH;
    case Errc::target_unachievable: return TP_ERR_TARGET_UNACHIEVABLE;
    case Errc::infeasible_geometry: return TP_ERR_INFEASIBLE_GEOMETRY;
    case Errc::degenerate_model: return TP_ERR_DEGENERATE_MODEL;
    case Errc::bad_magic: return TP_ERR_BAD_MAGIC;
    case Errc::unsupported_version: return TP_ERR_UNSUPPORTED_VERSION;
    case Errc::truncated_file: return TP_ERR_TRUNCATED_FILE;
    case Errc::non_finite_value: return TP_ERR_NON_FINITE_VALUE;
    case Errc::parse_error: return TP_ERR_PARSE;
    case Errc::io_error: return TP_ERR_IO;
  }
  return TP_ERR_INTERNAL;
}

template <typename F>
tp_status wrap(F&& fn) noexcept {
  try {
    fn();
    return TP_OK;
  } catch (const Error& e) {
    t_last_error = e.what();
    return status_of(e.code());
  } catch (const std::exception& e) {
    t_last_error = e.what();
    return TP_ERR_INTERNAL;
  } catch (...) {
    t_last_error = "unknown error";
    return TP_ERR_INTERNAL;
  }
}

void require(bool condition, const char* what) {
  if (!condition) throw Error(Errc::invalid_argument, what);
}

/* Copies a std::string into a malloc'd, NUL-terminated buffer. */
void* copy_out(const std::string& s) {
  void* buf = std::malloc(s.size() + 1);
  if (!buf) throw std::bad_alloc();
  std::memcpy(buf, s.data(), s.size());
  static_cast<char*>(buf)[s.size()] = '\0';
  return buf;
}

std::string read_file_bytes(const char* path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io_error, std::string("cannot open ") + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw Error(Errc::io_error, std::string("read failure on ") + path);
  return std::move(buf).str();
}

/* Pairwise stats over the selection, evaluated with the shared cosine
 * kernel so they agree bit for bit with the dense matrix path. */
void fill_pairwise_stats(tp_result& result, const tokprune::TokenMatrix& matrix) {
  std::vector<tokprune::TokenIndex> sorted = result.selection.indices;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t feasible_size =
      result.selection.indices.size() -
      static_cast<std::size_t>(result.selection.backfilled);
  std::vector<tokprune::TokenIndex> feasible(
      result.selection.indices.begin(),
      result.selection.indices.begin() + feasible_size);
  std::sort(feasible.begin(), feasible.end());

  auto checked_norm = [&](tokprune::TokenIndex idx) {
    const double norm = tokprune::detail::norm(matrix.row(idx));
    if (norm == 0.0) {
      throw Error(Errc::zero_norm_vector,
                  "selected row " + std::to_string(idx) + " has zero norm");
    }
    return norm;
  };
  auto pair_cosine = [&](tokprune::TokenIndex a, double norm_a,
                         tokprune::TokenIndex b, double norm_b) {
    return std::clamp(
        tokprune::detail::dot(matrix.row(a), matrix.row(b)) / (norm_a * norm_b),
        -1.0, 1.0);
  };

  std::vector<double> norms(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    norms[i] = checked_norm(sorted[i]);
  }
  double min_dist = std::numeric_limits<double>::infinity();
  double cos_sum = 0.0;
  std::size_t pairs = 0;
  for (std::size_t a = 0; a < sorted.size(); ++a) {
    for (std::size_t b = a + 1; b < sorted.size(); ++b) {
      const double c = pair_cosine(sorted[a], norms[a], sorted[b], norms[b]);
      min_dist = std::min(min_dist, 1.0 - c);
      cos_sum += c;
      ++pairs;
    }
  }
  if (pairs > 0) {
    result.min_pairwise_distance = min_dist;
    result.mean_pairwise_cosine = cos_sum / static_cast<double>(pairs);
  }

  std::int64_t violations = 0;
  std::vector<double> feasible_norms(feasible.size());
  for (std::size_t i = 0; i < feasible.size(); ++i) {
    feasible_norms[i] = checked_norm(feasible[i]);
  }
  for (std::size_t a = 0; a < feasible.size(); ++a) {
    for (std::size_t b = a + 1; b < feasible.size(); ++b) {
      if (pair_cosine(feasible[a], feasible_norms[a], feasible[b],
                      feasible_norms[b]) > result.tau) {
        ++violations;
      }
    }
  }
  result.violations = violations;
}

}  // namespace

const char* tp_status_name(tp_status status) {
  switch (status) {
    case TP_OK: return "ok";
    case TP_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case TP_ERR_DIMENSION_MISMATCH: return "dimension_mismatch";
    case TP_ERR_ZERO_NORM_VECTOR: return "zero_norm_vector";
    case TP_ERR_INDEX_OUT_OF_RANGE: return "index_out_of_range";
    case TP_ERR_EMPTY_INPUT: return "empty_input";
    case TP_ERR_INSTANCE_TOO_LARGE: return "instance_too_large";
    case TP_ERR_BUDGET_EXCEEDS_N: return "budget_exceeds_n";
    case TP_ERR_GRID_MISMATCH: return "grid_mismatch";
    case TP_ERR_TARGET_UNACHIEVABLE: return "target_unachievable";
    case TP_ERR_INFEASIBLE_GEOMETRY: return "infeasible_geometry";
    case TP_ERR_DEGENERATE_MODEL: return "degenerate_model";
    case TP_ERR_BAD_MAGIC: return "bad_magic";
    case TP_ERR_UNSUPPORTED_VERSION: return "unsupported_version";
    case TP_ERR_TRUNCATED_FILE: return "truncated_file";
    case TP_ERR_NON_FINITE_VALUE: return "non_finite_value";
    case TP_ERR_PARSE: return "parse_error";
    case TP_ERR_IO: return "io_error";
    case TP_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* tp_last_error(void) { return t_last_error.c_str(); }

const char* tp_version(void) { return "1.0.0"; }

void tp_buffer_free(void* buffer) { std::free(buffer); }

tp_status tp_tokens_create(const double* data, int32_t n, int32_t d,
                           const double* query, tp_tokens** out) {
  return wrap([&] {
    require(out != nullptr, "null output pointer");
    require(data != nullptr || n == 0, "null data pointer");
    *out = nullptr;
    auto handle = std::make_unique<tp_tokens>();
    std::vector<double> values(data, data + static_cast<std::size_t>(n) *
                                          static_cast<std::size_t>(std::max(d, 0)));
    handle->matrix = tokprune::TokenMatrix(std::move(values), n, d);
    if (query) {
      for (int32_t k = 0; k < d; ++k) {
        if (!std::isfinite(query[k])) {
          throw Error(Errc::non_finite_value,
                      "query value at col " + std::to_string(k) + " is not finite");
        }
      }
      handle->query = std::vector<double>(query, query + d);
    }
    handle->checksum = tokprune::fnv1a64(
        tokprune::serialize_token_file(handle->matrix, handle->query));
    *out = handle.release();
  });
}

tp_status tp_tokens_load(const char* path, tp_tokens** out) {
  return wrap([&] {
    require(path != nullptr, "null path");
    require(out != nullptr, "null output pointer");
    *out = nullptr;
    const std::string bytes = read_file_bytes(path);
    tokprune::TokenFilePayload payload = tokprune::parse_token_file(bytes);
    auto handle = std::make_unique<tp_tokens>();
    handle->matrix = std::move(payload.tokens);
    handle->query = std::move(payload.query);
    handle->checksum = tokprune::fnv1a64(bytes);
    *out = handle.release();
  });
}

tp_status tp_tokens_save(const tp_tokens* tokens, const char* path) {
  return wrap([&] {
    require(tokens != nullptr, "null tokens handle");
    require(path != nullptr, "null path");
    tokprune::write_token_file(path, tokens->matrix, tokens->query);
  });
}

int32_t tp_tokens_count(const tp_tokens* tokens) {
  return tokens ? tokens->matrix.count() : 0;
}

int32_t tp_tokens_dim(const tp_tokens* tokens) {
  return tokens ? tokens->matrix.dim() : 0;
}

int32_t tp_tokens_has_query(const tp_tokens* tokens) {
  return tokens && tokens->query ? 1 : 0;
}

const double* tp_tokens_data(const tp_tokens* tokens) {
  return tokens ? tokens->matrix.data().data() : nullptr;
}

tp_status tp_tokens_checksum_hex(const tp_tokens* tokens, char* out) {
  return wrap([&] {
    require(tokens != nullptr, "null tokens handle");
    require(out != nullptr, "null output buffer");
    const std::string hex = tokprune::checksum_hex(tokens->checksum);
    std::memcpy(out, hex.c_str(), hex.size() + 1);
  });
}

void tp_tokens_free(tp_tokens* tokens) { delete tokens; }

void tp_options_init(tp_options* options) {
  if (!options) return;
  options->budget = 1;
  options->tau = 0.9;
  options->backfill = 1;
  options->seed = 0;
  options->grid_w = 0;
  options->grid_h = 0;
  options->exact_cap = 0;
  options->record_timing = 1;
}

tp_status tp_run(const tp_tokens* tokens, tp_method method,
                 const tp_options* options, const double* saliency,
                 tp_result** out) {
  return wrap([&] {
    require(tokens != nullptr, "null tokens handle");
    require(options != nullptr, "null options");
    require(out != nullptr, "null output pointer");
    *out = nullptr;

    const tokprune::TokenMatrix& matrix = tokens->matrix;
    const tokprune::TokenIndex n = matrix.count();

    tokprune::SaliencyVector weights;
    if (saliency) {
      weights.assign(saliency, saliency + n);
      for (tokprune::TokenIndex i = 0; i < n; ++i) {
        if (!std::isfinite(weights[i])) {
          throw Error(Errc::non_finite_value,
                      "saliency weight " + std::to_string(i) + " is not finite");
        }
      }
    } else if (tokens->query) {
      weights = tokprune::compute_saliency(matrix, *tokens->query);
    } else {
      throw Error(Errc::invalid_argument,
                  "no saliency source: pass explicit weights or use a token "
                  "set with an embedded query (every run reports an objective)");
    }

    auto result = std::make_unique<tp_result>();
    result->tau = options->tau;
    result->budget = options->budget;
    result->checksum = tokens->checksum;

    const auto t0 = std::chrono::steady_clock::now();
    switch (method) {
      case TP_METHOD_GREEDY: {
        tokprune::PruneConfig config;
        config.budget = options->budget;
        config.tau = options->tau;
        config.backfill = options->backfill != 0;
        result->selection = tokprune::greedy_prune(matrix, weights, config).selection;
        result->method_name = "greedy";
        break;
      }
      case TP_METHOD_TOPK: {
        result->selection = tokprune::topk_select(weights, options->budget);
        result->method_name = "topk";
        break;
      }
      case TP_METHOD_MAXMIN: {
        result->selection = tokprune::maxmin_diversity_select(matrix, options->budget);
        result->method_name = "maxmin";
        break;
      }
      case TP_METHOD_RANDOM: {
        result->selection = tokprune::random_select(n, options->budget, options->seed);
        result->method_name = "random";
        result->seed = options->seed;
        break;
      }
      case TP_METHOD_GRID: {
        result->selection = tokprune::uniform_grid_select(
            n, options->grid_w, options->grid_h, options->budget);
        result->method_name = "grid";
        break;
      }
      case TP_METHOD_EXACT: {
        const tokprune::TokenIndex cap =
            options->exact_cap > 0 ? options->exact_cap : tokprune::kDefaultExactCap;
        if (n > std::min(cap, tokprune::kMaskCap)) {
          throw Error(Errc::instance_too_large,
                      "exact method limited to " +
                          std::to_string(std::min(cap, tokprune::kMaskCap)) +
                          " tokens, got " + std::to_string(n));
        }
        const tokprune::SimilarityMatrix sim = tokprune::pairwise_similarities(matrix);
        tokprune::ExactSolution solution =
            tokprune::exact_solve(weights, sim, options->tau, options->budget, cap);
        result->selection = std::move(solution.selection);
        result->nodes_explored = solution.nodes_explored;
        result->proven_optimal = solution.proven_optimal;
        result->method_name = "exact";
        break;
      }
      default:
        throw Error(Errc::invalid_argument,
                    "unknown method " + std::to_string(static_cast<int>(method)));
    }
    const auto t1 = std::chrono::steady_clock::now();
    result->runtime_us =
        options->record_timing
            ? std::chrono::duration_cast<std::chrono::microseconds>(t1 - t0).count()
            : 0;

    result->objective = tokprune::objective_value(weights, result->selection);
    result->feasible_objective =
        tokprune::objective_value(weights, result->selection.feasible_prefix());
    fill_pairwise_stats(*result, matrix);
    *out = result.release();
  });
}

const int32_t* tp_result_indices(const tp_result* result, int32_t* count) {
  if (count) *count = result ? result->selection.size() : 0;
  return result ? result->selection.indices.data() : nullptr;
}

int32_t tp_result_backfilled_count(const tp_result* result) {
  return result ? result->selection.backfilled : 0;
}

double tp_result_objective(const tp_result* result) {
  return result ? result->objective : 0.0;
}

double tp_result_feasible_objective(const tp_result* result) {
  return result ? result->feasible_objective : 0.0;
}

int64_t tp_result_violations(const tp_result* result) {
  return result ? result->violations : 0;
}

double tp_result_min_pairwise_distance(const tp_result* result) {
  return result ? result->min_pairwise_distance
                : std::numeric_limits<double>::quiet_NaN();
}

double tp_result_mean_pairwise_cosine(const tp_result* result) {
  return result ? result->mean_pairwise_cosine
                : std::numeric_limits<double>::quiet_NaN();
}

int64_t tp_result_runtime_us(const tp_result* result) {
  return result ? result->runtime_us : 0;
}

uint64_t tp_result_nodes_explored(const tp_result* result) {
  return result ? result->nodes_explored : 0;
}

int32_t tp_result_proven_optimal(const tp_result* result) {
  return result && result->proven_optimal ? 1 : 0;
}

void tp_result_free(tp_result* result) { delete result; }

tp_status tp_result_record(const tp_result* result, tp_record** out) {
  return wrap([&] {
    require(result != nullptr, "null result handle");
    require(out != nullptr, "null output pointer");
    *out = nullptr;
    auto record = std::make_unique<tp_record>();
    tokprune::SelectionRecord& rec = record->rec;
    rec.method = result->method_name;
    rec.budget = result->budget;
    rec.tau = result->tau;
    rec.objective = result->objective;
    rec.feasibility_violations = result->violations;
    rec.backfilled = result->selection.backfilled;
    rec.runtime_us = result->runtime_us;
    rec.input_checksum = tokprune::checksum_hex(result->checksum);
    rec.indices = result->selection.indices;
    std::sort(rec.indices.begin(), rec.indices.end());
    rec.backfilled_indices.assign(
        result->selection.indices.end() - result->selection.backfilled,
        result->selection.indices.end());
    std::sort(rec.backfilled_indices.begin(), rec.backfilled_indices.end());
    rec.seed = result->seed;
    *out = record.release();
  });
}

tp_status tp_record_load(const char* path, tp_record** out) {
  return wrap([&] {
    require(path != nullptr, "null path");
    require(out != nullptr, "null output pointer");
    *out = nullptr;
    auto record = std::make_unique<tp_record>();
    record->rec = tokprune::read_selection(path);
    *out = record.release();
  });
}

tp_status tp_record_save(const tp_record* record, const char* path) {
  return wrap([&] {
    require(record != nullptr, "null record handle");
    require(path != nullptr, "null path");
    tokprune::write_selection(path, record->rec);
  });
}

tp_status tp_record_text(const tp_record* record, char** out) {
  return wrap([&] {
    require(record != nullptr, "null record handle");
    require(out != nullptr, "null output pointer");
    *out = static_cast<char*>(copy_out(tokprune::serialize_selection(record->rec)));
  });
}

const char* tp_record_method(const tp_record* record) {
  return record ? record->rec.method.c_str() : "";
}

int32_t tp_record_budget(const tp_record* record) {
  return record ? record->rec.budget : 0;
}

double tp_record_tau(const tp_record* record) {
  return record ? record->rec.tau : 0.0;
}

double tp_record_objective(const tp_record* record) {
  return record ? record->rec.objective : 0.0;
}

int64_t tp_record_violations(const tp_record* record) {
  return record ? record->rec.feasibility_violations : 0;
}

int64_t tp_record_runtime_us(const tp_record* record) {
  return record ? record->rec.runtime_us : 0;
}

const char* tp_record_checksum_hex(const tp_record* record) {
  return record ? record->rec.input_checksum.c_str() : "";
}

const int32_t* tp_record_indices(const tp_record* record, int32_t* count) {
  if (count) *count = record ? static_cast<int32_t>(record->rec.indices.size()) : 0;
  return record ? record->rec.indices.data() : nullptr;
}

const int32_t* tp_record_backfilled_indices(const tp_record* record,
                                            int32_t* count) {
  if (count) {
    *count = record ? static_cast<int32_t>(record->rec.backfilled_indices.size()) : 0;
  }
  return record ? record->rec.backfilled_indices.data() : nullptr;
}

void tp_record_free(tp_record* record) { delete record; }

namespace {

tokprune::GridMap map_of_record(const tp_record* record, int32_t grid_w,
                                int32_t grid_h) {
  require(record != nullptr, "null record handle");
  return tokprune::GridMap::from_selection(grid_w, grid_h, record->rec.indices,
                                           record->rec.backfilled_indices);
}

void emit_buffer(const std::string& bytes, uint8_t** data, size_t* size) {
  require(data != nullptr, "null output pointer");
  require(size != nullptr, "null size pointer");
  *data = static_cast<uint8_t*>(copy_out(bytes));
  *size = bytes.size();
}

}  // namespace

tp_status tp_render_pgm(const tp_record* record, int32_t grid_w, int32_t grid_h,
                        int32_t scale, uint8_t** data, size_t* size) {
  return wrap([&] {
    emit_buffer(tokprune::render_pgm(map_of_record(record, grid_w, grid_h), scale),
                data, size);
  });
}

tp_status tp_render_svg(const tp_record* record, int32_t grid_w, int32_t grid_h,
                        int32_t cell_px, uint8_t** data, size_t* size) {
  return wrap([&] {
    emit_buffer(tokprune::render_svg(map_of_record(record, grid_w, grid_h), cell_px),
                data, size);
  });
}

tp_status tp_generate(uint64_t seed, int32_t n_clusters, int32_t per_cluster,
                      int32_t dim, double intra_sim_min, double inter_sim_max,
                      tp_planted** out) {
  return wrap([&] {
    require(out != nullptr, "null output pointer");
    *out = nullptr;
    tokprune::SynthParams params;
    params.seed = seed;
    params.n_clusters = n_clusters;
    params.per_cluster = per_cluster;
    params.dim = dim;
    params.intra_sim_min = intra_sim_min;
    params.inter_sim_max = inter_sim_max;
    auto planted = std::make_unique<tp_planted>();
    planted->inst = tokprune::generate_clustered(params);
    planted->tokens_view.matrix = planted->inst.tokens;
    planted->tokens_view.query = planted->inst.query;
    planted->tokens_view.checksum = tokprune::fnv1a64(tokprune::serialize_token_file(
        planted->tokens_view.matrix, planted->tokens_view.query));
    *out = planted.release();
  });
}

const tp_tokens* tp_planted_tokens(const tp_planted* planted) {
  return planted ? &planted->tokens_view : nullptr;
}

const int32_t* tp_planted_cluster_of(const tp_planted* planted, int32_t* count) {
  if (count) {
    *count = planted ? static_cast<int32_t>(planted->inst.cluster_of.size()) : 0;
  }
  return planted ? planted->inst.cluster_of.data() : nullptr;
}

const int32_t* tp_planted_critical(const tp_planted* planted, int32_t* count) {
  if (count) {
    *count = planted ? static_cast<int32_t>(planted->inst.planted_critical.size()) : 0;
  }
  return planted ? planted->inst.planted_critical.data() : nullptr;
}

tp_status tp_planted_recall(const tp_planted* planted, const int32_t* indices,
                            int32_t count, double* out) {
  return wrap([&] {
    require(planted != nullptr, "null planted handle");
    require(indices != nullptr || count == 0, "null indices");
    require(out != nullptr, "null output pointer");
    tokprune::Selection sel;
    sel.indices.assign(indices, indices + count);
    sel.budget = count;
    *out = tokprune::recall_of_planted(sel, planted->inst);
  });
}

void tp_planted_free(tp_planted* planted) { delete planted; }

tp_status tp_layer_flops(int64_t seq_len, int64_t hidden_dim, int64_t ffn_dim,
                         double* out) {
  return wrap([&] {
    require(out != nullptr, "null output pointer");
    *out = tokprune::layer_flops(seq_len, hidden_dim, ffn_dim);
  });
}

tp_status tp_tflops_ratio(int32_t total_layers, int32_t prune_layer,
                          int64_t text_len, int64_t orig_visual,
                          int64_t pruned_visual, int64_t hidden_dim,
                          int64_t ffn_dim, double* out) {
  return wrap([&] {
    require(out != nullptr, "null output pointer");
    tokprune::CostParams params;
    params.total_layers = total_layers;
    params.prune_layer = prune_layer;
    params.text_len = text_len;
    params.orig_visual = orig_visual;
    params.pruned_visual = pruned_visual;
    params.hidden_dim = hidden_dim;
    params.ffn_dim = ffn_dim;
    *out = tokprune::tflops_ratio(params);
  });
}

tp_status tp_tokens_for_ratio(double target, int32_t total_layers,
                              int32_t prune_layer, int64_t text_len,
                              int64_t orig_visual, int64_t hidden_dim,
                              int64_t ffn_dim, int64_t* out) {
  return wrap([&] {
    require(out != nullptr, "null output pointer");
    tokprune::CostParams params;
    params.total_layers = total_layers;
    params.prune_layer = prune_layer;
    params.text_len = text_len;
    params.orig_visual = orig_visual;
    params.pruned_visual = 0;
    params.hidden_dim = hidden_dim;
    params.ffn_dim = ffn_dim;
    *out = tokprune::tokens_for_ratio(target, params);
  });
}

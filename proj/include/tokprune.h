/* tokprune — diversity-constrained visual token selection.
 *
 * C interface to the selection library: opaque handles, status-code returns,
 * thread-local error messages.  Every object created here must be released
 * with its matching _free function; accessor pointers stay valid until the
 * owning handle is freed.
 */
#ifndef TOKPRUNE_H
#define TOKPRUNE_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tp_status {
  TP_OK = 0,
  TP_ERR_INVALID_ARGUMENT = 1,
  TP_ERR_DIMENSION_MISMATCH = 2,
  TP_ERR_ZERO_NORM_VECTOR = 3,
  TP_ERR_INDEX_OUT_OF_RANGE = 4,
  TP_ERR_EMPTY_INPUT = 5,
  TP_ERR_INSTANCE_TOO_LARGE = 6,
  TP_ERR_BUDGET_EXCEEDS_N = 7,
  TP_ERR_GRID_MISMATCH = 8,
  TP_ERR_TARGET_UNACHIEVABLE = 9,
  TP_ERR_INFEASIBLE_GEOMETRY = 10,
  TP_ERR_DEGENERATE_MODEL = 11,
  TP_ERR_BAD_MAGIC = 12,
  TP_ERR_UNSUPPORTED_VERSION = 13,
  TP_ERR_TRUNCATED_FILE = 14,
  TP_ERR_NON_FINITE_VALUE = 15,
  TP_ERR_PARSE = 16,
  TP_ERR_IO = 17,
  TP_ERR_INTERNAL = 18
} tp_status;

typedef enum tp_method {
  TP_METHOD_GREEDY = 0,
  TP_METHOD_TOPK = 1,
  TP_METHOD_MAXMIN = 2,
  TP_METHOD_RANDOM = 3,
  TP_METHOD_GRID = 4,
  TP_METHOD_EXACT = 5
} tp_method;

/* Opaque handles. */
typedef struct tp_tokens tp_tokens;
typedef struct tp_result tp_result;
typedef struct tp_record tp_record;
typedef struct tp_planted tp_planted;

/* Stable name for a status code, e.g. "zero_norm_vector". */
const char* tp_status_name(tp_status status);

/* Message from the most recent failing call on this thread; never NULL. */
const char* tp_last_error(void);

/* Library version string. */
const char* tp_version(void);

/* Frees buffers returned through char/uint8_t out-parameters. */
void tp_buffer_free(void* buffer);

/* ---- Token sets ------------------------------------------------------- */

/* Builds a token set from a row-major n x d buffer; query (length d) may be
 * NULL.  All values must be finite. */
tp_status tp_tokens_create(const double* data, int32_t n, int32_t d,
                           const double* query, tp_tokens** out);

tp_status tp_tokens_load(const char* path, tp_tokens** out);
tp_status tp_tokens_save(const tp_tokens* tokens, const char* path);

int32_t tp_tokens_count(const tp_tokens* tokens);
int32_t tp_tokens_dim(const tp_tokens* tokens);
int32_t tp_tokens_has_query(const tp_tokens* tokens);

/* Row-major n x d values; valid until the handle is freed. */
const double* tp_tokens_data(const tp_tokens* tokens);

/* FNV-1a of the serialized byte stream, as 16 lowercase hex digits.
 * `out` must hold at least 17 bytes (terminator included). */
tp_status tp_tokens_checksum_hex(const tp_tokens* tokens, char* out);

void tp_tokens_free(tp_tokens* tokens);

/* ---- Selection -------------------------------------------------------- */

typedef struct tp_options {
  int32_t budget;        /* target selection size */
  double tau;            /* pairwise cosine ceiling (greedy/exact) */
  int32_t backfill;      /* greedy: refill to budget from eliminated (0/1) */
  uint64_t seed;         /* random method */
  int32_t grid_w;        /* grid method: token grid width */
  int32_t grid_h;        /* grid method: token grid height */
  int32_t exact_cap;     /* exact method: instance size cap, 0 = default 24 */
  int32_t record_timing; /* 0 records runtime_us = 0 for reproducible bytes */
} tp_options;

/* Fills defaults: budget 1, tau 0.9, backfill on, seed 0, no grid dims,
 * default exact cap, timing on. */
void tp_options_init(tp_options* options);

/* Runs one selection method.  `saliency` (length n) overrides the weights;
 * when NULL they are computed from the embedded query, and a token set with
 * neither is an error — every run reports an objective. */
tp_status tp_run(const tp_tokens* tokens, tp_method method,
                 const tp_options* options, const double* saliency,
                 tp_result** out);

/* Selected indices in pick order (backfilled tokens trail); valid until the
 * result is freed. */
const int32_t* tp_result_indices(const tp_result* result, int32_t* count);
int32_t tp_result_backfilled_count(const tp_result* result);
double tp_result_objective(const tp_result* result);
/* Objective over the non-backfilled part only. */
double tp_result_feasible_objective(const tp_result* result);
/* Pairs of non-backfilled tokens with cosine strictly above tau. */
int64_t tp_result_violations(const tp_result* result);
/* Min cosine distance / mean cosine over all selected pairs; NaN when the
 * selection has fewer than two tokens. */
double tp_result_min_pairwise_distance(const tp_result* result);
double tp_result_mean_pairwise_cosine(const tp_result* result);
int64_t tp_result_runtime_us(const tp_result* result);
/* Search nodes visited (exact method; 0 otherwise). */
uint64_t tp_result_nodes_explored(const tp_result* result);
int32_t tp_result_proven_optimal(const tp_result* result);
void tp_result_free(tp_result* result);

/* ---- Selection records ------------------------------------------------ */

/* Snapshot of a result as a portable record bound to its input by checksum. */
tp_status tp_result_record(const tp_result* result, tp_record** out);

tp_status tp_record_load(const char* path, tp_record** out);
tp_status tp_record_save(const tp_record* record, const char* path);

/* Serialized record text, NUL terminated; release with tp_buffer_free. */
tp_status tp_record_text(const tp_record* record, char** out);

const char* tp_record_method(const tp_record* record);
int32_t tp_record_budget(const tp_record* record);
double tp_record_tau(const tp_record* record);
double tp_record_objective(const tp_record* record);
int64_t tp_record_violations(const tp_record* record);
int64_t tp_record_runtime_us(const tp_record* record);
const char* tp_record_checksum_hex(const tp_record* record);
/* Ascending index lists; valid until the record is freed. */
const int32_t* tp_record_indices(const tp_record* record, int32_t* count);
const int32_t* tp_record_backfilled_indices(const tp_record* record,
                                            int32_t* count);
void tp_record_free(tp_record* record);

/* ---- Grid rendering ---------------------------------------------------- */

/* Rasterizes a record onto a grid_w x grid_h map.  Every selected index
 * must fall inside the grid (TP_ERR_INDEX_OUT_OF_RANGE otherwise); a record
 * does not carry the token count, so checking grid_w * grid_h against the
 * source token file is the caller's job (the CLI viz command does).  PGM
 * cells are scale x scale pixels; SVG cells are cell_px x cell_px.  Buffers
 * are NUL terminated but may contain interior NULs (PGM is binary) — use
 * *size.  Release with tp_buffer_free. */
tp_status tp_render_pgm(const tp_record* record, int32_t grid_w,
                        int32_t grid_h, int32_t scale, uint8_t** data,
                        size_t* size);
tp_status tp_render_svg(const tp_record* record, int32_t grid_w,
                        int32_t grid_h, int32_t cell_px, uint8_t** data,
                        size_t* size);

/* ---- Synthetic instances ---------------------------------------------- */

/* Planted-cluster generator; see tp_planted accessors for the ground truth.
 * Guarantees (verified at generation time): same-cluster cosine >= intra,
 * cross-cluster cosine <= inter, one designated critical token per cluster
 * that is its cluster's strict saliency maximum. */
tp_status tp_generate(uint64_t seed, int32_t n_clusters, int32_t per_cluster,
                      int32_t dim, double intra_sim_min, double inter_sim_max,
                      tp_planted** out);

/* Borrowed view of the generated tokens (query embedded); owned by the
 * planted handle — do not free separately. */
const tp_tokens* tp_planted_tokens(const tp_planted* planted);
const int32_t* tp_planted_cluster_of(const tp_planted* planted, int32_t* count);
const int32_t* tp_planted_critical(const tp_planted* planted, int32_t* count);

/* Fraction of planted critical tokens contained in `indices`. */
tp_status tp_planted_recall(const tp_planted* planted, const int32_t* indices,
                            int32_t count, double* out);
void tp_planted_free(tp_planted* planted);

/* ---- Compute-cost model ------------------------------------------------ */

/* Per-layer forward FLOPs at sequence length seq_len:
 * 4*mu*d^2 - 2*mu^2*d + 2*mu*d*m. */
tp_status tp_layer_flops(int64_t seq_len, int64_t hidden_dim, int64_t ffn_dim,
                         double* out);

/* Fraction of forward compute kept when visual tokens drop from orig_visual
 * to pruned_visual after prune_layer of total_layers layers, with text_len
 * text tokens.  Exactly 1.0 when nothing changes. */
tp_status tp_tflops_ratio(int32_t total_layers, int32_t prune_layer,
                          int64_t text_len, int64_t orig_visual,
                          int64_t pruned_visual, int64_t hidden_dim,
                          int64_t ffn_dim, double* out);

/* Largest retained-visual-token count whose ratio stays within target. */
tp_status tp_tokens_for_ratio(double target, int32_t total_layers,
                              int32_t prune_layer, int64_t text_len,
                              int64_t orig_visual, int64_t hidden_dim,
                              int64_t ffn_dim, int64_t* out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* TOKPRUNE_H */

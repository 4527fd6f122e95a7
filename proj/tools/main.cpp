// tokprune CLI: selection, comparison, sweeps, cost estimates, synthetic
// instance generation and grid visualization over the C API.

#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "tokprune.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;
constexpr int kExitAlgorithm = 4;

int exit_code_for(tp_status status) {
  switch (status) {
    case TP_OK:
      return kExitOk;
    case TP_ERR_BAD_MAGIC:
    case TP_ERR_UNSUPPORTED_VERSION:
    case TP_ERR_TRUNCATED_FILE:
    case TP_ERR_NON_FINITE_VALUE:
    case TP_ERR_PARSE:
    case TP_ERR_IO:
      return kExitIo;
    default:
      return kExitAlgorithm;
  }
}

[[nodiscard]] int fail_status(tp_status status) {
  std::fprintf(stderr, "error (%s): %s\n", tp_status_name(status), tp_last_error());
  return exit_code_for(status);
}

[[nodiscard]] int fail_config(const std::string& message) {
  std::fprintf(stderr, "error: %s\n", message.c_str());
  return kExitConfig;
}

std::string fmt6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

// RAII wrappers around the C handles.
struct TokensDeleter { void operator()(tp_tokens* t) const { tp_tokens_free(t); } };
struct ResultDeleter { void operator()(tp_result* r) const { tp_result_free(r); } };
struct RecordDeleter { void operator()(tp_record* r) const { tp_record_free(r); } };
struct PlantedDeleter { void operator()(tp_planted* p) const { tp_planted_free(p); } };
using TokensPtr = std::unique_ptr<tp_tokens, TokensDeleter>;
using ResultPtr = std::unique_ptr<tp_result, ResultDeleter>;
using RecordPtr = std::unique_ptr<tp_record, RecordDeleter>;
using PlantedPtr = std::unique_ptr<tp_planted, PlantedDeleter>;

struct BufferDeleter { void operator()(void* p) const { tp_buffer_free(p); } };

bool parse_grid_spec(const std::string& spec, std::int32_t& w, std::int32_t& h) {
  const std::size_t x = spec.find('x');
  if (x == std::string::npos || x == 0 || x + 1 >= spec.size()) return false;
  try {
    std::size_t used = 0;
    w = std::stoi(spec.substr(0, x), &used);
    if (used != x) return false;
    const std::string rest = spec.substr(x + 1);
    h = std::stoi(rest, &used);
    if (used != rest.size()) return false;
  } catch (const std::exception&) {
    return false;
  }
  return w >= 1 && h >= 1;
}

std::vector<std::string> split_csv(const std::string& csv) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= csv.size()) {
    const std::size_t comma = csv.find(',', pos);
    const std::size_t end = comma == std::string::npos ? csv.size() : comma;
    if (end > pos) out.push_back(csv.substr(pos, end - pos));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

bool method_from_name(const std::string& name, tp_method& method) {
  if (name == "greedy") method = TP_METHOD_GREEDY;
  else if (name == "topk") method = TP_METHOD_TOPK;
  else if (name == "maxmin") method = TP_METHOD_MAXMIN;
  else if (name == "random") method = TP_METHOD_RANDOM;
  else if (name == "grid") method = TP_METHOD_GRID;
  else if (name == "exact") method = TP_METHOD_EXACT;
  else return false;
  return true;
}

// Plain table printer: aligned columns for humans, raw tabs for pipelines.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void print(bool tsv) const {
    if (tsv) {
      auto emit = [](const std::vector<std::string>& cells) {
        std::string line;
        for (std::size_t i = 0; i < cells.size(); ++i) {
          if (i) line += '\t';
          line += cells[i];
        }
        line += '\n';
        std::fputs(line.c_str(), stdout);
      };
      emit(header);
      for (const auto& row : rows) emit(row);
      return;
    }
    std::vector<std::size_t> width(header.size());
    for (std::size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
    for (const auto& row : rows) {
      for (std::size_t c = 0; c < row.size(); ++c) {
        width[c] = std::max(width[c], row[c].size());
      }
    }
    auto emit = [&](const std::vector<std::string>& cells) {
      std::string line;
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) line += "  ";
        line += cells[i];
        if (i + 1 < cells.size()) {
          line.append(width[i] - cells[i].size(), ' ');
        }
      }
      line += '\n';
      std::fputs(line.c_str(), stdout);
    };
    emit(header);
    for (const auto& row : rows) emit(row);
  }
};

struct LoadedInput {
  TokensPtr tokens;
  std::vector<double> saliency;  // explicit override; empty = use query
};

// Loads --input and the optional --saliency-file (a token file with d = 1
// holding one weight per row).  Returns nonzero exit code on failure.
int load_input(const std::string& input_path, const std::string& saliency_path,
               LoadedInput& out) {
  tp_tokens* raw = nullptr;
  tp_status status = tp_tokens_load(input_path.c_str(), &raw);
  if (status != TP_OK) return fail_status(status);
  out.tokens.reset(raw);

  if (!saliency_path.empty()) {
    tp_tokens* sal_raw = nullptr;
    status = tp_tokens_load(saliency_path.c_str(), &sal_raw);
    if (status != TP_OK) return fail_status(status);
    TokensPtr sal(sal_raw);
    if (tp_tokens_dim(sal.get()) != 1) {
      return fail_config("--saliency-file must hold one value per row (d = 1), got d = " +
                         std::to_string(tp_tokens_dim(sal.get())));
    }
    if (tp_tokens_count(sal.get()) != tp_tokens_count(out.tokens.get())) {
      return fail_config("--saliency-file has " +
                         std::to_string(tp_tokens_count(sal.get())) +
                         " rows but --input has " +
                         std::to_string(tp_tokens_count(out.tokens.get())) +
                         " tokens");
    }
    const double* data = tp_tokens_data(sal.get());
    out.saliency.assign(data, data + tp_tokens_count(sal.get()));
  } else if (!tp_tokens_has_query(out.tokens.get())) {
    return fail_config("token file has no embedded query; pass --saliency-file");
  }
  return kExitOk;
}

// ---- prune -------------------------------------------------------------

struct PruneArgs {
  std::string input;
  std::string method = "greedy";
  std::int32_t budget = 0;
  double tau = 0.9;
  bool no_backfill = false;
  std::uint64_t seed = 0;
  std::string grid_spec;
  std::string saliency_file;
  std::string out_path;
  bool no_timing = false;
  std::int32_t exact_cap = 0;
};

int run_prune(const PruneArgs& args) {
  tp_method method{};
  if (!method_from_name(args.method, method)) {
    return fail_config("--method must be one of greedy|topk|maxmin|random|grid|exact");
  }
  if (args.budget < 1) {
    return fail_config("--budget must be >= 1");
  }

  LoadedInput input;
  if (int code = load_input(args.input, args.saliency_file, input)) return code;
  const std::int32_t n = tp_tokens_count(input.tokens.get());

  tp_options options;
  tp_options_init(&options);
  options.budget = args.budget;
  options.tau = args.tau;
  options.backfill = args.no_backfill ? 0 : 1;
  options.seed = args.seed;
  options.exact_cap = args.exact_cap;
  options.record_timing = args.no_timing ? 0 : 1;

  if (method == TP_METHOD_GRID) {
    if (args.grid_spec.empty()) {
      return fail_config("--grid WxH is required for the grid method");
    }
    if (!parse_grid_spec(args.grid_spec, options.grid_w, options.grid_h)) {
      return fail_config("--grid expects WxH with positive integers, got '" +
                         args.grid_spec + "'");
    }
    if (static_cast<std::int64_t>(options.grid_w) * options.grid_h != n) {
      return fail_config("--grid " + args.grid_spec + " does not match " +
                         std::to_string(n) + " input tokens");
    }
  }
  if (method == TP_METHOD_RANDOM && args.budget > n) {
    return fail_config("--budget " + std::to_string(args.budget) +
                       " exceeds the " + std::to_string(n) + " input tokens");
  }

  tp_result* result_raw = nullptr;
  tp_status status = tp_run(input.tokens.get(), method, &options,
                            input.saliency.empty() ? nullptr : input.saliency.data(),
                            &result_raw);
  if (status != TP_OK) return fail_status(status);
  ResultPtr result(result_raw);

  tp_record* record_raw = nullptr;
  status = tp_result_record(result.get(), &record_raw);
  if (status != TP_OK) return fail_status(status);
  RecordPtr record(record_raw);

  if (args.out_path.empty()) {
    char* text = nullptr;
    status = tp_record_text(record.get(), &text);
    if (status != TP_OK) return fail_status(status);
    std::unique_ptr<char, BufferDeleter> guard(text);
    std::fputs(text, stdout);
  } else {
    status = tp_record_save(record.get(), args.out_path.c_str());
    if (status != TP_OK) return fail_status(status);
  }
  return kExitOk;
}

// ---- compare -------------------------------------------------------------

struct CompareArgs {
  std::string input;
  std::string methods = "greedy,topk,maxmin,random";
  std::int32_t budget = 0;
  double tau = 0.9;
  std::uint64_t seed = 0;
  std::string grid_spec;
  std::string saliency_file;
  std::string sidecar;
  std::string format = "text";
  std::int32_t exact_cap = 0;
};

int run_compare(const CompareArgs& args) {
  if (args.budget < 1) return fail_config("--budget must be >= 1");
  const std::vector<std::string> names = split_csv(args.methods);
  if (names.empty()) return fail_config("--methods must name at least one method");

  LoadedInput input;
  if (int code = load_input(args.input, args.saliency_file, input)) return code;
  const std::int32_t n = tp_tokens_count(input.tokens.get());

  // Ground truth for the recall column: an optional JSON sidecar written by
  // `gen`, auto-detected next to the input when not given explicitly.
  std::vector<std::int32_t> criticals;
  std::string sidecar_path = args.sidecar;
  if (sidecar_path.empty()) {
    const std::string candidate = args.input + ".meta.json";
    if (std::filesystem::exists(candidate)) sidecar_path = candidate;
  }
  if (!sidecar_path.empty()) {
    std::ifstream in(sidecar_path);
    if (!in) return fail_config("cannot open --sidecar " + sidecar_path);
    nlohmann::json meta;
    try {
      in >> meta;
      char checksum[17] = {};
      if (tp_status s = tp_tokens_checksum_hex(input.tokens.get(), checksum);
          s != TP_OK) {
        return fail_status(s);
      }
      if (meta.contains("token_file_checksum") &&
          meta["token_file_checksum"].get<std::string>() != checksum) {
        return fail_config("--sidecar " + sidecar_path +
                           " does not match --input (checksum mismatch)");
      }
      criticals = meta.at("planted_critical").get<std::vector<std::int32_t>>();
    } catch (const nlohmann::json::exception& e) {
      return fail_config("malformed sidecar " + sidecar_path + ": " + e.what());
    }
  }

  // Exact optimum for the gap column whenever the instance is small enough.
  const std::int32_t cap = args.exact_cap > 0 ? args.exact_cap : 24;
  std::optional<double> exact_objective;
  if (n <= cap) {
    tp_options options;
    tp_options_init(&options);
    options.budget = args.budget;
    options.tau = args.tau;
    options.exact_cap = args.exact_cap;
    tp_result* exact_raw = nullptr;
    tp_status status = tp_run(input.tokens.get(), TP_METHOD_EXACT, &options,
                              input.saliency.empty() ? nullptr : input.saliency.data(),
                              &exact_raw);
    if (status != TP_OK) return fail_status(status);
    ResultPtr exact(exact_raw);
    exact_objective = tp_result_objective(exact.get());
  }

  Table table;
  table.header = {"method", "objective", "min_dist", "violations",
                  "recall", "gap", "runtime_us"};
  for (const std::string& name : names) {
    tp_method method{};
    if (!method_from_name(name, method)) {
      return fail_config("--methods contains unknown method '" + name + "'");
    }
    tp_options options;
    tp_options_init(&options);
    options.budget = args.budget;
    options.tau = args.tau;
    options.seed = args.seed;
    options.exact_cap = args.exact_cap;
    if (method == TP_METHOD_GRID) {
      if (args.grid_spec.empty() ||
          !parse_grid_spec(args.grid_spec, options.grid_w, options.grid_h)) {
        return fail_config("--grid WxH is required when comparing the grid method");
      }
      if (static_cast<std::int64_t>(options.grid_w) * options.grid_h != n) {
        return fail_config("--grid " + args.grid_spec + " does not match " +
                           std::to_string(n) + " input tokens");
      }
    }
    if (method == TP_METHOD_RANDOM && args.budget > n) {
      return fail_config("--budget " + std::to_string(args.budget) +
                         " exceeds the " + std::to_string(n) + " input tokens");
    }

    tp_result* result_raw = nullptr;
    tp_status status = tp_run(input.tokens.get(), method, &options,
                              input.saliency.empty() ? nullptr : input.saliency.data(),
                              &result_raw);
    if (status != TP_OK) return fail_status(status);
    ResultPtr result(result_raw);

    std::vector<std::string> row;
    row.push_back(name);
    row.push_back(fmt6(tp_result_objective(result.get())));
    const double min_dist = tp_result_min_pairwise_distance(result.get());
    row.push_back(min_dist == min_dist ? fmt6(min_dist) : "-");
    row.push_back(std::to_string(tp_result_violations(result.get())));
    if (criticals.empty()) {
      row.push_back("-");
    } else {
      std::int32_t count = 0;
      const std::int32_t* indices = tp_result_indices(result.get(), &count);
      double recall = 0.0;
      std::size_t hit = 0;
      for (std::int32_t crit : criticals) {
        for (std::int32_t k = 0; k < count; ++k) {
          if (indices[k] == crit) {
            ++hit;
            break;
          }
        }
      }
      recall = static_cast<double>(hit) / static_cast<double>(criticals.size());
      row.push_back(fmt6(recall));
    }
    if (exact_objective) {
      row.push_back(fmt6(*exact_objective -
                         tp_result_feasible_objective(result.get())));
    } else {
      row.push_back("-");
    }
    row.push_back(std::to_string(tp_result_runtime_us(result.get())));
    table.rows.push_back(std::move(row));
  }
  table.print(args.format == "tsv");
  return kExitOk;
}

// ---- sweep-tau -----------------------------------------------------------

struct SweepArgs {
  std::string input;
  std::int32_t budget = 0;
  std::string taus;
  std::string saliency_file;
  std::string format = "text";
};

int run_sweep(const SweepArgs& args) {
  if (args.budget < 1) return fail_config("--budget must be >= 1");
  std::vector<double> taus;
  for (const std::string& piece : split_csv(args.taus)) {
    try {
      std::size_t used = 0;
      taus.push_back(std::stod(piece, &used));
      if (used != piece.size()) throw std::invalid_argument(piece);
    } catch (const std::exception&) {
      return fail_config("--taus expects comma-separated numbers, got '" + piece + "'");
    }
  }
  if (taus.empty()) return fail_config("--taus must list at least one threshold");

  LoadedInput input;
  if (int code = load_input(args.input, args.saliency_file, input)) return code;

  Table table;
  table.header = {"tau", "selected", "backfilled", "objective", "mean_cos",
                  "runtime_us"};
  for (double tau : taus) {
    tp_options options;
    tp_options_init(&options);
    options.budget = args.budget;
    options.tau = tau;
    tp_result* result_raw = nullptr;
    tp_status status = tp_run(input.tokens.get(), TP_METHOD_GREEDY, &options,
                              input.saliency.empty() ? nullptr : input.saliency.data(),
                              &result_raw);
    if (status != TP_OK) return fail_status(status);
    ResultPtr result(result_raw);

    std::int32_t count = 0;
    tp_result_indices(result.get(), &count);
    const std::int32_t backfilled = tp_result_backfilled_count(result.get());
    std::vector<std::string> row;
    row.push_back(fmt6(tau));
    row.push_back(std::to_string(count - backfilled));
    row.push_back(std::to_string(backfilled));
    row.push_back(fmt6(tp_result_objective(result.get())));
    const double mean_cos = tp_result_mean_pairwise_cosine(result.get());
    row.push_back(mean_cos == mean_cos ? fmt6(mean_cos) : "-");
    row.push_back(std::to_string(tp_result_runtime_us(result.get())));
    table.rows.push_back(std::move(row));
  }
  table.print(args.format == "tsv");
  return kExitOk;
}

// ---- flops ---------------------------------------------------------------

struct FlopsArgs {
  std::int32_t layers = 0;
  std::int32_t prune_layer = 0;
  std::int64_t text_len = 0;
  std::int64_t visual = 0;
  std::int64_t pruned_visual = -1;
  double target = -1.0;
  std::int64_t hidden_dim = 0;
  std::int64_t ffn_dim = 0;
};

int run_flops(const FlopsArgs& args) {
  const bool has_pruned = args.pruned_visual >= 0;
  const bool has_target = args.target >= 0.0;
  if (has_pruned == has_target) {
    return fail_config("pass exactly one of --pruned-visual or --target");
  }
  if (has_target) {
    std::int64_t tokens = 0;
    tp_status status = tp_tokens_for_ratio(args.target, args.layers,
                                           args.prune_layer, args.text_len,
                                           args.visual, args.hidden_dim,
                                           args.ffn_dim, &tokens);
    if (status != TP_OK) return fail_status(status);
    std::printf("%" PRId64 "\n", tokens);
    return kExitOk;
  }
  double ratio = 0.0;
  tp_status status = tp_tflops_ratio(args.layers, args.prune_layer, args.text_len,
                                     args.visual, args.pruned_visual,
                                     args.hidden_dim, args.ffn_dim, &ratio);
  if (status != TP_OK) return fail_status(status);
  std::printf("%.6f\n", ratio);
  return kExitOk;
}

// ---- gen -----------------------------------------------------------------

struct GenArgs {
  std::string out_path;
  std::uint64_t seed = 0;
  std::int32_t clusters = 4;
  std::int32_t per_cluster = 8;
  std::int32_t dim = 32;
  double intra = 0.95;
  double inter = 0.3;
};

int run_gen(const GenArgs& args) {
  if (args.clusters < 1) return fail_config("--clusters must be >= 1");
  if (args.per_cluster < 1) return fail_config("--per-cluster must be >= 1");
  if (args.dim < 2 * args.clusters) {
    return fail_config("--dim must be >= 2 * --clusters (needed for orthogonal "
                       "cluster planes)");
  }
  if (!(args.inter >= 0.0 && args.inter < args.intra && args.intra <= 1.0)) {
    return fail_config("need 0 <= --inter < --intra <= 1");
  }
  if (args.per_cluster > 1 && args.intra >= 1.0) {
    return fail_config("--intra 1 leaves no room for distinct members; lower it "
                       "or use --per-cluster 1");
  }

  tp_planted* planted_raw = nullptr;
  tp_status status = tp_generate(args.seed, args.clusters, args.per_cluster,
                                 args.dim, args.intra, args.inter, &planted_raw);
  if (status != TP_OK) return fail_status(status);
  PlantedPtr planted(planted_raw);

  const tp_tokens* tokens = tp_planted_tokens(planted.get());
  status = tp_tokens_save(tokens, args.out_path.c_str());
  if (status != TP_OK) return fail_status(status);

  char checksum[17] = {};
  if (tp_status s = tp_tokens_checksum_hex(tokens, checksum); s != TP_OK) {
    return fail_status(s);
  }
  std::int32_t count = 0;
  const std::int32_t* cluster_of = tp_planted_cluster_of(planted.get(), &count);
  std::vector<std::int32_t> cluster_vec(cluster_of, cluster_of + count);
  const std::int32_t* critical = tp_planted_critical(planted.get(), &count);
  std::vector<std::int32_t> critical_vec(critical, critical + count);

  nlohmann::json meta;
  meta["seed"] = args.seed;
  meta["n_clusters"] = args.clusters;
  meta["per_cluster"] = args.per_cluster;
  meta["dim"] = args.dim;
  meta["intra_sim_min"] = args.intra;
  meta["inter_sim_max"] = args.inter;
  meta["cluster_of"] = cluster_vec;
  meta["planted_critical"] = critical_vec;
  meta["token_file_checksum"] = checksum;

  const std::string meta_path = args.out_path + ".meta.json";
  std::ofstream out(meta_path, std::ios::trunc);
  if (!out) {
    std::fprintf(stderr, "error: cannot open %s for writing\n", meta_path.c_str());
    return kExitIo;
  }
  out << meta.dump(2) << '\n';
  if (!out) {
    std::fprintf(stderr, "error: write failure on %s\n", meta_path.c_str());
    return kExitIo;
  }
  return kExitOk;
}

// ---- viz -----------------------------------------------------------------

struct VizArgs {
  std::string record_path;
  std::string input;
  std::string grid_spec;
  std::string out_base;
  std::int32_t scale = 4;
  std::int32_t cell_px = 16;
};

int run_viz(const VizArgs& args) {
  std::int32_t grid_w = 0, grid_h = 0;
  if (!parse_grid_spec(args.grid_spec, grid_w, grid_h)) {
    return fail_config("--grid expects WxH with positive integers, got '" +
                       args.grid_spec + "'");
  }

  tp_tokens* tokens_raw = nullptr;
  tp_status status = tp_tokens_load(args.input.c_str(), &tokens_raw);
  if (status != TP_OK) return fail_status(status);
  TokensPtr tokens(tokens_raw);

  tp_record* record_raw = nullptr;
  status = tp_record_load(args.record_path.c_str(), &record_raw);
  if (status != TP_OK) return fail_status(status);
  RecordPtr record(record_raw);

  const std::int32_t n = tp_tokens_count(tokens.get());
  if (static_cast<std::int64_t>(grid_w) * grid_h != n) {
    return fail_config("--grid " + args.grid_spec + " does not match " +
                       std::to_string(n) + " input tokens");
  }
  char checksum[17] = {};
  if (tp_status s = tp_tokens_checksum_hex(tokens.get(), checksum); s != TP_OK) {
    return fail_status(s);
  }
  if (std::strcmp(checksum, tp_record_checksum_hex(record.get())) != 0) {
    return fail_config("record was produced from a different token file "
                       "(checksum mismatch)");
  }

  auto write_bytes = [](const std::string& path, const uint8_t* data,
                        std::size_t size) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) return false;
    out.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(size));
    return static_cast<bool>(out);
  };

  uint8_t* pgm = nullptr;
  std::size_t pgm_size = 0;
  status = tp_render_pgm(record.get(), grid_w, grid_h, args.scale, &pgm, &pgm_size);
  if (status != TP_OK) return fail_status(status);
  std::unique_ptr<uint8_t, BufferDeleter> pgm_guard(pgm);
  if (!write_bytes(args.out_base + ".pgm", pgm, pgm_size)) {
    std::fprintf(stderr, "error: cannot write %s.pgm\n", args.out_base.c_str());
    return kExitIo;
  }

  uint8_t* svg = nullptr;
  std::size_t svg_size = 0;
  status = tp_render_svg(record.get(), grid_w, grid_h, args.cell_px, &svg, &svg_size);
  if (status != TP_OK) return fail_status(status);
  std::unique_ptr<uint8_t, BufferDeleter> svg_guard(svg);
  if (!write_bytes(args.out_base + ".svg", svg, svg_size)) {
    std::fprintf(stderr, "error: cannot write %s.svg\n", args.out_base.c_str());
    return kExitIo;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"diversity-constrained visual token selection"};
  app.require_subcommand(1);

  PruneArgs prune;
  CLI::App* prune_cmd = app.add_subcommand("prune", "select tokens and write a record");
  prune_cmd->add_option("--input", prune.input, "token file")->required();
  prune_cmd->add_option("--method", prune.method,
                        "greedy|topk|maxmin|random|grid|exact")
      ->required()
      ->check(CLI::IsMember({"greedy", "topk", "maxmin", "random", "grid", "exact"}));
  prune_cmd->add_option("--budget", prune.budget, "target selection size")->required();
  prune_cmd->add_option("--tau", prune.tau,
                        "pairwise cosine ceiling (tool default 0.9)");
  prune_cmd->add_flag("--no-backfill", prune.no_backfill,
                      "do not refill to the budget from eliminated tokens");
  prune_cmd->add_option("--seed", prune.seed, "seed for the random method");
  prune_cmd->add_option("--grid", prune.grid_spec, "token grid as WxH (grid method)");
  prune_cmd->add_option("--saliency-file", prune.saliency_file,
                        "token file with d=1 holding per-token weights");
  prune_cmd->add_option("--out", prune.out_path,
                        "record path (prints to stdout when omitted)");
  prune_cmd->add_flag("--no-timing", prune.no_timing,
                      "record runtime_us = 0 for byte-stable output");
  prune_cmd->add_option("--exact-cap", prune.exact_cap,
                        "instance size cap for the exact method (default 24)");

  CompareArgs compare;
  CLI::App* compare_cmd =
      app.add_subcommand("compare", "run several methods and tabulate them");
  compare_cmd->add_option("--input", compare.input, "token file")->required();
  compare_cmd->add_option("--methods", compare.methods,
                          "comma-separated method list");
  compare_cmd->add_option("--budget", compare.budget, "target selection size")
      ->required();
  compare_cmd->add_option("--tau", compare.tau, "pairwise cosine ceiling");
  compare_cmd->add_option("--seed", compare.seed, "seed for the random method");
  compare_cmd->add_option("--grid", compare.grid_spec, "token grid as WxH");
  compare_cmd->add_option("--saliency-file", compare.saliency_file,
                          "token file with d=1 holding per-token weights");
  compare_cmd->add_option("--sidecar", compare.sidecar,
                          "instance metadata JSON (auto-detects <input>.meta.json)");
  compare_cmd->add_option("--format", compare.format, "text|tsv")
      ->check(CLI::IsMember({"text", "tsv"}));
  compare_cmd->add_option("--exact-cap", compare.exact_cap,
                          "instance size cap for the gap column (default 24)");

  SweepArgs sweep;
  CLI::App* sweep_cmd =
      app.add_subcommand("sweep-tau", "greedy selection across thresholds");
  sweep_cmd->add_option("--input", sweep.input, "token file")->required();
  sweep_cmd->add_option("--budget", sweep.budget, "target selection size")->required();
  sweep_cmd->add_option("--taus", sweep.taus, "comma-separated thresholds")->required();
  sweep_cmd->add_option("--saliency-file", sweep.saliency_file,
                        "token file with d=1 holding per-token weights");
  sweep_cmd->add_option("--format", sweep.format, "text|tsv")
      ->check(CLI::IsMember({"text", "tsv"}));

  FlopsArgs flops;
  CLI::App* flops_cmd =
      app.add_subcommand("flops", "forward-compute ratio after pruning");
  flops_cmd->add_option("--layers", flops.layers, "total transformer layers")
      ->required();
  flops_cmd->add_option("--prune-layer", flops.prune_layer,
                        "layers that run at full length")
      ->required();
  flops_cmd->add_option("--text-len", flops.text_len, "text token count")->required();
  flops_cmd->add_option("--visual", flops.visual, "visual tokens before pruning")
      ->required();
  flops_cmd->add_option("--pruned-visual", flops.pruned_visual,
                        "visual tokens kept (ratio mode)");
  flops_cmd->add_option("--target", flops.target,
                        "target ratio in (0, 1] (token-count mode)");
  flops_cmd->add_option("--hidden-dim", flops.hidden_dim, "model width d")->required();
  flops_cmd->add_option("--ffn-dim", flops.ffn_dim, "feed-forward width m")->required();

  GenArgs gen;
  CLI::App* gen_cmd =
      app.add_subcommand("gen", "generate a planted-cluster token file");
  gen_cmd->add_option("--out", gen.out_path, "output token file")->required();
  gen_cmd->add_option("--seed", gen.seed, "generator seed");
  gen_cmd->add_option("--clusters", gen.clusters, "cluster count");
  gen_cmd->add_option("--per-cluster", gen.per_cluster, "members per cluster");
  gen_cmd->add_option("--dim", gen.dim, "embedding dim (>= 2 * clusters)");
  gen_cmd->add_option("--intra", gen.intra, "same-cluster cosine floor");
  gen_cmd->add_option("--inter", gen.inter, "cross-cluster cosine ceiling");

  VizArgs viz;
  CLI::App* viz_cmd =
      app.add_subcommand("viz", "render a selection record onto the token grid");
  viz_cmd->add_option("--record", viz.record_path, "selection record")->required();
  viz_cmd->add_option("--input", viz.input, "token file the record came from")
      ->required();
  viz_cmd->add_option("--grid", viz.grid_spec, "token grid as WxH")->required();
  viz_cmd->add_option("--out", viz.out_base, "output base path (writes .pgm and .svg)")
      ->required();
  viz_cmd->add_option("--scale", viz.scale, "PGM pixels per cell");
  viz_cmd->add_option("--cell-px", viz.cell_px, "SVG pixels per cell");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  if (prune_cmd->parsed()) return run_prune(prune);
  if (compare_cmd->parsed()) return run_compare(compare);
  if (sweep_cmd->parsed()) return run_sweep(sweep);
  if (flops_cmd->parsed()) return run_flops(flops);
  if (gen_cmd->parsed()) return run_gen(gen);
  if (viz_cmd->parsed()) return run_viz(viz);
  return kExitConfig;
}

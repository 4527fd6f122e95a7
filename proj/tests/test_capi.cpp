#include "tokprune.h"

#include <cmath>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include "doctest.h"

namespace {

// Raw embeddings for a three-token set where tokens 0 and 1 are near
// duplicates (cos 0.95) and token 2 is far from both (cos 0.1).
const double kFixture[9] = {
    1.0,  0.0,                 0.0,
    0.95, 0.31224989991991997, 0.0,
    0.1,  0.016012815380508725, 0.9948585777604724,
};

std::filesystem::path temp_file(const char* name) {
  const auto dir = std::filesystem::temp_directory_path() / "tokprune_capi";
  std::filesystem::create_directories(dir);
  return dir / name;
}

struct TokensGuard {
  tp_tokens* ptr = nullptr;
  ~TokensGuard() { tp_tokens_free(ptr); }
};
struct ResultGuard {
  tp_result* ptr = nullptr;
  ~ResultGuard() { tp_result_free(ptr); }
};
struct RecordGuard {
  tp_record* ptr = nullptr;
  ~RecordGuard() { tp_record_free(ptr); }
};
struct PlantedGuard {
  tp_planted* ptr = nullptr;
  ~PlantedGuard() { tp_planted_free(ptr); }
};

}  // namespace

TEST_CASE("status names and version are exposed") {
  CHECK(std::string(tp_status_name(TP_OK)) == "ok");
  CHECK(std::string(tp_status_name(TP_ERR_ZERO_NORM_VECTOR)) ==
        "zero_norm_vector");
  CHECK(std::string(tp_status_name(TP_ERR_TARGET_UNACHIEVABLE)) ==
        "target_unachievable");
  CHECK(tp_version() != nullptr);
  CHECK(tp_last_error() != nullptr);
}

TEST_CASE("token sets are created, inspected and checksummed") {
  TokensGuard tokens;
  const double query[3] = {1.0, 0.0, 0.0};
  REQUIRE(tp_tokens_create(kFixture, 3, 3, query, &tokens.ptr) == TP_OK);
  CHECK(tp_tokens_count(tokens.ptr) == 3);
  CHECK(tp_tokens_dim(tokens.ptr) == 3);
  CHECK(tp_tokens_has_query(tokens.ptr) == 1);
  const double* data = tp_tokens_data(tokens.ptr);
  REQUIRE(data != nullptr);
  CHECK(std::memcmp(data, kFixture, sizeof kFixture) == 0);

  char checksum[17] = {};
  REQUIRE(tp_tokens_checksum_hex(tokens.ptr, checksum) == TP_OK);
  CHECK(std::strlen(checksum) == 16);
  CHECK(std::string(checksum).find_first_not_of("0123456789abcdef") ==
        std::string::npos);
}

TEST_CASE("token set creation reports errors with messages") {
  tp_tokens* out = nullptr;
  CHECK(tp_tokens_create(nullptr, 3, 3, nullptr, &out) ==
        TP_ERR_INVALID_ARGUMENT);
  CHECK(out == nullptr);
  CHECK(std::string(tp_last_error()).size() > 0);

  const double bad[1] = {std::nan("")};
  CHECK(tp_tokens_create(bad, 1, 1, nullptr, &out) == TP_ERR_NON_FINITE_VALUE);
  CHECK(tp_tokens_create(kFixture, 3, 0, nullptr, &out) ==
        TP_ERR_INVALID_ARGUMENT);
  CHECK(tp_tokens_create(kFixture, 3, 3, nullptr, nullptr) ==
        TP_ERR_INVALID_ARGUMENT);
}

TEST_CASE("token sets round-trip through files") {
  TokensGuard tokens;
  const double query[3] = {1.0, 0.0, 0.0};
  REQUIRE(tp_tokens_create(kFixture, 3, 3, query, &tokens.ptr) == TP_OK);
  const auto path = temp_file("fixture.tok");
  REQUIRE(tp_tokens_save(tokens.ptr, path.string().c_str()) == TP_OK);

  TokensGuard loaded;
  REQUIRE(tp_tokens_load(path.string().c_str(), &loaded.ptr) == TP_OK);
  CHECK(tp_tokens_count(loaded.ptr) == 3);
  CHECK(tp_tokens_has_query(loaded.ptr) == 1);

  char a[17] = {}, b[17] = {};
  tp_tokens_checksum_hex(tokens.ptr, a);
  tp_tokens_checksum_hex(loaded.ptr, b);
  CHECK(std::string(a) == b);
  std::filesystem::remove(path);

  tp_tokens* missing = nullptr;
  CHECK(tp_tokens_load(temp_file("nope.tok").string().c_str(), &missing) ==
        TP_ERR_IO);
}

TEST_CASE("tp_run executes the greedy method with explicit weights") {
  TokensGuard tokens;
  REQUIRE(tp_tokens_create(kFixture, 3, 3, nullptr, &tokens.ptr) == TP_OK);

  tp_options options;
  tp_options_init(&options);
  CHECK(options.budget == 1);
  CHECK(options.tau == 0.9);
  CHECK(options.backfill == 1);
  options.budget = 2;

  const double saliency[3] = {0.9, 0.8, 0.5};
  ResultGuard result;
  REQUIRE(tp_run(tokens.ptr, TP_METHOD_GREEDY, &options, saliency,
                 &result.ptr) == TP_OK);

  int32_t count = 0;
  const int32_t* indices = tp_result_indices(result.ptr, &count);
  REQUIRE(count == 2);
  CHECK(indices[0] == 0);
  CHECK(indices[1] == 2);
  CHECK(tp_result_backfilled_count(result.ptr) == 0);
  CHECK(tp_result_objective(result.ptr) == 0.9 + 0.5);
  CHECK(tp_result_feasible_objective(result.ptr) == 0.9 + 0.5);
  CHECK(tp_result_violations(result.ptr) == 0);
  CHECK(tp_result_min_pairwise_distance(result.ptr) ==
        doctest::Approx(1.0 - 0.1));
  CHECK(tp_result_mean_pairwise_cosine(result.ptr) == doctest::Approx(0.1));
  CHECK(tp_result_nodes_explored(result.ptr) == 0);
  CHECK(tp_result_proven_optimal(result.ptr) == 0);
  CHECK(tp_result_runtime_us(result.ptr) >= 0);
}

TEST_CASE("tp_run resolves saliency from the embedded query") {
  TokensGuard tokens;
  const double query[3] = {1.0, 0.0, 0.0};
  REQUIRE(tp_tokens_create(kFixture, 3, 3, query, &tokens.ptr) == TP_OK);
  tp_options options;
  tp_options_init(&options);
  options.budget = 2;
  ResultGuard result;
  REQUIRE(tp_run(tokens.ptr, TP_METHOD_TOPK, &options, nullptr, &result.ptr) ==
          TP_OK);
  int32_t count = 0;
  const int32_t* indices = tp_result_indices(result.ptr, &count);
  REQUIRE(count == 2);
  // Cosine to e0 ranks token 0 first, the near duplicate second.
  CHECK(indices[0] == 0);
  CHECK(indices[1] == 1);
}

TEST_CASE("tp_run without any saliency source fails") {
  TokensGuard tokens;
  REQUIRE(tp_tokens_create(kFixture, 3, 3, nullptr, &tokens.ptr) == TP_OK);
  tp_options options;
  tp_options_init(&options);
  tp_result* out = nullptr;
  CHECK(tp_run(tokens.ptr, TP_METHOD_TOPK, &options, nullptr, &out) ==
        TP_ERR_INVALID_ARGUMENT);
  CHECK(std::string(tp_last_error()).find("saliency") != std::string::npos);
}

TEST_CASE("tp_run covers every method") {
  TokensGuard tokens;
  const double query[3] = {1.0, 0.0, 0.0};
  REQUIRE(tp_tokens_create(kFixture, 3, 3, query, &tokens.ptr) == TP_OK);
  tp_options options;
  tp_options_init(&options);
  options.budget = 2;
  options.seed = 42;
  options.grid_w = 3;
  options.grid_h = 1;

  for (tp_method method : {TP_METHOD_GREEDY, TP_METHOD_TOPK, TP_METHOD_MAXMIN,
                           TP_METHOD_RANDOM, TP_METHOD_GRID,
                           TP_METHOD_EXACT}) {
    ResultGuard result;
    REQUIRE(tp_run(tokens.ptr, method, &options, nullptr, &result.ptr) ==
            TP_OK);
    int32_t count = 0;
    tp_result_indices(result.ptr, &count);
    CHECK(count == 2);
  }

  // The exact method proves optimality and counts its search nodes.
  ResultGuard exact;
  REQUIRE(tp_run(tokens.ptr, TP_METHOD_EXACT, &options, nullptr, &exact.ptr) ==
          TP_OK);
  CHECK(tp_result_proven_optimal(exact.ptr) == 1);
  CHECK(tp_result_nodes_explored(exact.ptr) >= 1);

  // Random draws match the library baseline for the same seed.
  ResultGuard random;
  REQUIRE(tp_run(tokens.ptr, TP_METHOD_RANDOM, &options, nullptr,
                 &random.ptr) == TP_OK);
  int32_t count = 0;
  const int32_t* indices = tp_result_indices(random.ptr, &count);
  REQUIRE(count == 2);
  CHECK(indices[0] >= 0);
  CHECK(indices[0] < 3);
}

TEST_CASE("tp_run validates options") {
  TokensGuard tokens;
  const double query[3] = {1.0, 0.0, 0.0};
  REQUIRE(tp_tokens_create(kFixture, 3, 3, query, &tokens.ptr) == TP_OK);
  tp_options options;
  tp_options_init(&options);
  tp_result* out = nullptr;

  options.budget = 0;
  CHECK(tp_run(tokens.ptr, TP_METHOD_GREEDY, &options, nullptr, &out) ==
        TP_ERR_INVALID_ARGUMENT);

  tp_options_init(&options);
  options.budget = 4;
  CHECK(tp_run(tokens.ptr, TP_METHOD_RANDOM, &options, nullptr, &out) ==
        TP_ERR_BUDGET_EXCEEDS_N);

  tp_options_init(&options);
  options.budget = 2;
  options.grid_w = 2;
  options.grid_h = 2;
  CHECK(tp_run(tokens.ptr, TP_METHOD_GRID, &options, nullptr, &out) ==
        TP_ERR_GRID_MISMATCH);

  CHECK(tp_run(nullptr, TP_METHOD_GREEDY, &options, nullptr, &out) ==
        TP_ERR_INVALID_ARGUMENT);
}

TEST_CASE("exact runs respect the configurable cap") {
  std::vector<double> data(30 * 2);
  for (int i = 0; i < 30; ++i) {
    data[2 * i] = std::cos(0.1 * i);
    data[2 * i + 1] = std::sin(0.1 * i);
  }
  std::vector<double> query = {1.0, 0.0};
  TokensGuard tokens;
  REQUIRE(tp_tokens_create(data.data(), 30, 2, query.data(), &tokens.ptr) ==
          TP_OK);
  tp_options options;
  tp_options_init(&options);
  options.budget = 3;

  tp_result* out = nullptr;
  CHECK(tp_run(tokens.ptr, TP_METHOD_EXACT, &options, nullptr, &out) ==
        TP_ERR_INSTANCE_TOO_LARGE);

  options.exact_cap = 32;
  ResultGuard ok;
  CHECK(tp_run(tokens.ptr, TP_METHOD_EXACT, &options, nullptr, &ok.ptr) ==
        TP_OK);
}

TEST_CASE("records snapshot results and round-trip through files") {
  TokensGuard tokens;
  const double query[3] = {1.0, 0.0, 0.0};
  REQUIRE(tp_tokens_create(kFixture, 3, 3, query, &tokens.ptr) == TP_OK);
  tp_options options;
  tp_options_init(&options);
  options.budget = 2;
  options.record_timing = 0;  // byte-stable output

  ResultGuard result;
  REQUIRE(tp_run(tokens.ptr, TP_METHOD_GREEDY, &options, nullptr,
                 &result.ptr) == TP_OK);
  CHECK(tp_result_runtime_us(result.ptr) == 0);

  RecordGuard record;
  REQUIRE(tp_result_record(result.ptr, &record.ptr) == TP_OK);
  CHECK(std::string(tp_record_method(record.ptr)) == "greedy");
  CHECK(tp_record_budget(record.ptr) == 2);
  CHECK(tp_record_tau(record.ptr) == 0.9);
  CHECK(tp_record_objective(record.ptr) ==
        tp_result_objective(result.ptr));
  CHECK(tp_record_violations(record.ptr) == 0);
  CHECK(tp_record_runtime_us(record.ptr) == 0);

  char checksum[17] = {};
  tp_tokens_checksum_hex(tokens.ptr, checksum);
  CHECK(std::string(tp_record_checksum_hex(record.ptr)) == checksum);

  int32_t count = 0;
  const int32_t* indices = tp_record_indices(record.ptr, &count);
  REQUIRE(count == 2);
  CHECK(indices[0] == 0);  // records store ascending order
  CHECK(indices[1] == 2);
  int32_t back_count = -1;
  tp_record_backfilled_indices(record.ptr, &back_count);
  CHECK(back_count == 0);

  char* text = nullptr;
  REQUIRE(tp_record_text(record.ptr, &text) == TP_OK);
  REQUIRE(text != nullptr);
  const std::string first(text);
  tp_buffer_free(text);
  CHECK(first.find("method = greedy\n") != std::string::npos);

  const auto path = temp_file("record.txt");
  REQUIRE(tp_record_save(record.ptr, path.string().c_str()) == TP_OK);
  RecordGuard loaded;
  REQUIRE(tp_record_load(path.string().c_str(), &loaded.ptr) == TP_OK);
  char* second = nullptr;
  REQUIRE(tp_record_text(loaded.ptr, &second) == TP_OK);
  CHECK(first == second);
  tp_buffer_free(second);
  std::filesystem::remove(path);
}

TEST_CASE("records render to deterministic PGM and SVG buffers") {
  std::vector<double> data(16 * 2);
  for (int i = 0; i < 16; ++i) {
    data[2 * i] = std::cos(0.3 * i);
    data[2 * i + 1] = std::sin(0.3 * i);
  }
  const std::vector<double> query = {1.0, 0.0};
  TokensGuard tokens;
  REQUIRE(tp_tokens_create(data.data(), 16, 2, query.data(), &tokens.ptr) ==
          TP_OK);
  tp_options options;
  tp_options_init(&options);
  options.budget = 4;
  options.tau = 0.5;
  ResultGuard result;
  REQUIRE(tp_run(tokens.ptr, TP_METHOD_GREEDY, &options, nullptr,
                 &result.ptr) == TP_OK);
  RecordGuard record;
  REQUIRE(tp_result_record(result.ptr, &record.ptr) == TP_OK);

  uint8_t* pgm1 = nullptr;
  size_t size1 = 0;
  REQUIRE(tp_render_pgm(record.ptr, 4, 4, 2, &pgm1, &size1) == TP_OK);
  uint8_t* pgm2 = nullptr;
  size_t size2 = 0;
  REQUIRE(tp_render_pgm(record.ptr, 4, 4, 2, &pgm2, &size2) == TP_OK);
  REQUIRE(size1 == size2);
  CHECK(std::memcmp(pgm1, pgm2, size1) == 0);
  CHECK(std::memcmp(pgm1, "P5\n", 3) == 0);
  tp_buffer_free(pgm1);
  tp_buffer_free(pgm2);

  uint8_t* svg = nullptr;
  size_t svg_size = 0;
  REQUIRE(tp_render_svg(record.ptr, 4, 4, 16, &svg, &svg_size) == TP_OK);
  CHECK(svg_size > 0);
  CHECK(std::string(reinterpret_cast<char*>(svg), svg_size).find("<svg") !=
        std::string::npos);
  tp_buffer_free(svg);

  // A larger grid renders fine (extra cells are simply removed), but a grid
  // too small for the selected indices is rejected.
  uint8_t* extra = nullptr;
  size_t extra_size = 0;
  REQUIRE(tp_render_pgm(record.ptr, 5, 4, 1, &extra, &extra_size) == TP_OK);
  tp_buffer_free(extra);
  uint8_t* bad = nullptr;
  size_t bad_size = 0;
  CHECK(tp_render_pgm(record.ptr, 3, 4, 1, &bad, &bad_size) ==
        TP_ERR_INDEX_OUT_OF_RANGE);
}

TEST_CASE("planted instances cross the C boundary with their ground truth") {
  PlantedGuard planted;
  REQUIRE(tp_generate(7, 3, 4, 8, 0.95, 0.3, &planted.ptr) == TP_OK);

  const tp_tokens* tokens = tp_planted_tokens(planted.ptr);
  REQUIRE(tokens != nullptr);
  CHECK(tp_tokens_count(tokens) == 12);
  CHECK(tp_tokens_dim(tokens) == 8);
  CHECK(tp_tokens_has_query(tokens) == 1);

  int32_t cluster_count = 0;
  const int32_t* cluster_of = tp_planted_cluster_of(planted.ptr,
                                                    &cluster_count);
  REQUIRE(cluster_count == 12);
  int32_t critical_count = 0;
  const int32_t* critical = tp_planted_critical(planted.ptr, &critical_count);
  REQUIRE(critical_count == 3);
  for (int i = 0; i < 3; ++i) {
    CHECK(cluster_of[critical[i]] == i);
  }

  double recall = -1.0;
  REQUIRE(tp_planted_recall(planted.ptr, critical, 3, &recall) == TP_OK);
  CHECK(recall == 1.0);
  REQUIRE(tp_planted_recall(planted.ptr, critical, 1, &recall) == TP_OK);
  CHECK(recall == doctest::Approx(1.0 / 3.0));

  // Greedy over the planted instance recovers every critical token.
  tp_options options;
  tp_options_init(&options);
  options.budget = 3;
  options.tau = 0.5;
  ResultGuard result;
  REQUIRE(tp_run(tokens, TP_METHOD_GREEDY, &options, nullptr, &result.ptr) ==
          TP_OK);
  int32_t count = 0;
  const int32_t* indices = tp_result_indices(result.ptr, &count);
  REQUIRE(tp_planted_recall(planted.ptr, indices, count, &recall) == TP_OK);
  CHECK(recall == 1.0);

  tp_planted* bad = nullptr;
  CHECK(tp_generate(7, 3, 4, 4, 0.95, 0.3, &bad) ==
        TP_ERR_INFEASIBLE_GEOMETRY);
  CHECK(tp_generate(7, 3, 4, 8, 0.2, 0.3, &bad) == TP_ERR_INVALID_ARGUMENT);
}

TEST_CASE("the cost model crosses the C boundary") {
  double flops = 0.0;
  REQUIRE(tp_layer_flops(640, 4096, 11008, &flops) == TP_OK);
  CHECK(flops == 97307852800.0);
  CHECK(tp_layer_flops(-1, 16, 16, &flops) == TP_ERR_INVALID_ARGUMENT);

  double ratio = 0.0;
  REQUIRE(tp_tflops_ratio(32, 1, 64, 576, 64, 4096, 11008, &ratio) == TP_OK);
  CHECK(ratio == doctest::Approx(0.2303448275862069).epsilon(1e-15));
  REQUIRE(tp_tflops_ratio(32, 1, 64, 576, 576, 4096, 11008, &ratio) == TP_OK);
  CHECK(ratio == 1.0);

  int64_t tokens = 0;
  REQUIRE(tp_tokens_for_ratio(1.0, 32, 1, 64, 576, 4096, 11008, &tokens) ==
          TP_OK);
  CHECK(tokens == 576);
  REQUIRE(tp_tokens_for_ratio(0.2303448275862069, 32, 1, 64, 576, 4096, 11008,
                              &tokens) == TP_OK);
  CHECK(tokens == 64);
  CHECK(tp_tokens_for_ratio(0.01, 32, 1, 64, 576, 4096, 11008, &tokens) ==
        TP_ERR_TARGET_UNACHIEVABLE);
  CHECK(tp_tokens_for_ratio(0.0, 32, 1, 64, 576, 4096, 11008, &tokens) ==
        TP_ERR_INVALID_ARGUMENT);
}

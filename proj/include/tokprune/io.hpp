#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tokprune/core.hpp"

namespace tokprune {

/// Binary token container, 20-byte header then float32 payload:
///   "TOKD" | u32 version=1 | u32 n | u32 d | u8 has_query | 3 zero bytes |
///   n*d row-major float32 LE | (d float32 LE query when has_query)
/// Total size must match the header exactly; values must stay finite after
/// the float32 narrowing.
struct TokenFilePayload {
  TokenMatrix tokens;
  std::optional<std::vector<double>> query;
};

std::string serialize_token_file(const TokenMatrix& tokens,
                                 const std::optional<std::vector<double>>& query);

/// Throws bad_magic, unsupported_version, truncated_file (message carries
/// expected vs actual byte counts) or non_finite_value (with row/col).
TokenFilePayload parse_token_file(std::string_view bytes);

TokenFilePayload read_token_file(const std::filesystem::path& path);
void write_token_file(const std::filesystem::path& path,
                      const TokenMatrix& tokens,
                      const std::optional<std::vector<double>>& query);

/// FNV-1a over raw bytes (offset basis 14695981039346656037,
/// prime 1099511628211).
std::uint64_t fnv1a64(std::string_view bytes);

/// 16 lowercase hex digits, zero padded.
std::string checksum_hex(std::uint64_t value);

/// One selection run, serialized as a line-based `key = value` text format
/// with a fixed first line ("tokprune-selection v1").  Doubles use
/// shortest-round-trip formatting, so parse(serialize(r)) is lossless.
/// `backfilled_indices` and `seed` are optional and omitted when
/// empty/absent; unrecognized keys survive a round trip verbatim, appended
/// after the known fields.
struct SelectionRecord {
  std::string method;
  TokenIndex budget = 0;
  double tau = 0.0;
  double objective = 0.0;
  std::int64_t feasibility_violations = 0;
  TokenIndex backfilled = 0;
  std::int64_t runtime_us = 0;
  std::string input_checksum;                    // 16 hex digits
  std::vector<TokenIndex> indices;               // ascending
  std::vector<TokenIndex> backfilled_indices;    // ascending, subset of indices
  std::optional<std::uint64_t> seed;
  std::vector<std::pair<std::string, std::string>> extra;
};

std::string serialize_selection(const SelectionRecord& record);

/// Throws parse_error with a line number for malformed input, duplicate or
/// missing required keys.
SelectionRecord parse_selection(std::string_view text);

SelectionRecord read_selection(const std::filesystem::path& path);
void write_selection(const std::filesystem::path& path,
                     const SelectionRecord& record);

}  // namespace tokprune

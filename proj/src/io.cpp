#include "tokprune/io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

namespace tokprune {
namespace {

constexpr char kMagic[4] = {'T', 'O', 'K', 'D'};
constexpr std::uint32_t kVersion = 1;
constexpr std::size_t kHeaderSize = 20;
constexpr std::string_view kRecordHeader = "tokprune-selection v1";

void put_u32(std::string& out, std::uint32_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
  out.push_back(static_cast<char>((v >> 16) & 0xff));
  out.push_back(static_cast<char>((v >> 24) & 0xff));
}

std::uint32_t get_u32(std::string_view bytes, std::size_t offset) {
  return static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[offset])) |
         static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[offset + 1])) << 8 |
         static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[offset + 2])) << 16 |
         static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[offset + 3])) << 24;
}

void put_f32(std::string& out, double value, const char* what, std::size_t row,
             std::size_t col) {
  const float narrowed = static_cast<float>(value);
  if (!std::isfinite(narrowed)) {
    throw Error(Errc::non_finite_value,
                std::string(what) + " value at row " + std::to_string(row) +
                    ", col " + std::to_string(col) +
                    " is not finite as float32");
  }
  put_u32(out, std::bit_cast<std::uint32_t>(narrowed));
}

double get_f32(std::string_view bytes, std::size_t offset, const char* what,
               std::size_t row, std::size_t col) {
  const float v = std::bit_cast<float>(get_u32(bytes, offset));
  if (!std::isfinite(v)) {
    throw Error(Errc::non_finite_value,
                std::string(what) + " value at row " + std::to_string(row) +
                    ", col " + std::to_string(col) + " is not finite");
  }
  return static_cast<double>(v);
}

std::string format_double(double v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

[[noreturn]] void fail_parse(std::size_t line_no, const std::string& what) {
  throw Error(Errc::parse_error,
              "line " + std::to_string(line_no) + ": " + what);
}

double parse_double(const std::string& s, std::size_t line_no) {
  double v{};
  const char* begin = s.data();
  const char* end = begin + s.size();
  auto r = std::from_chars(begin, end, v);
  if (r.ec != std::errc() || r.ptr != end) {
    fail_parse(line_no, "expected a number, got '" + s + "'");
  }
  return v;
}

std::int64_t parse_int(const std::string& s, std::size_t line_no) {
  std::int64_t v{};
  const char* begin = s.data();
  const char* end = begin + s.size();
  auto r = std::from_chars(begin, end, v);
  if (r.ec != std::errc() || r.ptr != end) {
    fail_parse(line_no, "expected an integer, got '" + s + "'");
  }
  return v;
}

std::uint64_t parse_uint(const std::string& s, std::size_t line_no) {
  std::uint64_t v{};
  const char* begin = s.data();
  const char* end = begin + s.size();
  auto r = std::from_chars(begin, end, v);
  if (r.ec != std::errc() || r.ptr != end) {
    fail_parse(line_no, "expected an unsigned integer, got '" + s + "'");
  }
  return v;
}

std::string format_indices(const std::vector<TokenIndex>& indices) {
  std::string out = "[";
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (i) out += ", ";
    out += std::to_string(indices[i]);
  }
  out += "]";
  return out;
}

std::vector<TokenIndex> parse_indices(const std::string& s, std::size_t line_no) {
  if (s.size() < 2 || s.front() != '[' || s.back() != ']') {
    fail_parse(line_no, "expected an index list like [1, 2, 3], got '" + s + "'");
  }
  std::vector<TokenIndex> out;
  std::string inner = s.substr(1, s.size() - 2);
  std::size_t pos = 0;
  while (pos < inner.size()) {
    while (pos < inner.size() && (inner[pos] == ' ' || inner[pos] == ',')) ++pos;
    if (pos == inner.size()) break;
    std::size_t stop = pos;
    while (stop < inner.size() && inner[stop] != ',' && inner[stop] != ' ') ++stop;
    out.push_back(static_cast<TokenIndex>(
        parse_int(inner.substr(pos, stop - pos), line_no)));
    pos = stop;
  }
  return out;
}

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
  return std::string(s.substr(b, e - b));
}

}  // namespace

std::string serialize_token_file(
    const TokenMatrix& tokens, const std::optional<std::vector<double>>& query) {
  if (query && static_cast<TokenIndex>(query->size()) != tokens.dim()) {
    throw Error(Errc::dimension_mismatch,
                "query has " + std::to_string(query->size()) +
                    " dims, embeddings have " + std::to_string(tokens.dim()));
  }
  std::string out;
  const auto n = static_cast<std::size_t>(tokens.count());
  const auto d = static_cast<std::size_t>(tokens.dim());
  out.reserve(kHeaderSize + 4 * (n * d + (query ? d : 0)));
  out.append(kMagic, 4);
  put_u32(out, kVersion);
  put_u32(out, static_cast<std::uint32_t>(tokens.count()));
  put_u32(out, static_cast<std::uint32_t>(tokens.dim()));
  out.push_back(query ? 1 : 0);
  out.append(3, '\0');
  const std::vector<double>& data = tokens.data();
  for (std::size_t k = 0; k < data.size(); ++k) {
    put_f32(out, data[k], "embedding", k / d, k % d);
  }
  if (query) {
    for (std::size_t k = 0; k < d; ++k) put_f32(out, (*query)[k], "query", n, k);
  }
  return out;
}

TokenFilePayload parse_token_file(std::string_view bytes) {
  if (bytes.size() < kHeaderSize) {
    throw Error(Errc::truncated_file,
                "expected at least " + std::to_string(kHeaderSize) +
                    " header bytes, got " + std::to_string(bytes.size()));
  }
  if (std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw Error(Errc::bad_magic, "not a token file (bad magic)");
  }
  const std::uint32_t version = get_u32(bytes, 4);
  if (version != kVersion) {
    throw Error(Errc::unsupported_version,
                "unsupported token file version " + std::to_string(version));
  }
  const std::uint64_t n = get_u32(bytes, 8);
  const std::uint64_t d = get_u32(bytes, 12);
  if (d < 1 || d > 0x7fffffffull || n > 0x7fffffffull) {
    throw Error(Errc::parse_error,
                "implausible token file header: n=" + std::to_string(n) +
                    " d=" + std::to_string(d));
  }
  const bool has_query = static_cast<unsigned char>(bytes[16]) != 0;
  const std::uint64_t expected =
      kHeaderSize + 4 * (n * d + (has_query ? d : 0));
  if (bytes.size() != expected) {
    throw Error(Errc::truncated_file,
                "expected " + std::to_string(expected) + " bytes, got " +
                    std::to_string(bytes.size()));
  }
  std::vector<double> data(n * d);
  std::size_t offset = kHeaderSize;
  for (std::size_t k = 0; k < data.size(); ++k, offset += 4) {
    data[k] = get_f32(bytes, offset, "embedding", k / d, k % d);
  }
  TokenFilePayload payload;
  payload.tokens = TokenMatrix(std::move(data), static_cast<TokenIndex>(n),
                               static_cast<TokenIndex>(d));
  if (has_query) {
    std::vector<double> query(d);
    for (std::size_t k = 0; k < query.size(); ++k, offset += 4) {
      query[k] = get_f32(bytes, offset, "query", n, k);
    }
    payload.query = std::move(query);
  }
  return payload;
}

TokenFilePayload read_token_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(Errc::io_error, "cannot open " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) {
    throw Error(Errc::io_error, "read failure on " + path.string());
  }
  return parse_token_file(buf.str());
}

void write_token_file(const std::filesystem::path& path,
                      const TokenMatrix& tokens,
                      const std::optional<std::vector<double>>& query) {
  const std::string bytes = serialize_token_file(tokens, query);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(Errc::io_error, "cannot open " + path.string() + " for writing");
  }
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) {
    throw Error(Errc::io_error, "write failure on " + path.string());
  }
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t hash = 14695981039346656037ull;
  for (char c : bytes) {
    hash ^= static_cast<unsigned char>(c);
    hash *= 1099511628211ull;
  }
  return hash;
}

std::string checksum_hex(std::uint64_t value) {
  static const char digits[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = digits[value & 0xf];
    value >>= 4;
  }
  return out;
}

std::string serialize_selection(const SelectionRecord& record) {
  std::string out;
  out += kRecordHeader;
  out += '\n';
  auto field = [&](std::string_view key, const std::string& value) {
    out += key;
    out += " = ";
    out += value;
    out += '\n';
  };
  field("method", record.method);
  field("budget", std::to_string(record.budget));
  field("tau", format_double(record.tau));
  field("objective", format_double(record.objective));
  field("feasibility_violations", std::to_string(record.feasibility_violations));
  field("backfilled", std::to_string(record.backfilled));
  field("runtime_us", std::to_string(record.runtime_us));
  field("input_checksum", record.input_checksum);
  field("indices", format_indices(record.indices));
  if (!record.backfilled_indices.empty()) {
    field("backfilled_indices", format_indices(record.backfilled_indices));
  }
  if (record.seed) {
    field("seed", std::to_string(*record.seed));
  }
  for (const auto& [key, value] : record.extra) {
    field(key, value);
  }
  return out;
}

SelectionRecord parse_selection(std::string_view text) {
  std::size_t pos = 0;
  std::size_t line_no = 0;
  auto next_line = [&](std::string& line) {
    if (pos >= text.size()) return false;
    const std::size_t nl = text.find('\n', pos);
    const std::size_t end = nl == std::string_view::npos ? text.size() : nl;
    line = trim(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    return true;
  };

  std::string line;
  if (!next_line(line) || line != kRecordHeader) {
    fail_parse(line_no ? line_no : 1,
               "expected header '" + std::string(kRecordHeader) + "'");
  }

  SelectionRecord record;
  bool seen_method = false, seen_budget = false, seen_tau = false,
       seen_objective = false, seen_violations = false, seen_backfilled = false,
       seen_runtime = false, seen_checksum = false, seen_indices = false,
       seen_backfill_list = false, seen_seed = false;
  while (next_line(line)) {
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      fail_parse(line_no, "expected 'key = value', got '" + line + "'");
    }
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (key.empty()) fail_parse(line_no, "empty key");

    auto claim = [&](bool& seen) {
      if (seen) fail_parse(line_no, "duplicate key '" + key + "'");
      seen = true;
    };
    if (key == "method") {
      claim(seen_method);
      record.method = value;
    } else if (key == "budget") {
      claim(seen_budget);
      record.budget = static_cast<TokenIndex>(parse_int(value, line_no));
    } else if (key == "tau") {
      claim(seen_tau);
      record.tau = parse_double(value, line_no);
    } else if (key == "objective") {
      claim(seen_objective);
      record.objective = parse_double(value, line_no);
    } else if (key == "feasibility_violations") {
      claim(seen_violations);
      record.feasibility_violations = parse_int(value, line_no);
    } else if (key == "backfilled") {
      claim(seen_backfilled);
      record.backfilled = static_cast<TokenIndex>(parse_int(value, line_no));
    } else if (key == "runtime_us") {
      claim(seen_runtime);
      record.runtime_us = parse_int(value, line_no);
    } else if (key == "input_checksum") {
      claim(seen_checksum);
      if (value.size() != 16 ||
          value.find_first_not_of("0123456789abcdef") != std::string::npos) {
        fail_parse(line_no, "checksum must be 16 lowercase hex digits");
      }
      record.input_checksum = value;
    } else if (key == "indices") {
      claim(seen_indices);
      record.indices = parse_indices(value, line_no);
    } else if (key == "backfilled_indices") {
      claim(seen_backfill_list);
      record.backfilled_indices = parse_indices(value, line_no);
    } else if (key == "seed") {
      claim(seen_seed);
      record.seed = parse_uint(value, line_no);
    } else {
      record.extra.emplace_back(key, value);
    }
  }

  const std::pair<bool, const char*> required[] = {
      {seen_method, "method"},       {seen_budget, "budget"},
      {seen_tau, "tau"},             {seen_objective, "objective"},
      {seen_violations, "feasibility_violations"},
      {seen_backfilled, "backfilled"}, {seen_runtime, "runtime_us"},
      {seen_checksum, "input_checksum"}, {seen_indices, "indices"},
  };
  for (const auto& [seen, name] : required) {
    if (!seen) {
      throw Error(Errc::parse_error, std::string("missing field: ") + name);
    }
  }
  return record;
}

SelectionRecord read_selection(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(Errc::io_error, "cannot open " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) {
    throw Error(Errc::io_error, "read failure on " + path.string());
  }
  return parse_selection(buf.str());
}

void write_selection(const std::filesystem::path& path,
                     const SelectionRecord& record) {
  const std::string text = serialize_selection(record);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(Errc::io_error, "cannot open " + path.string() + " for writing");
  }
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) {
    throw Error(Errc::io_error, "write failure on " + path.string());
  }
}

}  // namespace tokprune

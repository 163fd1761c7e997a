#pragma once

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include "regimecast/error.hpp"

namespace regimecast {

/// Shortest round-trip decimal form; re-parsing yields the same bits.
inline std::string format_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline std::string format_int(std::int64_t v) {
  char buf[24];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view s, std::string_view what) {
  double v{};
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw parse_error("not a number in " + std::string(what) + ": '" + std::string(s) + "'");
  return v;
}

inline std::int64_t parse_int(std::string_view s, std::string_view what) {
  std::int64_t v{};
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw parse_error("not an integer in " + std::string(what) + ": '" + std::string(s) + "'");
  return v;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(trim(line.substr(start)));
      break;
    }
    out.push_back(trim(line.substr(start, pos - start)));
    start = pos + 1;
  }
  return out;
}

/// Comment-line metadata carried at the top of stage files:
///   # schema regimecast-candles/v1
///   # config 1a2b3c4d5e6f7081
///   # <key> <value>
/// External files without such lines parse as meta-less.
struct FileMeta {
  std::string schema;
  std::string config_hash;
  std::vector<std::pair<std::string, std::string>> extra;

  std::optional<std::string> get(std::string_view key) const {
    for (const auto& [k, v] : extra)
      if (k == key) return v;
    return std::nullopt;
  }
};

inline void write_meta(std::ostream& os, const FileMeta& meta) {
  if (!meta.schema.empty()) os << "# schema " << meta.schema << "\n";
  if (!meta.config_hash.empty()) os << "# config " << meta.config_hash << "\n";
  for (const auto& [k, v] : meta.extra) os << "# " << k << " " << v << "\n";
}

/// Reads a text file into metadata plus data lines (comments and blank
/// lines stripped).
struct TextFile {
  FileMeta meta;
  std::vector<std::string> lines;
};

inline TextFile read_text_file(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw parse_error("cannot open file: " + path.string());
  TextFile out;
  std::string line;
  bool in_header = true;
  while (std::getline(is, line)) {
    std::string_view sv = trim(line);
    if (sv.empty()) continue;
    if (sv.front() == '#') {
      if (!in_header) continue;  // comments after data are ignored
      sv.remove_prefix(1);
      sv = trim(sv);
      const std::size_t sp = sv.find(' ');
      if (sp == std::string_view::npos) continue;
      const std::string key(trim(sv.substr(0, sp)));
      const std::string value(trim(sv.substr(sp + 1)));
      if (key == "schema")
        out.meta.schema = value;
      else if (key == "config")
        out.meta.config_hash = value;
      else
        out.meta.extra.emplace_back(key, value);
      continue;
    }
    in_header = false;
    out.lines.push_back(std::string(sv));
  }
  return out;
}

/// Schema/hash gate for stage inputs. A missing tag on the file is fine
/// (external input); a present-but-different one is rejected.
inline void check_meta(const FileMeta& meta, std::string_view expected_schema,
                       std::string_view expected_hash, const std::filesystem::path& path) {
  if (!meta.schema.empty() && meta.schema != expected_schema)
    throw version_error("schema mismatch in " + path.string() + ": found '" + meta.schema +
                        "', expected '" + std::string(expected_schema) + "'");
  if (!expected_hash.empty() && !meta.config_hash.empty() && meta.config_hash != expected_hash)
    throw version_error("config hash mismatch in " + path.string() + ": file was produced by config " +
                        meta.config_hash + ", current config is " + std::string(expected_hash));
}

/// Writes through a temp file so a failed stage leaves no partial output.
class AtomicFile {
 public:
  explicit AtomicFile(std::filesystem::path path)
      : path_(std::move(path)), tmp_(path_.string() + ".tmp"), os_(tmp_, std::ios::trunc) {
    if (!os_) throw error("cannot open for writing: " + tmp_.string());
  }
  ~AtomicFile() {
    if (!committed_) {
      os_.close();
      std::error_code ec;
      std::filesystem::remove(tmp_, ec);
    }
  }
  std::ostream& stream() { return os_; }
  void commit() {
    os_.flush();
    if (!os_) throw error("write failed: " + tmp_.string());
    os_.close();
    std::filesystem::rename(tmp_, path_);
    committed_ = true;
  }

 private:
  std::filesystem::path path_;
  std::filesystem::path tmp_;
  std::ofstream os_;
  bool committed_ = false;
};

}  // namespace regimecast

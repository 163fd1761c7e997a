#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "regimecast/error.hpp"
#include "regimecast/io.hpp"
#include "regimecast/version.hpp"

namespace regimecast {

/// One minute bar. Timestamps are UTC epoch milliseconds.
struct Candle {
  std::int64_t timestamp = 0;
  double open = 0.0;
  double high = 0.0;
  double low = 0.0;
  double close = 0.0;
  double volume = 0.0;
};

enum class GapPolicy { reject, forward_fill };

/// A market's ordered minute candles on a fixed interval.
struct CandleSeries {
  std::string market_id;
  std::vector<Candle> candles;
  std::int64_t interval_ms = 60'000;
  bool gap_filled = false;

  std::size_t size() const { return candles.size(); }
};

/// Per-minute log returns: values[t] = ln(close(t+1) / close(t)),
/// stamped with the minute the return leaves from.
struct ReturnSeries {
  std::string market_id;
  std::vector<std::int64_t> timestamps;
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
};

namespace detail {

inline void check_candle(const Candle& c) {
  const bool finite = std::isfinite(c.open) && std::isfinite(c.high) && std::isfinite(c.low) &&
                      std::isfinite(c.close) && std::isfinite(c.volume);
  if (!finite)
    throw validation_error("non-finite field at timestamp " + format_int(c.timestamp));
  if (!(c.open > 0.0 && c.high > 0.0 && c.low > 0.0 && c.close > 0.0))
    throw validation_error("non-positive price at timestamp " + format_int(c.timestamp));
  if (c.volume < 0.0)
    throw validation_error("negative volume at timestamp " + format_int(c.timestamp));
  if (c.low > std::min(c.open, c.close) || c.high < std::max(c.open, c.close))
    throw validation_error("inconsistent OHLC at timestamp " + format_int(c.timestamp));
}

}  // namespace detail

/// Sorts, checks every invariant and applies the gap policy. Both ingestion
/// paths (CSV and exchange fetch) build series through here.
inline CandleSeries finalize_series(std::string market_id, std::vector<Candle> rows,
                                    GapPolicy gaps = GapPolicy::reject,
                                    std::int64_t interval_ms = 60'000) {
  if (rows.empty()) throw insufficient_data_error("no candles for market " + market_id);
  std::sort(rows.begin(), rows.end(),
            [](const Candle& a, const Candle& b) { return a.timestamp < b.timestamp; });

  CandleSeries out;
  out.market_id = std::move(market_id);
  out.interval_ms = interval_ms;
  out.candles.reserve(rows.size());

  for (std::size_t i = 0; i < rows.size(); ++i) {
    detail::check_candle(rows[i]);
    if (i > 0) {
      const std::int64_t prev = rows[i - 1].timestamp;
      const std::int64_t cur = rows[i].timestamp;
      if (cur == prev)
        throw validation_error("duplicate timestamp " + format_int(cur) + " in market " +
                               out.market_id);
      if (cur - prev != interval_ms) {
        if (gaps == GapPolicy::reject)
          throw validation_error("timestamp gap between " + format_int(prev) + " and " +
                                 format_int(cur) + " in market " + out.market_id +
                                 " (use forward fill to accept gaps)");
        const Candle& last = out.candles.back();
        for (std::int64_t t = prev + interval_ms; t < cur; t += interval_ms)
          out.candles.push_back(Candle{t, last.close, last.close, last.close, last.close, 0.0});
        out.gap_filled = true;
      }
    }
    out.candles.push_back(rows[i]);
  }
  return out;
}

inline constexpr const char* kCandlesHeader = "timestamp,open,high,low,close,volume";

/// Parses the canonical candles CSV. Rows are sorted by timestamp before
/// validation; malformed fields report the 1-based line number.
inline CandleSeries parse_candles_csv(const std::filesystem::path& path, std::string market_id,
                                      GapPolicy gaps = GapPolicy::reject) {
  std::ifstream is(path);
  if (!is) throw parse_error("cannot open candles file: " + path.string());

  std::vector<Candle> rows;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(is, line)) {
    ++line_no;
    std::string_view sv = trim(line);
    if (sv.empty() || sv.front() == '#') continue;
    if (!header_seen) {
      if (sv != kCandlesHeader)
        throw parse_error(path.string() + ":" + format_int(std::int64_t(line_no)) +
                          ": expected header '" + kCandlesHeader + "'");
      header_seen = true;
      continue;
    }
    const auto fields = split(sv, ',');
    if (fields.size() != 6)
      throw parse_error(path.string() + ":" + format_int(std::int64_t(line_no)) +
                        ": expected 6 fields, got " + format_int(std::int64_t(fields.size())));
    const std::string where = path.string() + ":" + format_int(std::int64_t(line_no));
    Candle c;
    c.timestamp = parse_int(fields[0], where);
    c.open = parse_double(fields[1], where);
    c.high = parse_double(fields[2], where);
    c.low = parse_double(fields[3], where);
    c.close = parse_double(fields[4], where);
    c.volume = parse_double(fields[5], where);
    rows.push_back(c);
  }
  if (!header_seen) throw parse_error(path.string() + ": missing candles header");
  try {
    return finalize_series(std::move(market_id), std::move(rows), gaps);
  } catch (const error& e) {
    throw validation_error(path.string() + ": " + e.what());
  }
}

inline void write_candles_csv(const CandleSeries& series, const std::filesystem::path& path,
                              const FileMeta* meta = nullptr) {
  AtomicFile file(path);
  auto& os = file.stream();
  if (meta) write_meta(os, *meta);
  os << kCandlesHeader << "\n";
  for (const Candle& c : series.candles) {
    os << format_int(c.timestamp) << ',' << format_double(c.open) << ',' << format_double(c.high)
       << ',' << format_double(c.low) << ',' << format_double(c.close) << ','
       << format_double(c.volume) << "\n";
  }
  file.commit();
}

/// values[t] = ln(close(t+1) / close(t)); length is one less than the series.
inline ReturnSeries log_returns(const CandleSeries& series) {
  if (series.size() < 2)
    throw insufficient_data_error("log returns need at least 2 candles, got " +
                                  format_int(std::int64_t(series.size())));
  ReturnSeries out;
  out.market_id = series.market_id;
  out.timestamps.reserve(series.size() - 1);
  out.values.reserve(series.size() - 1);
  for (std::size_t t = 0; t + 1 < series.size(); ++t) {
    const double c0 = series.candles[t].close;
    const double c1 = series.candles[t + 1].close;
    if (!(c0 > 0.0 && c1 > 0.0))
      throw domain_error("non-positive close in market " + series.market_id);
    out.timestamps.push_back(series.candles[t].timestamp);
    out.values.push_back(std::log(c1 / c0));
  }
  return out;
}

inline constexpr const char* kReturnsHeader = "timestamp,log_return";

inline void write_returns_csv(const ReturnSeries& series, const std::filesystem::path& path,
                              const FileMeta* meta = nullptr) {
  AtomicFile file(path);
  auto& os = file.stream();
  if (meta) write_meta(os, *meta);
  os << kReturnsHeader << "\n";
  for (std::size_t i = 0; i < series.size(); ++i)
    os << format_int(series.timestamps[i]) << ',' << format_double(series.values[i]) << "\n";
  file.commit();
}

inline ReturnSeries read_returns_csv(const std::filesystem::path& path, std::string market_id,
                                     std::string_view expected_hash = {}) {
  const TextFile file = read_text_file(path);
  check_meta(file.meta, kReturnsSchema, expected_hash, path);
  if (file.lines.empty() || file.lines.front() != kReturnsHeader)
    throw parse_error(path.string() + ": expected header '" + kReturnsHeader + "'");
  ReturnSeries out;
  out.market_id = std::move(market_id);
  for (std::size_t i = 1; i < file.lines.size(); ++i) {
    const auto fields = split(file.lines[i], ',');
    if (fields.size() != 2) throw parse_error(path.string() + ": bad returns row");
    out.timestamps.push_back(parse_int(fields[0], path.string()));
    const double v = parse_double(fields[1], path.string());
    if (!std::isfinite(v)) throw validation_error(path.string() + ": non-finite return");
    out.values.push_back(v);
  }
  return out;
}

}  // namespace regimecast

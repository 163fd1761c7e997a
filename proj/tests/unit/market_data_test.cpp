#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "regimecast/market_data.hpp"

using namespace regimecast;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "regimecast_tests";
  fs::create_directories(dir);
  return dir / name;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream os(path, std::ios::trunc);
  os << content;
}

CandleSeries series_from_closes(const std::vector<double>& closes) {
  std::vector<Candle> rows;
  std::int64_t ts = 1'700'000'000'000;
  for (double c : closes) {
    rows.push_back(Candle{ts, c, c, c, c, 1.0});
    ts += 60'000;
  }
  return finalize_series("TEST", std::move(rows));
}

}  // namespace

TEST_CASE("parse_candles_csv maps fields directly") {
  const auto path = temp_file("single.csv");
  write_file(path, "timestamp,open,high,low,close,volume\n1700000000000,100,101,99,100.5,12.3\n");
  const CandleSeries s = parse_candles_csv(path, "BTC");
  REQUIRE(s.size() == 1);
  CHECK(s.market_id == "BTC");
  CHECK(s.candles[0].timestamp == 1'700'000'000'000);
  CHECK(s.candles[0].close == 100.5);
  CHECK(s.candles[0].volume == 12.3);
}

TEST_CASE("parse_candles_csv rejects duplicates, bad OHLC and junk") {
  const auto path = temp_file("bad.csv");

  write_file(path,
             "timestamp,open,high,low,close,volume\n"
             "1700000000000,100,101,99,100.5,1\n"
             "1700000000000,100,101,99,100.5,1\n");
  CHECK_THROWS_AS(parse_candles_csv(path, "BTC"), validation_error);

  write_file(path,
             "timestamp,open,high,low,close,volume\n"
             "1700000000000,100,101,102,100,1\n");
  CHECK_THROWS_WITH(parse_candles_csv(path, "BTC"),
                    Catch::Matchers::ContainsSubstring("1700000000000"));

  write_file(path,
             "timestamp,open,high,low,close,volume\n"
             "1700000000000,100,101,99,oops,1\n");
  CHECK_THROWS_AS(parse_candles_csv(path, "BTC"), parse_error);
  try {
    parse_candles_csv(path, "BTC");
  } catch (const parse_error& e) {
    CHECK_THAT(e.what(), Catch::Matchers::ContainsSubstring(":2"));  // line number
  }
}

TEST_CASE("parse sorts rows by timestamp before validating") {
  const auto path = temp_file("unsorted.csv");
  write_file(path,
             "timestamp,open,high,low,close,volume\n"
             "1700000060000,101,102,100,101,1\n"
             "1700000000000,100,101,99,100,1\n");
  const CandleSeries s = parse_candles_csv(path, "BTC");
  REQUIRE(s.size() == 2);
  CHECK(s.candles[0].timestamp < s.candles[1].timestamp);
}

TEST_CASE("gap policy") {
  const std::string csv =
      "timestamp,open,high,low,close,volume\n"
      "1700000000000,100,101,99,100,1\n"
      "1700000180000,101,102,100,101,1\n";  // two minutes missing
  const auto path = temp_file("gap.csv");
  write_file(path, csv);

  CHECK_THROWS_AS(parse_candles_csv(path, "BTC"), validation_error);

  const CandleSeries filled = parse_candles_csv(path, "BTC", GapPolicy::forward_fill);
  REQUIRE(filled.size() == 4);
  CHECK(filled.gap_filled);
  CHECK(filled.candles[1].close == 100.0);
  CHECK(filled.candles[1].volume == 0.0);
  CHECK(filled.candles[2].open == 100.0);
}

TEST_CASE("log_returns basics") {
  CHECK_THROWS_AS(log_returns(series_from_closes({100.0})), insufficient_data_error);

  const ReturnSeries flat = log_returns(series_from_closes({100.0, 100.0, 100.0}));
  REQUIRE(flat.size() == 2);
  CHECK(flat.values[0] == 0.0);
  CHECK(flat.values[1] == 0.0);

  const ReturnSeries e = log_returns(series_from_closes({100.0, 100.0 * std::exp(1.0)}));
  CHECK_THAT(e.values[0], Catch::Matchers::WithinAbs(1.0, 1e-12));

  const ReturnSeries mixed = log_returns(series_from_closes({100.0, 110.0, 99.0}));
  CHECK_THAT(mixed.values[0], Catch::Matchers::WithinAbs(0.0953102, 1e-6));
  CHECK_THAT(mixed.values[1], Catch::Matchers::WithinAbs(-0.1053605, 1e-6));
}

TEST_CASE("log_returns round trip and telescoping sum") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> step(0.0, 0.01);
  std::vector<double> returns(400);
  for (auto& r : returns) r = step(rng);

  // rebuild closes from the returns, then recover them
  std::vector<double> closes{250.0};
  for (double r : returns) closes.push_back(closes.back() * std::exp(r));
  const ReturnSeries recovered = log_returns(series_from_closes(closes));
  REQUIRE(recovered.size() == returns.size());
  for (std::size_t i = 0; i < returns.size(); ++i)
    CHECK_THAT(recovered.values[i], Catch::Matchers::WithinAbs(returns[i], 1e-12));

  double sum = 0.0;
  for (double r : recovered.values) sum += r;
  const double expected = std::log(closes.back() / closes.front());
  CHECK_THAT(sum, Catch::Matchers::WithinRel(expected, 1e-9));
}

TEST_CASE("candles csv write/parse is idempotent") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> step(0.0, 0.004);
  std::vector<Candle> rows;
  std::int64_t ts = 1'700'000'000'000;
  double close = 3.1415e-6;  // meme-coin scale
  for (int i = 0; i < 300; ++i) {
    const double open = close;
    close *= std::exp(step(rng));
    const double high = std::max(open, close) * 1.0001;
    const double low = std::min(open, close) * 0.9999;
    rows.push_back(Candle{ts, open, high, low, close, std::abs(step(rng)) * 1e7});
    ts += 60'000;
  }
  const CandleSeries original = finalize_series("PEPE", std::move(rows));

  const auto path = temp_file("roundtrip.csv");
  write_candles_csv(original, path);
  const CandleSeries reparsed = parse_candles_csv(path, "PEPE");
  REQUIRE(reparsed.size() == original.size());
  for (std::size_t i = 0; i < original.size(); ++i) {
    CHECK(reparsed.candles[i].timestamp == original.candles[i].timestamp);
    CHECK(reparsed.candles[i].open == original.candles[i].open);
    CHECK(reparsed.candles[i].high == original.candles[i].high);
    CHECK(reparsed.candles[i].low == original.candles[i].low);
    CHECK(reparsed.candles[i].close == original.candles[i].close);
    CHECK(reparsed.candles[i].volume == original.candles[i].volume);
  }

  // writing the reparsed series again produces identical bytes
  const auto path2 = temp_file("roundtrip2.csv");
  write_candles_csv(reparsed, path2);
  std::ifstream a(path), b(path2);
  const std::string sa((std::istreambuf_iterator<char>(a)), std::istreambuf_iterator<char>());
  const std::string sb((std::istreambuf_iterator<char>(b)), std::istreambuf_iterator<char>());
  CHECK(sa == sb);
}

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>

#include "regimecast/labeling.hpp"

using namespace regimecast;

namespace {

ReturnSeries returns_of(std::vector<double> values) {
  ReturnSeries out;
  out.market_id = "TEST";
  out.values = std::move(values);
  out.timestamps.resize(out.values.size());
  std::int64_t ts = 0;
  for (auto& t : out.timestamps) t = (ts += 60'000);
  return out;
}

}  // namespace

TEST_CASE("compute_thresholds") {
  SECTION("degenerate constant returns") {
    const ThresholdPair t = compute_thresholds(returns_of({0.0, 0.0, 0.0}), 0.04);
    CHECK(t.lower == 0.0);
    CHECK(t.upper == 0.0);
  }
  SECTION("symmetric returns give mirrored thresholds by construction") {
    const ThresholdPair t = compute_thresholds(returns_of({-0.02, -0.01, 0.0, 0.01, 0.02}), 0.25);
    CHECK(t.upper == -t.lower);
  }
  SECTION("quantile rule at q = 0.25 lands on the second order statistic") {
    const ThresholdPair t =
        compute_thresholds(returns_of({-0.05, -0.03, -0.01, 0.01, 0.02}), 0.25);
    CHECK(t.lower == -0.03);
    CHECK(t.upper == 0.03);
    CHECK_FALSE(t.clamped);
  }
  SECTION("positive quantile is clamped to zero and flagged") {
    const ThresholdPair t = compute_thresholds(returns_of({0.01, 0.02, 0.03, 0.04}), 0.25);
    CHECK(t.lower == 0.0);
    CHECK(t.upper == 0.0);
    CHECK(t.clamped);
  }
  SECTION("input validation") {
    CHECK_THROWS_AS(compute_thresholds(returns_of({}), 0.04), insufficient_data_error);
    CHECK_THROWS_AS(compute_thresholds(returns_of({0.1}), 0.6), domain_error);
  }
}

TEST_CASE("label_series rules") {
  const ThresholdPair t{-0.005, 0.005, 0.04, false};
  const DecisionSeries d =
      label_series(returns_of({-0.01, 0.0, 0.005, -0.005, 0.0051, -0.0051}), t);
  CHECK(d.decisions[0] == Decision::sell);  // below lower
  CHECK(d.decisions[1] == Decision::hold);  // interior
  CHECK(d.decisions[2] == Decision::hold);  // exactly upper
  CHECK(d.decisions[3] == Decision::hold);  // exactly lower
  CHECK(d.decisions[4] == Decision::buy);   // above upper
  CHECK(d.decisions[5] == Decision::sell);
}

TEST_CASE("labeling coverage converges to q on symmetric data") {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> dist(0.0, 0.01);
  std::vector<double> values(100'000);
  for (auto& v : values) v = dist(rng);
  const ReturnSeries r = returns_of(values);
  const ThresholdPair t = compute_thresholds(r, 0.04);
  const DecisionSeries d = label_series(r, t);

  double sell = 0.0;
  double buy = 0.0;
  for (Decision dec : d.decisions) {
    sell += dec == Decision::sell;
    buy += dec == Decision::buy;
  }
  sell /= d.size();
  buy /= d.size();
  CHECK_THAT(sell, Catch::Matchers::WithinAbs(0.04, 0.01));
  CHECK_THAT(buy, Catch::Matchers::WithinAbs(0.04, 0.01));
}

TEST_CASE("larger q never shrinks the sell count") {
  std::mt19937_64 rng(19);
  std::normal_distribution<double> dist(0.0005, 0.01);  // mild drift
  std::vector<double> values(5'000);
  for (auto& v : values) v = dist(rng);
  const ReturnSeries r = returns_of(values);

  std::size_t prev_sells = 0;
  for (double q : {0.01, 0.05, 0.10, 0.20, 0.30, 0.45}) {
    const DecisionSeries d = label_series(r, compute_thresholds(r, q));
    const std::size_t sells = std::count(d.decisions.begin(), d.decisions.end(), Decision::sell);
    CHECK(sells >= prev_sells);
    prev_sells = sells;
  }
}

TEST_CASE("thresholds ignore input order") {
  std::mt19937_64 rng(23);
  std::normal_distribution<double> dist(0.0, 0.01);
  std::vector<double> values(999);
  for (auto& v : values) v = dist(rng);
  const ThresholdPair a = compute_thresholds(returns_of(values), 0.04);
  std::shuffle(values.begin(), values.end(), rng);
  const ThresholdPair b = compute_thresholds(returns_of(values), 0.04);
  CHECK(a.lower == b.lower);
  CHECK(a.upper == b.upper);
}

TEST_CASE("decision csv round trip uses the literal class names") {
  const ThresholdPair t{-0.005, 0.005, 0.04, false};
  const DecisionSeries d = label_series(returns_of({-0.01, 0.0, 0.02}), t);
  const auto path = std::filesystem::temp_directory_path() / "regimecast_tests" / "decisions.csv";
  std::filesystem::create_directories(path.parent_path());
  write_decisions_csv(d, path);

  std::ifstream is(path);
  std::string all((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  CHECK_THAT(all, Catch::Matchers::ContainsSubstring("Sell"));
  CHECK_THAT(all, Catch::Matchers::ContainsSubstring("Hold"));
  CHECK_THAT(all, Catch::Matchers::ContainsSubstring("Buy"));

  const DecisionSeries back = read_decisions_csv(path, "TEST");
  REQUIRE(back.size() == d.size());
  for (std::size_t i = 0; i < d.size(); ++i) CHECK(back.decisions[i] == d.decisions[i]);
}

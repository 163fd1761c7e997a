#pragma once

#include <cstdint>
#include <vector>

#include "regimecast/error.hpp"
#include "regimecast/model.hpp"
#include "regimecast/rng.hpp"

namespace regimecast {

/// The naive benchmark: i.i.d. uniform draws over {Buy, Sell, Hold} from a
/// seeded generator, blind to every feature.
inline std::vector<Decision> random_policy_predict(std::size_t n, std::uint64_t seed) {
  if (n < 1) throw domain_error("random policy needs at least one prediction");
  std::mt19937_64 rng(seed);
  std::vector<Decision> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    out.push_back(static_cast<Decision>(uniform_index(rng, 3)));
  return out;
}

class RandomPolicyModel final : public Model {
 public:
  explicit RandomPolicyModel(std::uint64_t seed) : seed_(seed) {}

  std::string_view algorithm() const override { return "random_policy"; }
  std::uint64_t seed() const { return seed_; }

  Decision predict(std::span<const double>) const override {
    return random_policy_predict(1, seed_).front();
  }

  std::vector<Decision> predict_series(
      const std::vector<std::vector<double>>& rows) const override {
    return random_policy_predict(rows.size(), seed_);
  }

  ordered_json to_json() const override {
    ordered_json j;
    j["algorithm"] = "random_policy";
    j["hyperparameters"] = ordered_json::object();
    j["seed"] = seed_;
    j["state"] = ordered_json::object();
    return j;
  }

  static std::unique_ptr<RandomPolicyModel> from_json(const ordered_json& j) {
    return std::make_unique<RandomPolicyModel>(j.at("seed").get<std::uint64_t>());
  }

 private:
  std::uint64_t seed_;
};

}  // namespace regimecast

#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "regimecast/metrics.hpp"
#include "regimecast/random_policy.hpp"
#include "regimecast/rng.hpp"
#include "regimecast/stats.hpp"

namespace regimecast {

struct MetricBand {
  double mean = 0.0;
  double p2_5 = 0.0;
  double p97_5 = 0.0;
};

/// Monte Carlo envelope of the random policy: n_draws seeded prediction
/// series scored with both metrics, summarised by mean and the empirical
/// 2.5/97.5 percentiles (same interpolation rule as the labeling quantile).
struct BaselineBands {
  int n_draws = 10'000;
  std::uint64_t seed = 0;
  MetricBand mean_acc;
  MetricBand apc;
};

namespace detail {

inline MetricBand band_of(std::vector<double>& samples) {
  MetricBand band;
  band.mean = mean(samples);
  std::sort(samples.begin(), samples.end());
  band.p2_5 = quantile_sorted(samples, 0.025);
  band.p97_5 = quantile_sorted(samples, 0.975);
  return band;
}

}  // namespace detail

inline BaselineBands baseline_bands(std::span<const Decision> truth,
                                    std::span<const double> returns, int n_draws = 10'000,
                                    std::uint64_t seed = 0) {
  if (truth.size() != returns.size())
    throw domain_error("baseline: truth and returns lengths differ");
  if (n_draws < 1) throw domain_error("baseline needs at least one draw");

  BaselineBands out;
  out.n_draws = n_draws;
  out.seed = seed;
  std::vector<double> acc_samples(n_draws);
  std::vector<double> apc_samples(n_draws);
  for (int i = 0; i < n_draws; ++i) {
    const std::vector<Decision> pred =
        random_policy_predict(truth.size(), derive_seed(seed, static_cast<std::uint64_t>(i)));
    const Metrics m = score(truth, pred, returns);
    acc_samples[i] = m.mean_acc;
    apc_samples[i] = m.apc;
  }
  out.mean_acc = detail::band_of(acc_samples);
  out.apc = detail::band_of(apc_samples);
  return out;
}

}  // namespace regimecast

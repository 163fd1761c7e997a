#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <thread>
#include <vector>

#include "regimecast/error.hpp"
#include "regimecast/model.hpp"
#include "regimecast/rng.hpp"

namespace regimecast {

struct RfConfig {
  int n_trees = 300;
  int min_leaf = 1;
  int max_features = 0;  // 0 -> ceil(sqrt(d))
  int threads = 1;
};

namespace detail {

struct TreeNode {
  std::int32_t feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  std::int32_t left = -1;
  std::int32_t right = -1;
  Decision label = Decision::hold;
};

inline double gini(const std::array<std::int64_t, 3>& counts, std::int64_t total) {
  double g = 1.0;
  for (std::int64_t c : counts) {
    const double p = static_cast<double>(c) / static_cast<double>(total);
    g -= p * p;
  }
  return g;
}

inline Decision majority(const std::array<std::int64_t, 3>& counts) {
  int best = 0;
  for (int c = 1; c < 3; ++c)
    if (counts[c] > counts[best]) best = c;
  return static_cast<Decision>(best);
}

/// Grows one CART tree on a bootstrap sample: Gini splits over
/// ceil(sqrt(d)) candidate features, expanded until pure or no valid
/// split remains. All tie-breaks are first-seen, so a fixed RNG stream
/// reproduces the tree bit for bit.
class TreeBuilder {
 public:
  TreeBuilder(const std::vector<std::vector<double>>& x, const std::vector<Decision>& y,
              int min_leaf, int mtry, std::mt19937_64& rng)
      : x_(x), y_(y), min_leaf_(min_leaf), mtry_(mtry), rng_(rng) {}

  std::vector<TreeNode> build(std::vector<std::size_t> sample) {
    nodes_.clear();
    grow(std::move(sample));
    return std::move(nodes_);
  }

 private:
  std::int32_t grow(std::vector<std::size_t> idx) {
    std::array<std::int64_t, 3> counts{0, 0, 0};
    for (std::size_t i : idx) counts[static_cast<int>(y_[i])]++;
    const std::int64_t total = static_cast<std::int64_t>(idx.size());

    const bool pure = counts[0] == total || counts[1] == total || counts[2] == total;
    if (pure || total <= min_leaf_) return make_leaf(majority(counts));

    const std::size_t d = x_.front().size();
    std::vector<std::size_t> features(d);
    std::iota(features.begin(), features.end(), 0);
    for (int j = 0; j < mtry_ && static_cast<std::size_t>(j) < d; ++j) {
      const std::size_t pick = j + uniform_index(rng_, d - j);
      std::swap(features[j], features[pick]);
    }

    double best_impurity = std::numeric_limits<double>::infinity();
    std::size_t best_feature = 0;
    double best_threshold = 0.0;
    std::vector<std::pair<double, Decision>> column(idx.size());
    for (int j = 0; j < mtry_ && static_cast<std::size_t>(j) < d; ++j) {
      const std::size_t f = features[j];
      for (std::size_t i = 0; i < idx.size(); ++i)
        column[i] = {x_[idx[i]][f], y_[idx[i]]};
      std::sort(column.begin(), column.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
      std::array<std::int64_t, 3> left{0, 0, 0};
      for (std::size_t i = 1; i < column.size(); ++i) {
        left[static_cast<int>(column[i - 1].second)]++;
        if (column[i].first == column[i - 1].first) continue;
        std::array<std::int64_t, 3> right{counts[0] - left[0], counts[1] - left[1],
                                          counts[2] - left[2]};
        const std::int64_t nl = static_cast<std::int64_t>(i);
        const std::int64_t nr = total - nl;
        const double impurity =
            (static_cast<double>(nl) * gini(left, nl) + static_cast<double>(nr) * gini(right, nr)) /
            static_cast<double>(total);
        if (impurity < best_impurity) {
          best_impurity = impurity;
          best_feature = f;
          best_threshold = column[i - 1].first + 0.5 * (column[i].first - column[i - 1].first);
        }
      }
    }
    if (!std::isfinite(best_impurity)) return make_leaf(majority(counts));  // no usable split

    std::vector<std::size_t> left_idx;
    std::vector<std::size_t> right_idx;
    for (std::size_t i : idx)
      (x_[i][best_feature] < best_threshold ? left_idx : right_idx).push_back(i);
    idx.clear();
    idx.shrink_to_fit();

    const std::int32_t node = static_cast<std::int32_t>(nodes_.size());
    nodes_.push_back(TreeNode{static_cast<std::int32_t>(best_feature), best_threshold, -1, -1,
                              Decision::hold});
    const std::int32_t left_child = grow(std::move(left_idx));
    const std::int32_t right_child = grow(std::move(right_idx));
    nodes_[node].left = left_child;
    nodes_[node].right = right_child;
    return node;
  }

  std::int32_t make_leaf(Decision label) {
    nodes_.push_back(TreeNode{-1, 0.0, -1, -1, label});
    return static_cast<std::int32_t>(nodes_.size() - 1);
  }

  const std::vector<std::vector<double>>& x_;
  const std::vector<Decision>& y_;
  int min_leaf_;
  int mtry_;
  std::mt19937_64& rng_;
  std::vector<TreeNode> nodes_;
};

}  // namespace detail

/// Bootstrap-aggregated CART ensemble. Vote ties fall to the class most
/// frequent in the training data (then the lowest decision index).
class ForestModel final : public Model {
 public:
  ForestModel(std::vector<std::vector<detail::TreeNode>> trees,
              std::array<std::int64_t, 3> class_counts, RfConfig cfg, std::uint64_t seed)
      : trees_(std::move(trees)), class_counts_(class_counts), cfg_(cfg), seed_(seed) {}

  std::string_view algorithm() const override { return "random_forest"; }
  std::size_t tree_count() const { return trees_.size(); }

  Decision predict(std::span<const double> x) const override {
    std::array<std::int64_t, 3> votes{0, 0, 0};
    for (const auto& tree : trees_) {
      std::int32_t node = 0;
      while (tree[node].feature >= 0) {
        if (static_cast<std::size_t>(tree[node].feature) >= x.size())
          throw domain_error("forest query dimension mismatch");
        node = x[tree[node].feature] < tree[node].threshold ? tree[node].left : tree[node].right;
      }
      votes[static_cast<int>(tree[node].label)]++;
    }
    std::int64_t best = -1;
    int winner = 0;
    for (int c = 0; c < 3; ++c) {
      if (votes[c] > best ||
          (votes[c] == best && class_counts_[c] > class_counts_[winner])) {
        best = votes[c];
        winner = c;
      }
    }
    return static_cast<Decision>(winner);
  }

  ordered_json to_json() const override {
    ordered_json j;
    j["algorithm"] = "random_forest";
    j["hyperparameters"] = {{"n_trees", cfg_.n_trees},
                            {"min_leaf", cfg_.min_leaf},
                            {"max_features", cfg_.max_features}};
    j["seed"] = seed_;
    j["class_counts"] = class_counts_;
    ordered_json trees = ordered_json::array();
    for (const auto& tree : trees_) {
      ordered_json nodes = ordered_json::array();
      for (const auto& n : tree)
        nodes.push_back(ordered_json::array(
            {n.feature, n.threshold, n.left, n.right, std::string(to_string(n.label))}));
      trees.push_back(std::move(nodes));
    }
    j["state"] = {{"trees", std::move(trees)}};
    return j;
  }

  static std::unique_ptr<ForestModel> from_json(const ordered_json& j) {
    std::vector<std::vector<detail::TreeNode>> trees;
    for (const auto& tree : j.at("state").at("trees")) {
      std::vector<detail::TreeNode> nodes;
      for (const auto& n : tree) {
        detail::TreeNode node;
        node.feature = n.at(0).get<std::int32_t>();
        node.threshold = n.at(1).get<double>();
        node.left = n.at(2).get<std::int32_t>();
        node.right = n.at(3).get<std::int32_t>();
        node.label = decision_from_string(n.at(4).get<std::string>());
        nodes.push_back(node);
      }
      trees.push_back(std::move(nodes));
    }
    RfConfig cfg;
    cfg.n_trees = j.at("hyperparameters").at("n_trees").get<int>();
    cfg.min_leaf = j.at("hyperparameters").at("min_leaf").get<int>();
    cfg.max_features = j.at("hyperparameters").at("max_features").get<int>();
    std::array<std::int64_t, 3> counts = j.at("class_counts").get<std::array<std::int64_t, 3>>();
    return std::make_unique<ForestModel>(std::move(trees), counts, cfg,
                                         j.at("seed").get<std::uint64_t>());
  }
};

/// Each tree draws its own RNG stream from (seed, tree index), so serial
/// and multi-threaded training produce identical forests.
inline std::unique_ptr<ForestModel> rf_train(const std::vector<std::vector<double>>& x,
                                             const std::vector<Decision>& y, std::uint64_t seed,
                                             RfConfig cfg = {}) {
  if (x.empty()) throw model_error("random forest needs a non-empty training set");
  if (x.size() != y.size()) throw domain_error("forest features/labels mismatch");
  const std::size_t n = x.size();
  const std::size_t d = x.front().size();
  const int mtry = cfg.max_features > 0
                       ? cfg.max_features
                       : static_cast<int>(std::ceil(std::sqrt(static_cast<double>(d))));

  std::array<std::int64_t, 3> class_counts{0, 0, 0};
  for (Decision label : y) class_counts[static_cast<int>(label)]++;

  std::vector<std::vector<detail::TreeNode>> trees(cfg.n_trees);
  const auto build_range = [&](int begin, int end) {
    for (int t = begin; t < end; ++t) {
      std::mt19937_64 rng(derive_seed(seed, static_cast<std::uint64_t>(t)));
      std::vector<std::size_t> sample(n);
      for (std::size_t i = 0; i < n; ++i) sample[i] = uniform_index(rng, n);
      detail::TreeBuilder builder(x, y, cfg.min_leaf, mtry, rng);
      trees[t] = builder.build(std::move(sample));
    }
  };

  const int threads = std::max(1, cfg.threads);
  if (threads == 1 || cfg.n_trees < 2) {
    build_range(0, cfg.n_trees);
  } else {
    std::vector<std::thread> pool;
    const int chunk = (cfg.n_trees + threads - 1) / threads;
    for (int w = 0; w < threads; ++w) {
      const int begin = w * chunk;
      const int end = std::min(cfg.n_trees, begin + chunk);
      if (begin >= end) break;
      pool.emplace_back(build_range, begin, end);
    }
    for (auto& th : pool) th.join();
  }
  return std::make_unique<ForestModel>(std::move(trees), class_counts, cfg, seed);
}

}  // namespace regimecast

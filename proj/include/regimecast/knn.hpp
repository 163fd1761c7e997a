#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <numeric>
#include <vector>

#include "regimecast/error.hpp"
#include "regimecast/model.hpp"

namespace regimecast {

/// K-nearest-neighbours by exhaustive Euclidean scan with fully
/// deterministic tie handling: equal distances prefer the earlier training
/// index, and a tied vote goes to the tied class seen nearest.
class KnnModel final : public Model {
 public:
  KnnModel(std::vector<std::vector<double>> exemplars, std::vector<Decision> labels, int k)
      : exemplars_(std::move(exemplars)), labels_(std::move(labels)), k_(k) {
    if (exemplars_.empty()) throw model_error("knn needs a non-empty training set");
    if (exemplars_.size() != labels_.size()) throw domain_error("knn features/labels mismatch");
    if (k_ < 1 || static_cast<std::size_t>(k_) > exemplars_.size())
      throw model_error("knn k=" + format_int(k_) + " exceeds training size " +
                        format_int(std::int64_t(exemplars_.size())));
  }

  std::string_view algorithm() const override { return "knn"; }
  int k() const { return k_; }
  const std::vector<std::vector<double>>& exemplars() const { return exemplars_; }
  const std::vector<Decision>& labels() const { return labels_; }

  Decision predict(std::span<const double> x) const override {
    const std::size_t n = exemplars_.size();
    std::vector<std::pair<double, std::size_t>> order(n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto& e = exemplars_[i];
      if (e.size() != x.size()) throw domain_error("knn query dimension mismatch");
      double d2 = 0.0;
      for (std::size_t j = 0; j < e.size(); ++j) {
        const double diff = e[j] - x[j];
        d2 += diff * diff;
      }
      order[i] = {d2, i};
    }
    std::sort(order.begin(), order.end());

    std::array<int, 3> votes{0, 0, 0};
    for (int i = 0; i < k_; ++i) votes[static_cast<int>(labels_[order[i].second])]++;
    const int best = *std::max_element(votes.begin(), votes.end());
    int tied = 0;
    for (int v : votes) tied += (v == best);
    if (tied == 1) {
      for (int c = 0; c < 3; ++c)
        if (votes[c] == best) return static_cast<Decision>(c);
    }
    // tie: the tied class whose representative sits nearest wins
    for (int i = 0; i < k_; ++i) {
      const Decision d = labels_[order[i].second];
      if (votes[static_cast<int>(d)] == best) return d;
    }
    return Decision::hold;  // unreachable
  }

  ordered_json to_json() const override {
    ordered_json j;
    j["algorithm"] = "knn";
    j["hyperparameters"] = {{"k", k_}, {"metric", "euclidean"}};
    ordered_json rows = ordered_json::array();
    ordered_json labels = ordered_json::array();
    for (const auto& e : exemplars_) rows.push_back(e);
    for (Decision d : labels_) labels.push_back(std::string(to_string(d)));
    j["state"] = {{"exemplars", std::move(rows)}, {"labels", std::move(labels)}};
    return j;
  }

  static std::unique_ptr<KnnModel> from_json(const ordered_json& j) {
    std::vector<std::vector<double>> exemplars;
    for (const auto& row : j.at("state").at("exemplars"))
      exemplars.push_back(row.get<std::vector<double>>());
    std::vector<Decision> labels;
    for (const auto& s : j.at("state").at("labels"))
      labels.push_back(decision_from_string(s.get<std::string>()));
    return std::make_unique<KnnModel>(std::move(exemplars), std::move(labels),
                                      j.at("hyperparameters").at("k").get<int>());
  }
};

inline std::unique_ptr<KnnModel> knn_train(std::vector<std::vector<double>> train_features,
                                           std::vector<Decision> train_labels, int k = 5) {
  return std::make_unique<KnnModel>(std::move(train_features), std::move(train_labels), k);
}

}  // namespace regimecast

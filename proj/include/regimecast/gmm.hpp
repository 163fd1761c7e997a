#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "regimecast/error.hpp"
#include "regimecast/io.hpp"
#include "regimecast/rng.hpp"

namespace regimecast {

struct GmmConfig {
  double tol = 1e-6;      // absolute log-likelihood change per iteration
  int max_iter = 500;
  int n_init = 10;        // restarts, best final log-likelihood wins
  double ridge = 1e-6;    // added to every covariance each M-step
};

/// A fitted full-covariance Gaussian mixture.
struct GmmFit {
  int k = 0;
  Eigen::VectorXd weights;                  // K, sums to 1
  Eigen::MatrixXd means;                    // K x d
  std::vector<Eigen::MatrixXd> covariances; // K matrices, d x d, PD after ridge
  Eigen::MatrixXd responsibilities;         // n x K, rows sum to 1
  double log_likelihood = 0.0;
  double bic = 0.0;
  int n_iter = 0;
  bool converged = false;
  std::vector<double> loglik_path;          // one value per E-step
  std::uint64_t seed = 0;
};

/// Free parameter count: K-1 weights, K*d means, K*d(d+1)/2 covariances.
inline double bic_score(double log_likelihood, int k, int d, std::size_t n) {
  const double p = (k - 1) + k * d + k * d * (d + 1) / 2.0;
  return -2.0 * log_likelihood + p * std::log(static_cast<double>(n));
}

inline double bic(const GmmFit& fit, std::size_t n) {
  return bic_score(fit.log_likelihood, fit.k, static_cast<int>(fit.means.cols()), n);
}

namespace detail {

constexpr double kLogTwoPi = 1.8378770664093453;

struct ComponentCache {
  Eigen::LLT<Eigen::MatrixXd> llt;
  double log_det = 0.0;
  double log_weight = 0.0;
};

/// Cholesky with escalating ridge; a component that stays indefinite even
/// after heavy regularisation aborts the restart.
inline ComponentCache prepare_component(const Eigen::MatrixXd& cov, double weight, double ridge) {
  ComponentCache cache;
  Eigen::MatrixXd work = cov;
  double bump = ridge;
  for (int attempt = 0; attempt < 10; ++attempt) {
    cache.llt.compute(work);
    if (cache.llt.info() == Eigen::Success) {
      cache.log_det = 2.0 * cache.llt.matrixLLT().diagonal().array().log().sum();
      cache.log_weight = weight > 0.0 ? std::log(weight) : -std::numeric_limits<double>::infinity();
      return cache;
    }
    work += bump * Eigen::MatrixXd::Identity(cov.rows(), cov.cols());
    bump *= 10.0;
  }
  throw fit_failure_error("covariance not positive definite after regularisation");
}

/// Log-density of each row under one component.
inline Eigen::VectorXd component_log_pdf(const Eigen::MatrixXd& data, const Eigen::VectorXd& mean,
                                         const ComponentCache& cache) {
  const Eigen::MatrixXd centered = data.rowwise() - mean.transpose();
  const Eigen::MatrixXd solved =
      cache.llt.matrixL().solve(centered.transpose());  // d x n triangular solve
  const Eigen::VectorXd sq = solved.colwise().squaredNorm();
  const double d = static_cast<double>(data.cols());
  return (-0.5 * (d * kLogTwoPi + cache.log_det + sq.array())).matrix();
}

struct EStepResult {
  Eigen::MatrixXd responsibilities;
  double log_likelihood = 0.0;
};

inline EStepResult e_step(const Eigen::MatrixXd& data, const Eigen::VectorXd& weights,
                          const Eigen::MatrixXd& means,
                          const std::vector<Eigen::MatrixXd>& covariances, double ridge) {
  const Eigen::Index n = data.rows();
  const Eigen::Index k = weights.size();
  Eigen::MatrixXd log_prob(n, k);
  for (Eigen::Index j = 0; j < k; ++j) {
    const ComponentCache cache = prepare_component(covariances[j], weights[j], ridge);
    log_prob.col(j) = component_log_pdf(data, means.row(j), cache).array() + cache.log_weight;
  }

  EStepResult out;
  out.responsibilities.resize(n, k);
  double total = 0.0;
  double comp = 0.0;  // Kahan correction
  for (Eigen::Index i = 0; i < n; ++i) {
    const double row_max = log_prob.row(i).maxCoeff();
    const Eigen::ArrayXd shifted = (log_prob.row(i).array() - row_max).exp();
    const double sum = shifted.sum();
    out.responsibilities.row(i) = (shifted / sum).matrix();
    const double lse = row_max + std::log(sum);
    const double y = lse - comp;
    const double t = total + y;
    comp = (t - total) - y;
    total = t;
  }
  out.log_likelihood = total;
  return out;
}

/// Squared-distance weighted seeding of the K initial means.
inline Eigen::MatrixXd kmeanspp_init(const Eigen::MatrixXd& data, int k, std::mt19937_64& rng) {
  const Eigen::Index n = data.rows();
  Eigen::MatrixXd means(k, data.cols());
  means.row(0) = data.row(uniform_index(rng, static_cast<std::size_t>(n)));
  Eigen::VectorXd dist2 =
      (data.rowwise() - means.row(0)).rowwise().squaredNorm();
  for (int j = 1; j < k; ++j) {
    const double total = dist2.sum();
    Eigen::Index pick = 0;
    if (total > 0.0) {
      double r = uniform_unit(rng) * total;
      for (Eigen::Index i = 0; i < n; ++i) {
        r -= dist2[i];
        if (r <= 0.0) {
          pick = i;
          break;
        }
        pick = i;
      }
    } else {
      pick = static_cast<Eigen::Index>(uniform_index(rng, static_cast<std::size_t>(n)));
    }
    means.row(j) = data.row(pick);
    dist2 = dist2.cwiseMin((data.rowwise() - means.row(j)).rowwise().squaredNorm());
  }
  return means;
}

inline Eigen::MatrixXd sample_covariance(const Eigen::MatrixXd& data) {
  const Eigen::RowVectorXd mu = data.colwise().mean();
  const Eigen::MatrixXd centered = data.rowwise() - mu;
  return centered.transpose() * centered / static_cast<double>(data.rows());
}

inline GmmFit em_single(const Eigen::MatrixXd& data, int k, std::uint64_t restart_seed,
                        const GmmConfig& config) {
  const Eigen::Index n = data.rows();
  std::mt19937_64 rng(restart_seed);

  GmmFit fit;
  fit.k = k;
  fit.weights = Eigen::VectorXd::Constant(k, 1.0 / k);
  fit.means = kmeanspp_init(data, k, rng);
  const Eigen::MatrixXd base_cov =
      sample_covariance(data) + config.ridge * Eigen::MatrixXd::Identity(data.cols(), data.cols());
  fit.covariances.assign(k, base_cov);

  double prev = -std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < config.max_iter; ++iter) {
    EStepResult e = e_step(data, fit.weights, fit.means, fit.covariances, config.ridge);
    fit.responsibilities = std::move(e.responsibilities);
    fit.log_likelihood = e.log_likelihood;
    fit.loglik_path.push_back(e.log_likelihood);
    fit.n_iter = iter + 1;
    if (iter > 0 && std::abs(e.log_likelihood - prev) < config.tol) {
      fit.converged = true;
      break;
    }
    prev = e.log_likelihood;

    // M-step
    const Eigen::VectorXd nk = fit.responsibilities.colwise().sum();
    for (Eigen::Index j = 0; j < k; ++j) {
      if (!(nk[j] > 1e-10))
        throw fit_failure_error("component " + format_int(j) + " collapsed to zero weight");
      fit.weights[j] = nk[j] / static_cast<double>(n);
      fit.means.row(j) = fit.responsibilities.col(j).transpose() * data / nk[j];
      const Eigen::MatrixXd centered = data.rowwise() - fit.means.row(j);
      const Eigen::MatrixXd weighted =
          centered.array().colwise() * fit.responsibilities.col(j).array();
      Eigen::MatrixXd cov = weighted.matrix().transpose() * centered / nk[j];
      cov = 0.5 * (cov + cov.transpose());  // keep exactly symmetric
      cov += config.ridge * Eigen::MatrixXd::Identity(data.cols(), data.cols());
      fit.covariances[j] = std::move(cov);
    }
  }
  return fit;
}

}  // namespace detail

/// EM with k-means++ seeding and n_init restarts; the restart with the
/// best final log-likelihood wins (ties to the earliest restart).
inline GmmFit em_fit(const Eigen::MatrixXd& data, int k, std::uint64_t seed,
                     const GmmConfig& config = {}) {
  const Eigen::Index n = data.rows();
  const Eigen::Index d = data.cols();
  if (k < 1) throw domain_error("mixture needs at least one component");
  if (!data.allFinite()) throw domain_error("mixture input contains non-finite values");
  if (n < static_cast<Eigen::Index>(k) * (d + 1))
    throw insufficient_data_error("need at least K*(d+1) = " + format_int(k * (d + 1)) +
                                  " observations for K=" + format_int(k) + ", got " +
                                  format_int(std::int64_t(n)));

  GmmFit best;
  bool have_best = false;
  std::string last_failure;
  for (int restart = 0; restart < config.n_init; ++restart) {
    try {
      GmmFit fit =
          detail::em_single(data, k, derive_seed(seed, static_cast<std::uint64_t>(restart)), config);
      if (!have_best || fit.log_likelihood > best.log_likelihood) {
        best = std::move(fit);
        have_best = true;
      }
    } catch (const fit_failure_error& e) {
      last_failure = e.what();
    }
  }
  if (!have_best)
    throw fit_failure_error("all " + format_int(config.n_init) +
                            " restarts failed for K=" + format_int(k) + ": " + last_failure);
  best.seed = seed;
  best.bic = bic_score(best.log_likelihood, k, static_cast<int>(d), static_cast<std::size_t>(n));
  return best;
}

struct BicPoint {
  int k = 0;
  double bic = 0.0;
  double log_likelihood = 0.0;
  int n_iter = 0;
  bool converged = false;
  std::string error;  // empty when the fit succeeded
};

struct SelectKResult {
  GmmFit best;
  std::vector<BicPoint> curve;
};

/// Fits every K in [k_lo, k_hi] and keeps the lowest BIC. Sizes that fail
/// are recorded on the curve; only a fully failed range is an error.
inline SelectKResult select_k(const Eigen::MatrixXd& data, int k_lo, int k_hi, std::uint64_t seed,
                              const GmmConfig& config = {}) {
  if (k_lo < 1 || k_hi < k_lo) throw domain_error("invalid component range");
  SelectKResult out;
  bool have_best = false;
  for (int k = k_lo; k <= k_hi; ++k) {
    BicPoint point;
    point.k = k;
    try {
      GmmFit fit = em_fit(data, k, derive_seed(seed, static_cast<std::uint64_t>(k)), config);
      point.bic = fit.bic;
      point.log_likelihood = fit.log_likelihood;
      point.n_iter = fit.n_iter;
      point.converged = fit.converged;
      if (!have_best || fit.bic < out.best.bic) {
        out.best = std::move(fit);
        have_best = true;
      }
    } catch (const error& e) {
      point.error = e.what();
    }
    out.curve.push_back(std::move(point));
  }
  if (!have_best) {
    std::string diag;
    for (const BicPoint& p : out.curve)
      diag += "\n  K=" + format_int(p.k) + ": " + (p.error.empty() ? "?" : p.error);
    throw fit_failure_error("no mixture size could be fitted:" + diag);
  }
  return out;
}

/// Hard assignment by largest responsibility (ties to the lowest component
/// index); per-cluster member lists keep temporal order.
struct ClusterAssignment {
  std::vector<int> labels;
  std::vector<std::vector<int>> members;
};

inline ClusterAssignment assign_and_filter(const GmmFit& fit, const Eigen::MatrixXd& data) {
  if (data.cols() != fit.means.cols())
    throw domain_error("observation dimension " + format_int(std::int64_t(data.cols())) +
                       " does not match mixture dimension " +
                       format_int(std::int64_t(fit.means.cols())));
  const detail::EStepResult e =
      detail::e_step(data, fit.weights, fit.means, fit.covariances, 0.0);
  ClusterAssignment out;
  out.labels.resize(data.rows());
  out.members.assign(fit.k, {});
  for (Eigen::Index i = 0; i < data.rows(); ++i) {
    int arg = 0;
    for (int j = 1; j < fit.k; ++j)
      if (e.responsibilities(i, j) > e.responsibilities(i, arg)) arg = j;
    out.labels[i] = arg;
    out.members[arg].push_back(static_cast<int>(i));
  }
  return out;
}

/// Mean standardised feature per cluster, the per-market clustering table.
struct ClusterProfile {
  Eigen::MatrixXd means;  // K x d
  std::vector<int> counts;
};

inline ClusterProfile cluster_profile(const GmmFit& fit, const Eigen::MatrixXd& standardized) {
  const ClusterAssignment assignment = assign_and_filter(fit, standardized);
  ClusterProfile out;
  out.means = Eigen::MatrixXd::Zero(fit.k, standardized.cols());
  out.counts.assign(fit.k, 0);
  for (Eigen::Index i = 0; i < standardized.rows(); ++i) {
    out.means.row(assignment.labels[i]) += standardized.row(i);
    out.counts[assignment.labels[i]]++;
  }
  for (int j = 0; j < fit.k; ++j)
    if (out.counts[j] > 0) out.means.row(j) /= static_cast<double>(out.counts[j]);
  return out;
}

inline Eigen::MatrixXd to_matrix(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw insufficient_data_error("no rows to convert");
  Eigen::MatrixXd out(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.front().size()) throw domain_error("ragged feature rows");
    for (std::size_t j = 0; j < rows[i].size(); ++j) out(i, j) = rows[i][j];
  }
  return out;
}

}  // namespace regimecast

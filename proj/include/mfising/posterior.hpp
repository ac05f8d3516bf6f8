#pragma once

#include "mfising/dataset.hpp"
#include "mfising/model.hpp"
#include "mfising/types.hpp"

#include <limits>
#include <memory>
#include <utility>

namespace mfising {

// Independent zero-mean normal priors on (K, J, h). The default reads N(0, 2)
// as variance 2. An infinite sd switches that component's prior off.
struct PriorSpec {
  Vec3 sd = Vec3::Constant(std::sqrt(2.0));

  [[nodiscard]] static PriorSpec flat() {
    return {Vec3::Constant(std::numeric_limits<double>::infinity())};
  }
  void validate() const;
  [[nodiscard]] double log_density(const Theta& theta) const;
  [[nodiscard]] Vec3 gradient(const Theta& theta) const;
};

// Anything the samplers can target: a log density on R^3 with gradient and a
// positive semi-definite metric.
class Target {
 public:
  virtual ~Target() = default;
  [[nodiscard]] virtual double log_density(const Vec3& x) const = 0;
  [[nodiscard]] virtual Vec3 gradient(const Vec3& x) const = 0;
  [[nodiscard]] virtual Mat3 metric(const Vec3& x, double chi) const = 0;
  // Log density and the gradient used for dynamics, from a single evaluation
  // where the target can share work between them.
  [[nodiscard]] virtual std::pair<double, Vec3> value_and_gradient(const Vec3& x) const {
    return {log_density(x), gradient(x)};
  }
};

enum class GradientSource { kPosterior, kLikelihood };

struct PosteriorEval {
  double log_post = 0.0;
  double log_lik = 0.0;
  Vec3 grad = Vec3::Zero();
  Mat3 metric = Mat3::Zero();
  ModelSummary summary;
};

/// Multiplies every off-diagonal entry by (1 - chi).
[[nodiscard]] Mat3 shrink_off_diagonal(const Mat3& g, double chi);

// Log-posterior of theta given one dataset. Keeps only what the likelihood
// depends on: N, M, (S1, S2, S3), sum log A_N(m_i) and the log-count table.
// Immutable and safe to share between threads.
class Posterior final : public Target {
 public:
  Posterior(const Dataset& data, PriorSpec prior = {},
            GradientSource source = GradientSource::kPosterior);

  [[nodiscard]] double log_likelihood(const Theta& theta) const;
  [[nodiscard]] double log_posterior(const Theta& theta) const;
  [[nodiscard]] Vec3 grad_log_posterior(const Theta& theta) const;
  [[nodiscard]] Vec3 grad_log_likelihood(const Theta& theta) const;
  /// M N^2 Cov(m^3/3, m^2/2, m) with off-diagonals scaled by (1 - chi).
  [[nodiscard]] Mat3 metric_G(const Theta& theta, double chi) const;
  [[nodiscard]] PosteriorEval evaluate(const Theta& theta, double chi = 0.0) const;

  [[nodiscard]] double log_density(const Vec3& x) const override { return log_posterior(Theta::from(x)); }
  [[nodiscard]] Vec3 gradient(const Vec3& x) const override;
  [[nodiscard]] Mat3 metric(const Vec3& x, double chi) const override { return metric_G(Theta::from(x), chi); }
  [[nodiscard]] std::pair<double, Vec3> value_and_gradient(const Vec3& x) const override;

  [[nodiscard]] int n() const { return n_; }
  [[nodiscard]] double m_count() const { return m_; }
  [[nodiscard]] const PriorSpec& prior() const { return prior_; }
  [[nodiscard]] const LogCountTable& table() const { return *table_; }

 private:
  [[nodiscard]] double loglik_from(const Theta& theta, const ModelSummary& s) const;
  [[nodiscard]] Vec3 grad_from(const ModelSummary& s) const;
  [[nodiscard]] Mat3 metric_from(const ModelSummary& s, double chi) const;

  int n_;
  double m_;
  SuffStats suff_;
  double sum_log_count_;
  PriorSpec prior_;
  GradientSource source_;
  std::shared_ptr<const LogCountTable> table_;
};

[[nodiscard]] double log_likelihood(const Theta& theta, const Dataset& data);
[[nodiscard]] double log_posterior(const Theta& theta, const Dataset& data, const PriorSpec& prior);
[[nodiscard]] Vec3 grad_log_posterior(const Theta& theta, const Dataset& data, const PriorSpec& prior);
[[nodiscard]] Mat3 metric_G(const Theta& theta, const Dataset& data, double chi);

}  // namespace mfising

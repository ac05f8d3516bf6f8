#include "mfising/posterior.hpp"

#include <fmt/format.h>

namespace mfising {

void PriorSpec::validate() const {
  for (int c = 0; c < 3; ++c)
    if (!(sd[c] > 0.0)) throw DomainError(fmt::format("prior sd must be positive, got {}", sd[c]));
}

double PriorSpec::log_density(const Theta& theta) const {
  const Vec3 x = theta.vec();
  double out = 0.0;
  for (int c = 0; c < 3; ++c)
    if (std::isfinite(sd[c])) out -= x[c] * x[c] / (2.0 * sd[c] * sd[c]);
  return out;
}

Vec3 PriorSpec::gradient(const Theta& theta) const {
  const Vec3 x = theta.vec();
  Vec3 g = Vec3::Zero();
  for (int c = 0; c < 3; ++c)
    if (std::isfinite(sd[c])) g[c] = -x[c] / (sd[c] * sd[c]);
  return g;
}

Mat3 shrink_off_diagonal(const Mat3& g, double chi) {
  if (!(chi >= 0.0 && chi <= 1.0)) throw DomainError(fmt::format("chi must lie in [0, 1], got {}", chi));
  Mat3 out = g * (1.0 - chi);
  out.diagonal() = g.diagonal();
  return out;
}

Posterior::Posterior(const Dataset& data, PriorSpec prior, GradientSource source)
    : n_(data.n()),
      m_(static_cast<double>(data.m_count())),
      suff_(data.suffstats()),
      sum_log_count_(data.sum_log_count()),
      prior_(prior),
      source_(source),
      table_(std::make_shared<const LogCountTable>(data.n())) {
  prior_.validate();
}

double Posterior::loglik_from(const Theta& theta, const ModelSummary& s) const {
  const double energy = theta.K / 3.0 * suff_.s3 + theta.J / 2.0 * suff_.s2 + theta.h * suff_.s1;
  return static_cast<double>(n_) * energy - m_ * s.log_z + sum_log_count_;
}

Vec3 Posterior::grad_from(const ModelSummary& s) const {
  const Vec3 observed(suff_.s3 / 3.0, suff_.s2 / 2.0, suff_.s1);
  return static_cast<double>(n_) * (observed - m_ * s.stat_mean);
}

Mat3 Posterior::metric_from(const ModelSummary& s, double chi) const {
  const double dn = static_cast<double>(n_);
  return shrink_off_diagonal(m_ * dn * dn * s.stat_cov, chi);
}

double Posterior::log_likelihood(const Theta& theta) const {
  return loglik_from(theta, model_summary(theta, *table_));
}

double Posterior::log_posterior(const Theta& theta) const {
  return log_likelihood(theta) + prior_.log_density(theta);
}

Vec3 Posterior::grad_log_likelihood(const Theta& theta) const {
  return grad_from(model_summary(theta, *table_));
}

Vec3 Posterior::grad_log_posterior(const Theta& theta) const {
  return grad_log_likelihood(theta) + prior_.gradient(theta);
}

Mat3 Posterior::metric_G(const Theta& theta, double chi) const {
  return metric_from(model_summary(theta, *table_), chi);
}

PosteriorEval Posterior::evaluate(const Theta& theta, double chi) const {
  PosteriorEval e;
  e.summary = model_summary(theta, *table_);
  e.log_lik = loglik_from(theta, e.summary);
  e.log_post = e.log_lik + prior_.log_density(theta);
  e.grad = grad_from(e.summary) + prior_.gradient(theta);
  e.metric = metric_from(e.summary, chi);
  return e;
}

Vec3 Posterior::gradient(const Vec3& x) const {
  const Theta theta = Theta::from(x);
  return source_ == GradientSource::kPosterior ? grad_log_posterior(theta) : grad_log_likelihood(theta);
}

std::pair<double, Vec3> Posterior::value_and_gradient(const Vec3& x) const {
  const Theta theta = Theta::from(x);
  const auto s = model_summary(theta, *table_);
  const double lp = loglik_from(theta, s) + prior_.log_density(theta);
  Vec3 g = grad_from(s);
  if (source_ == GradientSource::kPosterior) g += prior_.gradient(theta);
  return {lp, g};
}

double log_likelihood(const Theta& theta, const Dataset& data) {
  return Posterior(data, PriorSpec::flat()).log_likelihood(theta);
}

double log_posterior(const Theta& theta, const Dataset& data, const PriorSpec& prior) {
  return Posterior(data, prior).log_posterior(theta);
}

Vec3 grad_log_posterior(const Theta& theta, const Dataset& data, const PriorSpec& prior) {
  return Posterior(data, prior).grad_log_posterior(theta);
}

Mat3 metric_G(const Theta& theta, const Dataset& data, double chi) {
  return Posterior(data, PriorSpec::flat()).metric_G(theta, chi);
}

}  // namespace mfising

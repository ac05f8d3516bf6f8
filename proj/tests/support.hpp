#pragma once

#include "mfising/posterior.hpp"
#include "mfising/samplers.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <vector>

namespace mfising::testing {

// Standard error of the mean of a correlated series by non-overlapping batch means.
inline double batch_means_se(const std::vector<double>& x, std::size_t batches = 50) {
  const std::size_t b = x.size() / batches;
  std::vector<double> means(batches, 0.0);
  for (std::size_t i = 0; i < batches; ++i) {
    for (std::size_t j = 0; j < b; ++j) means[i] += x[i * b + j];
    means[i] /= static_cast<double>(b);
  }
  double mu = 0.0;
  for (double m : means) mu += m;
  mu /= static_cast<double>(batches);
  double var = 0.0;
  for (double m : means) var += (m - mu) * (m - mu);
  var /= static_cast<double>(batches - 1);
  return std::sqrt(var / static_cast<double>(batches));
}

inline std::vector<double> component(const Chain& chain, int c, std::size_t from = 0) {
  std::vector<double> out;
  for (std::size_t i = from; i < chain.size(); ++i) out.push_back(chain.draws[i][c]);
  return out;
}

struct MomentCheck {
  double mean = 0.0;
  double var = 0.0;
  double se = 0.0;
};

inline MomentCheck moments(const std::vector<double>& x) {
  MomentCheck m;
  for (double v : x) m.mean += v;
  m.mean /= static_cast<double>(x.size());
  for (double v : x) m.var += (v - m.mean) * (v - m.mean);
  m.var /= static_cast<double>(x.size() - 1);
  m.se = batch_means_se(x);
  return m;
}

// Maximum-likelihood estimate by Fisher scoring, halving the step until the
// likelihood improves.
inline Vec3 fisher_scoring_mle(const Posterior& post, Vec3 x, int iters = 100) {
  double ll = post.log_likelihood(Theta::from(x));
  for (int it = 0; it < iters; ++it) {
    const Vec3 g = post.grad_log_likelihood(Theta::from(x));
    const Mat3 G = post.metric_G(Theta::from(x), 0.0) + 1e-9 * Mat3::Identity();
    const Vec3 step = G.ldlt().solve(g);
    double t = 1.0;
    while (t > 1e-8 && !(post.log_likelihood(Theta::from(x + t * step)) >= ll)) t *= 0.5;
    if (t <= 1e-8) break;
    x += t * step;
    ll = post.log_likelihood(Theta::from(x));
  }
  return x;
}

// Target assembled from callables, for edge cases.
class FunctionTarget final : public Target {
 public:
  std::function<double(const Vec3&)> f;
  std::function<Vec3(const Vec3&)> g = [](const Vec3&) { return Vec3::Zero(); };
  std::function<Mat3(const Vec3&)> metric_fn = [](const Vec3&) { return Mat3::Identity(); };

  [[nodiscard]] double log_density(const Vec3& x) const override { return f(x); }
  [[nodiscard]] Vec3 gradient(const Vec3& x) const override { return g(x); }
  [[nodiscard]] Mat3 metric(const Vec3& x, double) const override { return metric_fn(x); }
};

}  // namespace mfising::testing

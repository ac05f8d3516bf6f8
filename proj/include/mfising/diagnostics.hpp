#pragma once

#include "mfising/dataset.hpp"
#include "mfising/posterior.hpp"
#include "mfising/samplers.hpp"
#include "mfising/types.hpp"

#include <array>
#include <string>
#include <vector>

namespace mfising {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  [[nodiscard]] double width() const { return hi - lo; }
  [[nodiscard]] bool contains(double x) const { return lo <= x && x <= hi; }
};

struct DiagnosticsReport {
  Vec3 psrf = Vec3::Constant(std::numeric_limits<double>::quiet_NaN());  // NaN with one chain
  Vec3 post_mean = Vec3::Zero();
  std::array<Interval, 3> ci{};
  double level = 0.95;
  std::size_t n_chains = 0;
  std::size_t draws_used = 0;
};

/// Classic potential scale reduction factor per parameter over draws after
/// `burn_in`. Floored at 1; +inf where the within-chain variance is zero.
/// With `split`, each chain is halved first (split-R).
[[nodiscard]] Vec3 gelman_rubin(const std::vector<Chain>& chains, std::size_t burn_in, bool split = false);

/// Type-7 (linear interpolation) quantile of an ascending sample.
[[nodiscard]] double quantile_sorted(const std::vector<double>& sorted, double p);

/// Pools post-burn-in draws of all chains: means, equal-tailed intervals and PSRF.
[[nodiscard]] DiagnosticsReport summarize(const std::vector<Chain>& chains, std::size_t burn_in,
                                          double level = 0.95);

/// E[m] under the model, the "b" trace of the nonidentifiable case.
[[nodiscard]] double theoretical_mean(const Theta& theta, int N);

/// Total variation distance between the two model pmfs on the size-N spectrum.
[[nodiscard]] double density_compare(const Theta& a, const Theta& b, int N);

struct ReplicationRecord {
  std::size_t index = 0;
  bool ok = false;
  std::string error;
  Theta start;
  std::array<Interval, 3> ci{};
  std::array<bool, 3> hit{};
};

struct CoverageResult {
  Theta theta_true;
  std::size_t n_replications = 0;
  Vec3 coverage = Vec3::Zero();    // hits / n_replications; failed replications count as misses
  Vec3 mean_width = Vec3::Zero();  // over successful replications
  double level = 0.95;
  std::vector<ReplicationRecord> replications;
  [[nodiscard]] std::size_t failures() const;
};

struct CoverageOptions {
  int N = 300;
  int M = 1000;
  std::size_t n_reps = 20;
  double level = 0.95;
  SamplerConfig sampler;  // kernel is forced to HYBRID
  PriorSpec prior;
  GridSpec grid;
  RngSpec rng;
  unsigned workers = 0;
};

/// For each replication r: simulate with stream r, start at the grid argmax,
/// run one hybrid chain and check the post-burn-in intervals against the truth.
[[nodiscard]] CoverageResult coverage_study(const Theta& theta_true, const CoverageOptions& opts);

}  // namespace mfising

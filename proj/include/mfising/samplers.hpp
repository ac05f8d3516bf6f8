#pragma once

// MCMC kernels for the mean-field posterior: adaptive random-walk Metropolis
// (AMH), Hamiltonian Monte Carlo with a metric-derived mass frozen per
// trajectory (RMAHMC), and the hybrid that alternates the two. All kernels
// act on a generic Target so they can be checked on known densities.

#include "mfising/posterior.hpp"
#include "mfising/rng.hpp"
#include "mfising/types.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mfising {

enum class Kernel : std::uint8_t { kAmh, kRmahmc, kHybrid };

[[nodiscard]] std::string_view kernel_name(Kernel k);  // "AMH", "RMAHMC", "HYBRID"
[[nodiscard]] Kernel parse_kernel(std::string_view name);  // case-insensitive

struct ChiSchedule {
  double burn_in = 1e-4;
  double after = 0.0;
};

struct SamplerConfig {
  int n_iter = 5000;
  int burn_in = 2500;
  int leapfrog_steps = 10;
  double step_size = 0.01;
  bool adapt_step_size = false;  // dual averaging during burn-in
  double target_accept = 0.7;
  ChiSchedule chi;
  double amh_scale = 1.0 / 3.0;
  int amh_warmup = 100;
  double amh_fallback_sd = 0.05;
  double jitter = 1e-10;
  RngSpec rng;
  Kernel kernel = Kernel::kHybrid;

  void validate() const;
  [[nodiscard]] double chi_at(int iter) const { return iter <= burn_in ? chi.burn_in : chi.after; }
};

struct Chain {
  std::vector<Vec3> draws;          // row i is the state after iteration i + 1
  std::vector<Kernel> kernel_tag;   // kAmh or kRmahmc
  std::vector<std::uint8_t> accepted;
  std::vector<double> log_post;

  [[nodiscard]] std::size_t size() const { return draws.size(); }
  [[nodiscard]] std::size_t proposals(Kernel k) const;
  [[nodiscard]] std::size_t acceptances(Kernel k) const;
  [[nodiscard]] double acceptance_rate(Kernel k) const;
};

// Running mean and covariance of every draw pushed so far (Welford).
class RunningCovariance {
 public:
  void push(const Vec3& x);
  [[nodiscard]] std::size_t count() const { return n_; }
  [[nodiscard]] Vec3 mean() const { return mean_; }
  /// Unbiased sample covariance; zero for fewer than two draws.
  [[nodiscard]] Mat3 covariance() const;

 private:
  std::size_t n_ = 0;
  Vec3 mean_ = Vec3::Zero();
  Mat3 m2_ = Mat3::Zero();
};

// AMH adaptation state: every draw counts towards the warmup, and the
// proposal covariance is estimated from the draws after it.
struct AmhHistory {
  std::size_t seen = 0;
  RunningCovariance post_warmup;
  void push(const Vec3& x, int warmup);
};

struct StepResult {
  Vec3 theta;
  double log_post = 0.0;
  bool accepted = false;
  double accept_prob = 0.0;
};

/// Random-walk Metropolis from `state`. Uses amh_scale * C + jitter I with C
/// the covariance of the post-warmup draws, or a diagonal fallback while
/// fewer than amh_warmup draws have been seen or C is numerically singular.
[[nodiscard]] StepResult amh_step(const Target& target, const Vec3& state, double state_log_post,
                                  const AmhHistory& history, const SamplerConfig& cfg, Engine& engine);

/// True when the AMH proposal would fall back to the diagonal proposal.
[[nodiscard]] bool amh_uses_fallback(const AmhHistory& history, const SamplerConfig& cfg);

struct Trajectory {
  Vec3 theta;
  Vec3 momentum;
  bool finite = true;
};

/// L leapfrog steps with fixed mass matrix: half momentum kick, full position
/// drift by eps mass^-1 p, half kick.
[[nodiscard]] Trajectory leapfrog(const Target& target, const Mat3& mass, const Vec3& theta,
                                  const Vec3& momentum, double eps, int steps);

/// metric(state, chi) + jitter * trace * I. Throws NumericalError if it is
/// not positive definite.
[[nodiscard]] Mat3 frozen_mass(const Target& target, const Vec3& state, double chi, double jitter);

/// One HMC transition with momentum p ~ N(0, mass) and the mass frozen at the
/// trajectory start. Energy H = -log pi(theta) + p' mass^-1 p / 2.
[[nodiscard]] StepResult rmahmc_step(const Target& target, const Vec3& state, double state_log_post,
                                     double step_size, int steps, double chi, double jitter,
                                     Engine& engine);

[[nodiscard]] Chain run_chain(const Target& target, const SamplerConfig& cfg, const Vec3& theta0);
[[nodiscard]] Chain run_chain(const Dataset& data, const PriorSpec& prior, const SamplerConfig& cfg,
                              const Theta& theta0);

/// Rng for member chain `index` of a multi-chain run seeded by `base`.
[[nodiscard]] RngSpec chain_rng(const RngSpec& base, std::size_t index);

/// Runs one chain per start, chain c seeded by chain_rng(cfg.rng, c).
/// Chains are independent and may run on `workers` threads (0 = default).
[[nodiscard]] std::vector<Chain> run_chains(const Target& target, const SamplerConfig& cfg,
                                            const std::vector<Vec3>& starts, unsigned workers = 0);

struct GridSpec {
  Vec3 lo = Vec3::Constant(-2.0);
  Vec3 hi = Vec3::Constant(2.0);
  double step = 0.2;
};

struct GridPoint {
  Theta theta;
  double log_post = 0.0;
};

/// Log-posterior over the lattice {lo + k step}, best first. Ties go to the
/// smaller |theta|, then lexicographic (K, J, h).
[[nodiscard]] std::vector<GridPoint> grid_search(const Posterior& posterior, const GridSpec& grid);

[[nodiscard]] Theta grid_init(const Dataset& data, const PriorSpec& prior, const GridSpec& grid = {});

/// The `count` best distinct lattice points, best first.
[[nodiscard]] std::vector<Theta> grid_starts(const Posterior& posterior, const GridSpec& grid,
                                             std::size_t count);

// Standard normal on R^3 with identity metric; used to check kernels against
// a density with known moments.
class StandardGaussianTarget final : public Target {
 public:
  [[nodiscard]] double log_density(const Vec3& x) const override { return -0.5 * x.squaredNorm(); }
  [[nodiscard]] Vec3 gradient(const Vec3& x) const override { return -x; }
  [[nodiscard]] Mat3 metric(const Vec3&, double) const override { return Mat3::Identity(); }
};

}  // namespace mfising

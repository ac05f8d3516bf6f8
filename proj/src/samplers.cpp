#include "mfising/samplers.hpp"

#include "mfising/parallel.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fmt/format.h>
#include <tuple>

namespace mfising {

unsigned default_workers() {
  if (const char* env = std::getenv("MFISING_WORKERS")) {
    const int n = std::atoi(env);
    if (n > 0) return static_cast<unsigned>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::string_view kernel_name(Kernel k) {
  switch (k) {
    case Kernel::kAmh: return "AMH";
    case Kernel::kRmahmc: return "RMAHMC";
    case Kernel::kHybrid: return "HYBRID";
  }
  return "?";
}

Kernel parse_kernel(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "amh") return Kernel::kAmh;
  if (lower == "rmahmc") return Kernel::kRmahmc;
  if (lower == "hybrid") return Kernel::kHybrid;
  throw DomainError(fmt::format("unknown kernel '{}' (expected amh, rmahmc or hybrid)", name));
}

void SamplerConfig::validate() const {
  if (n_iter < 1) throw DomainError("n_iter must be positive");
  if (burn_in < 0 || burn_in >= n_iter) throw DomainError("burn_in must lie in [0, n_iter)");
  if (leapfrog_steps < 1) throw DomainError("leapfrog_steps must be positive");
  if (!(step_size > 0.0)) throw DomainError("step_size must be positive");
  if (!(amh_scale > 0.0)) throw DomainError("amh_scale must be positive");
  if (amh_warmup < 1) throw DomainError("amh_warmup must be positive");
  if (!(amh_fallback_sd > 0.0)) throw DomainError("amh_fallback_sd must be positive");
  if (!(jitter > 0.0)) throw DomainError("jitter must be positive");
  if (!(target_accept > 0.0 && target_accept < 1.0)) throw DomainError("target_accept must lie in (0, 1)");
  for (double c : {chi.burn_in, chi.after})
    if (!(c >= 0.0 && c <= 1.0)) throw DomainError("chi values must lie in [0, 1]");
}

std::size_t Chain::proposals(Kernel k) const {
  return static_cast<std::size_t>(std::count(kernel_tag.begin(), kernel_tag.end(), k));
}

std::size_t Chain::acceptances(Kernel k) const {
  std::size_t n = 0;
  for (std::size_t i = 0; i < kernel_tag.size(); ++i) n += (kernel_tag[i] == k && accepted[i]) ? 1 : 0;
  return n;
}

double Chain::acceptance_rate(Kernel k) const {
  const auto n = proposals(k);
  return n == 0 ? 0.0 : static_cast<double>(acceptances(k)) / static_cast<double>(n);
}

void RunningCovariance::push(const Vec3& x) {
  ++n_;
  const Vec3 delta = x - mean_;
  mean_ += delta / static_cast<double>(n_);
  m2_ += delta * (x - mean_).transpose();
}

Mat3 RunningCovariance::covariance() const {
  if (n_ < 2) return Mat3::Zero();
  const Mat3 c = m2_ / static_cast<double>(n_ - 1);
  return 0.5 * (c + c.transpose());
}

namespace {

Vec3 standard_normal3(Engine& engine) {
  std::normal_distribution<double> z;
  Vec3 out;
  for (int i = 0; i < 3; ++i) out[i] = z(engine);
  return out;
}

bool accept(double log_ratio, Engine& engine) {
  if (std::isnan(log_ratio)) return false;
  if (log_ratio >= 0.0) return true;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  return std::log(unif(engine)) < log_ratio;
}

bool covariance_singular(const Mat3& c) {
  const double tr = c.trace();
  if (!(tr > 0.0) || !c.allFinite()) return true;
  Eigen::SelfAdjointEigenSolver<Mat3> eig(c, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff() <= 1e-12 * tr;
}

}  // namespace

void AmhHistory::push(const Vec3& x, int warmup) {
  if (seen >= static_cast<std::size_t>(warmup)) post_warmup.push(x);
  ++seen;
}

bool amh_uses_fallback(const AmhHistory& history, const SamplerConfig& cfg) {
  return history.seen < static_cast<std::size_t>(cfg.amh_warmup) || history.post_warmup.count() < 2 ||
         covariance_singular(history.post_warmup.covariance());
}

StepResult amh_step(const Target& target, const Vec3& state, double state_log_post,
                    const AmhHistory& history, const SamplerConfig& cfg, Engine& engine) {
  Mat3 cov;
  if (amh_uses_fallback(history, cfg)) {
    cov = Mat3::Identity() * (cfg.amh_fallback_sd * cfg.amh_fallback_sd);
  } else {
    cov = cfg.amh_scale * history.post_warmup.covariance();
  }
  cov += cfg.jitter * Mat3::Identity();
  Eigen::LLT<Mat3> llt(cov);
  if (llt.info() != Eigen::Success) throw NumericalError("AMH proposal covariance is not positive definite");

  const Vec3 proposal = state + llt.matrixL() * standard_normal3(engine);
  const double lp = target.log_density(proposal);
  StepResult r{state, state_log_post, false, 0.0};
  if (!std::isfinite(lp)) return r;
  const double log_ratio = lp - state_log_post;
  r.accept_prob = log_ratio >= 0.0 ? 1.0 : std::exp(log_ratio);
  if (accept(log_ratio, engine)) r = {proposal, lp, true, r.accept_prob};
  return r;
}

Trajectory leapfrog(const Target& target, const Mat3& mass, const Vec3& theta, const Vec3& momentum,
                    double eps, int steps) {
  Eigen::LLT<Mat3> llt(mass);
  if (llt.info() != Eigen::Success) throw NumericalError("leapfrog mass matrix is not positive definite");
  Trajectory t{theta, momentum, true};
  Vec3 grad = target.gradient(t.theta);
  for (int l = 0; l < steps; ++l) {
    t.momentum += 0.5 * eps * grad;
    t.theta += eps * llt.solve(t.momentum);
    grad = target.gradient(t.theta);
    t.momentum += 0.5 * eps * grad;
    if (!t.theta.allFinite() || !t.momentum.allFinite()) {
      t.finite = false;
      break;
    }
  }
  return t;
}

Mat3 frozen_mass(const Target& target, const Vec3& state, double chi, double jitter) {
  Mat3 mass = target.metric(state, chi);
  const double tr = mass.trace();
  if (!(tr > 0.0) || !mass.allFinite())
    throw NumericalError(fmt::format("metric at {} has trace {}; cannot form a mass matrix "
                                     "(increase jitter or chi)",
                                     to_string(Theta::from(state)), tr));
  mass.diagonal().array() += jitter * tr;
  return mass;
}

StepResult rmahmc_step(const Target& target, const Vec3& state, double state_log_post, double step_size,
                       int steps, double chi, double jitter, Engine& engine) {
  const Mat3 mass = frozen_mass(target, state, chi, jitter);
  Eigen::LLT<Mat3> llt(mass);
  if (llt.info() != Eigen::Success)
    throw NumericalError(fmt::format("mass matrix at {} is not positive definite after jitter "
                                     "(increase jitter or chi)",
                                     to_string(Theta::from(state))));
  const Mat3 chol = llt.matrixL();
  const Vec3 p0 = chol * standard_normal3(engine);
  auto kinetic = [&](const Vec3& p) { return 0.5 * llt.matrixL().solve(p).squaredNorm(); };

  StepResult r{state, state_log_post, false, 0.0};
  const double h0 = -state_log_post + kinetic(p0);

  // Leapfrog with one density/gradient evaluation per step.
  Vec3 theta = state;
  Vec3 p = p0;
  auto [lp, grad] = target.value_and_gradient(theta);
  bool finite = true;
  for (int l = 0; l < steps && finite; ++l) {
    p += 0.5 * step_size * grad;
    theta += step_size * llt.solve(p);
    if (!theta.allFinite()) {
      finite = false;
      break;
    }
    std::tie(lp, grad) = target.value_and_gradient(theta);
    p += 0.5 * step_size * grad;
    finite = theta.allFinite() && p.allFinite() && std::isfinite(lp) && grad.allFinite();
  }
  if (!finite) return r;
  const double h1 = -lp + kinetic(p);
  if (!std::isfinite(h1)) return r;
  const double log_ratio = h0 - h1;
  r.accept_prob = log_ratio >= 0.0 ? 1.0 : std::exp(log_ratio);
  if (accept(log_ratio, engine)) r = {theta, lp, true, r.accept_prob};
  return r;
}

namespace {

// Nesterov dual averaging on log step size.
class StepSizeAdapter {
 public:
  StepSizeAdapter(double eps0, double target) : mu_(std::log(10.0 * eps0)), target_(target) {}

  double update(double accept_prob) {
    ++t_;
    const double t = static_cast<double>(t_);
    h_bar_ = (1.0 - 1.0 / (t + kT0)) * h_bar_ + (target_ - accept_prob) / (t + kT0);
    const double log_eps = mu_ - std::sqrt(t) / kGamma * h_bar_;
    const double w = std::pow(t, -kKappa);
    log_eps_bar_ = w * log_eps + (1.0 - w) * log_eps_bar_;
    return std::exp(log_eps);
  }
  [[nodiscard]] double final_step() const { return std::exp(log_eps_bar_); }

 private:
  static constexpr double kGamma = 0.05;
  static constexpr double kT0 = 10.0;
  static constexpr double kKappa = 0.75;
  double mu_;
  double target_;
  double h_bar_ = 0.0;
  double log_eps_bar_ = 0.0;
  int t_ = 0;
};

}  // namespace

Chain run_chain(const Target& target, const SamplerConfig& cfg, const Vec3& theta0) {
  cfg.validate();
  if (!theta0.allFinite()) throw DomainError("initial state must be finite");
  auto engine = make_engine(cfg.rng);

  Chain chain;
  const auto n = static_cast<std::size_t>(cfg.n_iter);
  chain.draws.reserve(n);
  chain.kernel_tag.reserve(n);
  chain.accepted.reserve(n);
  chain.log_post.reserve(n);

  Vec3 state = theta0;
  double lp = target.log_density(state);
  AmhHistory history;
  StepSizeAdapter adapter(cfg.step_size, cfg.target_accept);
  double eps = cfg.step_size;

  for (int i = 1; i <= cfg.n_iter; ++i) {
    Kernel k = cfg.kernel;
    if (k == Kernel::kHybrid) k = (i % 2 == 1) ? Kernel::kRmahmc : Kernel::kAmh;

    StepResult r;
    if (k == Kernel::kRmahmc) {
      r = rmahmc_step(target, state, lp, eps, cfg.leapfrog_steps, cfg.chi_at(i), cfg.jitter, engine);
      if (cfg.adapt_step_size) {
        if (i <= cfg.burn_in) eps = adapter.update(r.accept_prob);
        else if (i - 1 <= cfg.burn_in) eps = adapter.final_step();
      }
    } else {
      r = amh_step(target, state, lp, history, cfg, engine);
    }
    state = r.theta;
    lp = r.log_post;
    history.push(state, cfg.amh_warmup);

    chain.draws.push_back(state);
    chain.kernel_tag.push_back(k);
    chain.accepted.push_back(r.accepted ? 1 : 0);
    chain.log_post.push_back(lp);
  }
  return chain;
}

Chain run_chain(const Dataset& data, const PriorSpec& prior, const SamplerConfig& cfg, const Theta& theta0) {
  if (!theta0.finite()) throw DomainError("initial state must be finite");
  const Posterior posterior(data, prior);
  return run_chain(posterior, cfg, theta0.vec());
}

RngSpec chain_rng(const RngSpec& base, std::size_t index) {
  return base.with_salt(0x6368'6169'6e00'0000ULL + index);
}

std::vector<Chain> run_chains(const Target& target, const SamplerConfig& cfg, const std::vector<Vec3>& starts,
                              unsigned workers) {
  std::vector<Chain> chains(starts.size());
  parallel_for(starts.size(), workers, [&](std::size_t c) {
    SamplerConfig member = cfg;
    member.rng = chain_rng(cfg.rng, c);
    chains[c] = run_chain(target, member, starts[c]);
  });
  return chains;
}

namespace {

double snap(double x) { return std::round(x * 1e12) / 1e12; }

bool grid_better(const GridPoint& a, const GridPoint& b) {
  if (a.log_post != b.log_post) return a.log_post > b.log_post;
  const double na = a.theta.vec().squaredNorm();
  const double nb = b.theta.vec().squaredNorm();
  if (na != nb) return na < nb;
  return std::tie(a.theta.K, a.theta.J, a.theta.h) < std::tie(b.theta.K, b.theta.J, b.theta.h);
}

}  // namespace

std::vector<GridPoint> grid_search(const Posterior& posterior, const GridSpec& grid) {
  if (!(grid.step > 0.0)) throw DomainError("grid step must be positive");
  std::array<std::vector<double>, 3> axes;
  for (int c = 0; c < 3; ++c) {
    if (!(grid.lo[c] <= grid.hi[c])) throw DomainError("empty grid: lo must not exceed hi");
    const auto count = static_cast<int>(std::floor((grid.hi[c] - grid.lo[c]) / grid.step + 1e-9));
    for (int k = 0; k <= count; ++k) axes[static_cast<std::size_t>(c)].push_back(snap(grid.lo[c] + k * grid.step));
  }
  std::vector<GridPoint> points;
  points.reserve(axes[0].size() * axes[1].size() * axes[2].size());
  for (double K : axes[0])
    for (double J : axes[1])
      for (double h : axes[2]) {
        const Theta t{K, J, h};
        points.push_back({t, posterior.log_posterior(t)});
      }
  if (points.empty()) throw DomainError("empty grid");
  std::sort(points.begin(), points.end(), grid_better);
  return points;
}

Theta grid_init(const Dataset& data, const PriorSpec& prior, const GridSpec& grid) {
  return grid_search(Posterior(data, prior), grid).front().theta;
}

std::vector<Theta> grid_starts(const Posterior& posterior, const GridSpec& grid, std::size_t count) {
  const auto points = grid_search(posterior, grid);
  if (points.size() < count) throw DomainError("grid has fewer points than requested chain starts");
  std::vector<Theta> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(points[i].theta);
  return out;
}

}  // namespace mfising

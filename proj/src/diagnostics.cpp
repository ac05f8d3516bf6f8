#include "mfising/diagnostics.hpp"

#include "mfising/parallel.hpp"

#include <algorithm>
#include <fmt/format.h>
#include <limits>

namespace mfising {

namespace {

void require_chains(const std::vector<Chain>& chains, std::size_t burn_in, std::size_t min_chains) {
  if (chains.size() < min_chains)
    throw DomainError(fmt::format("need at least {} chain(s), got {}", min_chains, chains.size()));
  const std::size_t n = chains.front().size();
  for (const auto& c : chains)
    if (c.size() != n) throw DomainError("chains must have equal length");
  if (n <= burn_in + 1) throw DomainError("chains must hold more than burn_in + 1 draws");
}

}  // namespace

Vec3 gelman_rubin(const std::vector<Chain>& chains, std::size_t burn_in, bool split) {
  require_chains(chains, burn_in, 2);
  // Segments of post-burn-in draws: one per chain, or two halves per chain.
  struct Segment {
    const Chain* chain;
    std::size_t begin;
    std::size_t end;
  };
  std::vector<Segment> segs;
  const std::size_t total = chains.front().size();
  for (const auto& c : chains) {
    if (split) {
      const std::size_t half = (total - burn_in) / 2;
      segs.push_back({&c, burn_in, burn_in + half});
      segs.push_back({&c, total - half, total});
    } else {
      segs.push_back({&c, burn_in, total});
    }
  }
  const auto n = static_cast<double>(segs.front().end - segs.front().begin);
  const auto m = static_cast<double>(segs.size());
  if (n < 2.0) throw DomainError("split chains are too short for Gelman-Rubin");

  Vec3 out;
  for (int p = 0; p < 3; ++p) {
    std::vector<double> means;
    double w = 0.0;
    for (const auto& s : segs) {
      double mean = 0.0;
      for (std::size_t i = s.begin; i < s.end; ++i) mean += s.chain->draws[i][p];
      mean /= n;
      double var = 0.0;
      for (std::size_t i = s.begin; i < s.end; ++i) {
        const double d = s.chain->draws[i][p] - mean;
        var += d * d;
      }
      w += var / (n - 1.0);
      means.push_back(mean);
    }
    w /= m;
    double grand = 0.0;
    for (double x : means) grand += x;
    grand /= m;
    double b_over_n = 0.0;
    for (double x : means) b_over_n += (x - grand) * (x - grand);
    b_over_n /= (m - 1.0);
    if (!(w > 0.0)) {
      out[p] = std::numeric_limits<double>::infinity();
      continue;
    }
    const double v_hat = (n - 1.0) / n * w + b_over_n;
    out[p] = std::max(1.0, std::sqrt(v_hat / w));
  }
  return out;
}

double quantile_sorted(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) throw DomainError("quantile of an empty sample");
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("quantile level must lie in [0, 1]");
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

DiagnosticsReport summarize(const std::vector<Chain>& chains, std::size_t burn_in, double level) {
  if (!(level > 0.0 && level < 1.0)) throw DomainError("credible level must lie in (0, 1)");
  require_chains(chains, burn_in, 1);
  DiagnosticsReport r;
  r.level = level;
  r.n_chains = chains.size();
  for (int p = 0; p < 3; ++p) {
    std::vector<double> pooled;
    for (const auto& c : chains)
      for (std::size_t i = burn_in; i < c.size(); ++i) pooled.push_back(c.draws[i][p]);
    std::sort(pooled.begin(), pooled.end());
    // Sum in sorted order so the mean does not depend on chain or draw order.
    double sum = 0.0;
    for (double x : pooled) sum += x;
    r.post_mean[p] = sum / static_cast<double>(pooled.size());
    const double tail = 0.5 * (1.0 - level);
    r.ci[static_cast<std::size_t>(p)] = {quantile_sorted(pooled, tail), quantile_sorted(pooled, 1.0 - tail)};
    r.draws_used = pooled.size();
  }
  if (chains.size() >= 2) r.psrf = gelman_rubin(chains, burn_in);
  return r;
}

double theoretical_mean(const Theta& theta, int N) { return model_summary(theta, N).mean(); }

double density_compare(const Theta& a, const Theta& b, int N) {
  const LogCountTable table(N);
  const auto pa = model_summary(a, table).pmf;
  const auto pb = model_summary(b, table).pmf;
  double tv = 0.0;
  for (std::size_t k = 0; k < pa.size(); ++k) tv += std::abs(pa[k] - pb[k]);
  return 0.5 * tv;
}

std::size_t CoverageResult::failures() const {
  return static_cast<std::size_t>(
      std::count_if(replications.begin(), replications.end(), [](const auto& r) { return !r.ok; }));
}

CoverageResult coverage_study(const Theta& theta_true, const CoverageOptions& opts) {
  if (opts.n_reps < 1) throw DomainError("coverage study needs at least one replication");
  SamplerConfig cfg = opts.sampler;
  cfg.kernel = Kernel::kHybrid;
  cfg.validate();

  CoverageResult out;
  out.theta_true = theta_true;
  out.n_replications = opts.n_reps;
  out.level = opts.level;
  out.replications.resize(opts.n_reps);

  const Vec3 truth = theta_true.vec();
  parallel_for(opts.n_reps, opts.workers, [&](std::size_t r) {
    ReplicationRecord& rec = out.replications[r];
    rec.index = r;
    try {
      const auto data = sample_dataset(theta_true, opts.N, opts.M, opts.rng.with_stream(r));
      const Posterior posterior(data, opts.prior);
      rec.start = grid_search(posterior, opts.grid).front().theta;
      SamplerConfig member = cfg;
      member.rng = chain_rng(opts.rng.with_stream(r), 0);
      const std::vector<Chain> chains{run_chain(posterior, member, rec.start.vec())};
      const auto report = summarize(chains, static_cast<std::size_t>(cfg.burn_in), opts.level);
      rec.ci = report.ci;
      for (std::size_t p = 0; p < 3; ++p) rec.hit[p] = rec.ci[p].contains(truth[static_cast<int>(p)]);
      rec.ok = true;
    } catch (const std::exception& e) {
      rec.ok = false;
      rec.error = e.what();
    }
  });

  std::size_t ok = 0;
  for (const auto& rec : out.replications) {
    if (!rec.ok) continue;
    ++ok;
    for (int p = 0; p < 3; ++p) {
      out.coverage[p] += rec.hit[static_cast<std::size_t>(p)] ? 1.0 : 0.0;
      out.mean_width[p] += rec.ci[static_cast<std::size_t>(p)].width();
    }
  }
  out.coverage /= static_cast<double>(opts.n_reps);
  if (ok > 0) out.mean_width /= static_cast<double>(ok);
  return out;
}

}  // namespace mfising

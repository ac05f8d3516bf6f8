#include "mfising/diagnostics.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace mfising;

namespace {

Chain chain_of(const std::vector<Vec3>& draws) {
  Chain c;
  c.draws = draws;
  c.kernel_tag.assign(draws.size(), Kernel::kAmh);
  c.accepted.assign(draws.size(), 1);
  c.log_post.assign(draws.size(), 0.0);
  return c;
}

Chain scalar_chain(const std::vector<double>& xs) {
  std::vector<Vec3> d;
  for (double x : xs) d.emplace_back(x, 2 * x, -x);
  return chain_of(d);
}

Chain gaussian_chain(std::uint64_t seed, double shift, std::size_t n) {
  Engine e = make_engine({seed, 0});
  std::normal_distribution<double> z;
  std::vector<Vec3> d(n);
  for (auto& x : d) x = Vec3(z(e) + shift, z(e) + shift, z(e) + shift);
  return chain_of(d);
}

}  // namespace

TEST(GelmanRubin, HandComputedValue) {
  const auto r = gelman_rubin({scalar_chain({1, 2, 3}), scalar_chain({2, 3, 4})}, 0);
  for (int p = 0; p < 3; ++p) EXPECT_NEAR(r[p], std::sqrt(7.0 / 6.0), 1e-14);
}

TEST(GelmanRubin, IdenticalChainsFlooredAtOne) {
  const auto c = gaussian_chain(1, 0.0, 200);
  EXPECT_EQ(gelman_rubin({c, c, c}, 0), Vec3::Ones());
}

TEST(GelmanRubin, SeparatedChainsAreFlagged) {
  const auto r = gelman_rubin({gaussian_chain(1, 0.0, 2000), gaussian_chain(2, 20.0, 2000)}, 0);
  for (int p = 0; p < 3; ++p) EXPECT_GT(r[p], 10.0);
}

TEST(GelmanRubin, IidChainsNearOne) {
  std::vector<Chain> cs;
  for (std::uint64_t s = 0; s < 4; ++s) cs.push_back(gaussian_chain(10 + s, 0.0, 5000));
  const auto r = gelman_rubin(cs, 1000);
  for (int p = 0; p < 3; ++p) {
    EXPECT_GE(r[p], 1.0);
    EXPECT_LT(r[p], 1.01);
  }
  const auto s = gelman_rubin(cs, 1000, true);
  for (int p = 0; p < 3; ++p) EXPECT_LT(s[p], 1.01);
}

TEST(GelmanRubin, ZeroWithinVarianceIsInfinite) {
  const auto r = gelman_rubin({scalar_chain({1, 1, 1, 1}), scalar_chain({2, 2, 2, 2})}, 0);
  for (int p = 0; p < 3; ++p) EXPECT_TRUE(std::isinf(r[p]));
}

TEST(GelmanRubin, SplitCatchesDrift) {
  std::vector<double> up, down;
  for (int i = 0; i < 400; ++i) {
    up.push_back(i / 40.0 + std::sin(i));
    down.push_back(i / 40.0 + std::cos(i));
  }
  const auto plain = gelman_rubin({scalar_chain(up), scalar_chain(down)}, 0);
  const auto split = gelman_rubin({scalar_chain(up), scalar_chain(down)}, 0, true);
  EXPECT_LT(plain[0], 1.1);
  EXPECT_GT(split[0], 2.0);
}

TEST(GelmanRubin, Errors) {
  const auto c = gaussian_chain(1, 0.0, 100);
  EXPECT_THROW((void)gelman_rubin({c}, 0), DomainError);
  EXPECT_THROW((void)gelman_rubin({c, gaussian_chain(2, 0.0, 50)}, 0), DomainError);
  EXPECT_THROW((void)gelman_rubin({c, c}, 99), DomainError);
}

TEST(Quantile, TypeSeven) {
  const std::vector<double> x{1, 2, 3, 4};
  EXPECT_EQ(quantile_sorted(x, 0.0), 1.0);
  EXPECT_EQ(quantile_sorted(x, 1.0), 4.0);
  EXPECT_DOUBLE_EQ(quantile_sorted(x, 0.5), 2.5);
  EXPECT_DOUBLE_EQ(quantile_sorted(x, 0.25), 1.75);
  EXPECT_EQ(quantile_sorted({7.0}, 0.3), 7.0);
  EXPECT_THROW((void)quantile_sorted({}, 0.5), DomainError);
  EXPECT_THROW((void)quantile_sorted(x, 1.5), DomainError);
}

TEST(Summarize, ConstantAndUniform) {
  const auto flat = summarize({scalar_chain(std::vector<double>(50, 0.25))}, 10);
  EXPECT_EQ(flat.post_mean[0], 0.25);
  EXPECT_EQ(flat.ci[0].lo, 0.25);
  EXPECT_EQ(flat.ci[0].hi, 0.25);
  EXPECT_EQ(flat.draws_used, 40u);
  EXPECT_EQ(flat.n_chains, 1u);
  EXPECT_TRUE(std::isnan(flat.psrf[0]));

  std::vector<double> grid(1000);
  for (int i = 0; i < 1000; ++i) grid[static_cast<std::size_t>(i)] = i;
  const auto u = summarize({scalar_chain(grid)}, 0);
  EXPECT_DOUBLE_EQ(u.post_mean[0], 499.5);
  EXPECT_NEAR(u.ci[0].lo, 24.975, 1e-9);
  EXPECT_NEAR(u.ci[0].hi, 974.025, 1e-9);
  EXPECT_NEAR(u.ci[1].hi, 2 * 974.025, 1e-9);
  EXPECT_NEAR(u.ci[2].lo, -974.025, 1e-9);
  const auto n80 = summarize({scalar_chain(grid)}, 0, 0.8);
  EXPECT_NEAR(n80.ci[0].lo, 99.9, 1e-9);
  EXPECT_LT(n80.ci[0].width(), u.ci[0].width());
  EXPECT_THROW((void)summarize({scalar_chain(grid)}, 0, 1.0), DomainError);
}

TEST(Summarize, InvariantToChainAndDrawOrder) {
  std::vector<Chain> cs{gaussian_chain(1, 0.1, 300), gaussian_chain(2, -0.1, 300), gaussian_chain(3, 0.0, 300)};
  const auto a = summarize(cs, 0);
  std::mt19937_64 rng(4);
  for (auto& c : cs) std::shuffle(c.draws.begin(), c.draws.end(), rng);
  std::reverse(cs.begin(), cs.end());
  const auto b = summarize(cs, 0);
  EXPECT_EQ(a.post_mean, b.post_mean);
  for (std::size_t p = 0; p < 3; ++p) {
    EXPECT_EQ(a.ci[p].lo, b.ci[p].lo);
    EXPECT_EQ(a.ci[p].hi, b.ci[p].hi);
  }
  EXPECT_EQ(a.n_chains, 3u);
  EXPECT_EQ(a.draws_used, 900u);
}

TEST(TheoreticalMean, MatchesClosedForm) {
  for (double h : {-1.0, 0.0, 0.3, 2.0}) EXPECT_NEAR(theoretical_mean({0, 0, h}, 40), std::tanh(h), 1e-12);
  EXPECT_EQ(theoretical_mean({0, 1.2, 0}, 300), 0.0);
}

TEST(DensityCompare, IsAMetric) {
  Engine e = make_engine({12, 0});
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  auto draw = [&] { return Theta{u(e), u(e), u(e)}; };
  for (int i = 0; i < 30; ++i) {
    const auto a = draw(), b = draw(), c = draw();
    const double ab = density_compare(a, b, 60);
    EXPECT_EQ(density_compare(a, a, 60), 0.0);
    EXPECT_NEAR(ab, density_compare(b, a, 60), 1e-15);
    EXPECT_GE(ab, 0.0);
    EXPECT_LE(ab, 1.0 + 1e-15);
    EXPECT_LE(ab, density_compare(a, c, 60) + density_compare(c, b, 60) + 1e-12);
  }
  EXPECT_GT(density_compare({0, 0, 0}, {0, 0, 10}, 300), 0.99);
}

TEST(Coverage, SmallStudy) {
  CoverageOptions opts;
  opts.N = 60;
  opts.M = 300;
  opts.n_reps = 3;
  opts.sampler.n_iter = 800;
  opts.sampler.burn_in = 400;
  opts.rng = {5, 0};
  opts.workers = 1;
  const auto a = coverage_study({0.5, 0.3, 0.1}, opts);
  ASSERT_EQ(a.replications.size(), 3u);
  EXPECT_EQ(a.failures(), 0u);
  for (int p = 0; p < 3; ++p) {
    const double hits = a.coverage[p] * 3;
    EXPECT_NEAR(hits, std::round(hits), 1e-12);
    EXPECT_GT(a.mean_width[p], 0.0);
  }
  opts.workers = 3;
  const auto b = coverage_study({0.5, 0.3, 0.1}, opts);
  EXPECT_EQ(a.coverage, b.coverage);
  EXPECT_EQ(a.mean_width, b.mean_width);
  for (std::size_t r = 0; r < 3; ++r) EXPECT_EQ(a.replications[r].start, b.replications[r].start);
}

TEST(Coverage, FailedReplicationsCountAsMisses) {
  CoverageOptions opts;
  opts.N = 20;
  opts.M = 50;
  opts.n_reps = 2;
  opts.grid.step = 0.0;  // every replication fails at initialisation
  const auto r = coverage_study({0, 0, 0}, opts);
  EXPECT_EQ(r.failures(), 2u);
  EXPECT_EQ(r.coverage, Vec3::Zero());
  EXPECT_FALSE(r.replications[0].error.empty());
  opts.n_reps = 0;
  EXPECT_THROW((void)coverage_study({0, 0, 0}, opts), DomainError);
}

#include "mfising/model.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>
#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace mfising;

namespace {

constexpr double kLog2 = std::numbers::ln2;

// Exact log C(n, k) through big-integer arithmetic.
double exact_log_binomial(int n, int k) {
  using boost::multiprecision::cpp_int;
  using Float = boost::multiprecision::cpp_bin_float_50;
  cpp_int c = 1;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return static_cast<double>(log(Float(c)));
}

// Root of m - tanh(a m) on (lo, hi) by plain bisection.
double bisect_tanh_root(double a, double lo, double hi) {
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if ((mid - std::tanh(a * mid)) > 0.0) hi = mid;
    else lo = mid;
  }
  return 0.5 * (lo + hi);
}

Theta random_theta(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  return {u(rng), u(rng), u(rng)};
}

}  // namespace

TEST(Spectrum, EndpointsAndSpacing) {
  for (int N : {1, 2, 7, 300}) {
    const auto s = spectrum(N);
    ASSERT_EQ(s.size(), static_cast<std::size_t>(N) + 1);
    EXPECT_EQ(s.front(), -1.0);
    EXPECT_EQ(s.back(), 1.0);
    for (std::size_t k = 1; k < s.size(); ++k) EXPECT_NEAR(s[k] - s[k - 1], 2.0 / N, 4e-16);
    for (int k = 0; k <= N; ++k) EXPECT_EQ(atom(N, N - k), -atom(N, k));
  }
}

TEST(Spectrum, AtomIndexAcceptsOneUlpAndRejectsOffSpectrum) {
  EXPECT_EQ(atom_index(300, atom(300, 17)), 17);
  EXPECT_EQ(atom_index(300, std::nextafter(atom(300, 17), 2.0)), 17);
  EXPECT_EQ(atom_index(3, 1.0 / 3.0), 2);
  try {
    (void)atom_index(4, 0.3);
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("0.5"), std::string::npos) << msg;
    EXPECT_NE(msg.find("0"), std::string::npos) << msg;
  }
  EXPECT_THROW((void)atom_index(4, 1.5), DataError);
  EXPECT_THROW((void)atom_index(4, std::nan("")), DataError);
}

TEST(Entropy, KnownValues) {
  EXPECT_NEAR(entropy_I(0.0), -kLog2, 1e-15);
  EXPECT_EQ(entropy_I(1.0), 0.0);
  EXPECT_EQ(entropy_I(-1.0), 0.0);
  // 40-digit evaluation of the closed form.
  EXPECT_NEAR(entropy_I(0.5), -0.5623351446188084, 1e-15);
  EXPECT_THROW((void)entropy_I(1.0000001), DomainError);
}

TEST(Entropy, RangeProperty) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const double v = entropy_I(u(rng));
    EXPECT_LE(v, 0.0);
    EXPECT_GE(v, -kLog2 - 1e-15);
  }
}

TEST(LogCount, SmallCases) {
  EXPECT_NEAR(log_count(4, 0.0), std::log(6.0), 1e-14);
  EXPECT_NEAR(log_count(4, 0.5), std::log(4.0), 1e-14);
  EXPECT_EQ(log_count(4, -1.0), 0.0);
  EXPECT_THROW((void)log_count(4, 0.25), DataError);
}

TEST(LogCount, CentralBinomialAgainstBigInteger) {
  const double exact = exact_log_binomial(300, 150);
  EXPECT_NEAR(exact, 204.8656382462206, 1e-12);
  EXPECT_NEAR(log_count(300, 0.0), exact, 1e-9 * exact);
}

TEST(LogCount, TableMatchesExactBinomialsAndPascal) {
  for (int N = 1; N <= 50; ++N) {
    const LogCountTable t(N);
    const LogCountTable prev(std::max(N - 1, 1));
    EXPECT_EQ(t[0], 0.0);
    for (int k = 0; k <= N; ++k) {
      EXPECT_EQ(t[k], t[N - k]);
      EXPECT_NEAR(t[k], exact_log_binomial(N, k), 1e-9 * std::max(1.0, t[k]));
      if (N > 1 && k > 0 && k < N) {
        const double a = prev[k - 1], b = prev[k];
        const double hi = std::max(a, b);
        EXPECT_NEAR(t[k], hi + std::log(std::exp(a - hi) + std::exp(b - hi)), 1e-9);
      }
    }
  }
}

TEST(Hamiltonian, KnownValues) {
  EXPECT_EQ(hamiltonian_density({0, 0, 0}, 0.37), 0.0);
  EXPECT_DOUBLE_EQ(hamiltonian_density({0, 0, 1}, 0.5), 0.5);
  EXPECT_NEAR(hamiltonian_density({1.67, 0.01, 0.1}, 1.0), 1.67 / 3 + 0.005 + 0.1, 1e-15);
  EXPECT_NEAR(hamiltonian_density({1.67, 0.01, 0.1}, 1.0), 0.6616667, 1e-7);
}

TEST(ModelSummary, IndependentFairSpins) {
  for (int N : {1, 4, 10, 300}) {
    const auto s = model_summary({0, 0, 0}, N);
    EXPECT_NEAR(s.log_z, N * kLog2, 1e-10);
    EXPECT_NEAR(s.mu[0], 0.0, 1e-15);
    EXPECT_NEAR(s.mu[2], 0.0, 1e-15);
    EXPECT_NEAR(s.mu[4], 0.0, 1e-15);
    for (int k = 0; k <= N; ++k)
      EXPECT_NEAR(s.pmf[static_cast<std::size_t>(k)], std::exp(exact_log_binomial(N, k) - N * kLog2), 1e-14);
  }
}

TEST(ModelSummary, ClosedFormFieldOnly) {
  for (double h : {-1.0, -0.5, 0.0, 0.5, 1.0, 2.5}) {
    for (int N : {1, 10, 300, 1000}) {
      const auto s = model_summary({0, 0, h}, N);
      EXPECT_NEAR(s.log_z, N * std::log(2.0 * std::cosh(h)), 1e-10) << "h=" << h << " N=" << N;
      EXPECT_NEAR(s.mu[0], std::tanh(h), 1e-12);
    }
  }
  EXPECT_NEAR(model_summary({0, 0, 0.5}, 300).mean(), 0.4621172, 1e-7);
}

TEST(ModelSummary, NormalizationProperty) {
  std::mt19937_64 rng(2);
  for (int N : {1, 2, 17, 300}) {
    const LogCountTable table(N);
    for (int i = 0; i < 1000; ++i) {
      const auto s = model_summary(random_theta(rng, -2.0, 2.0), table);
      double total = 0.0;
      for (double p : s.pmf) {
        ASSERT_GE(p, 0.0);
        total += p;
      }
      ASSERT_NEAR(total, 1.0, 1e-12);
    }
  }
}

TEST(ModelSummary, MomentInequalities) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 500; ++i) {
    const auto s = model_summary(random_theta(rng, -3.0, 3.0), 1 + static_cast<int>(rng() % 400));
    const auto& mu = s.mu;
    for (int j : {1, 3, 5}) {
      EXPECT_GE(mu[static_cast<std::size_t>(j)], 0.0);
      EXPECT_LE(mu[static_cast<std::size_t>(j)], 1.0 + 1e-12);
    }
    for (int j : {0, 2, 4}) EXPECT_LE(std::abs(mu[static_cast<std::size_t>(j)]), 1.0 + 1e-12);
    EXPECT_GE(mu[1] - mu[0] * mu[0], -1e-14);
    EXPECT_GE(mu[3] - mu[1] * mu[1], -1e-14);
    EXPECT_GE(mu[5] - mu[2] * mu[2], -1e-14);
  }
}

TEST(ModelSummary, SpinFlipSymmetry) {
  for (double J : {-1.0, 0.0, 1.0, 1.2, 3.0}) {
    for (int N : {1, 2, 17, 300}) {
      const auto s = model_summary({0, J, 0}, N);
      EXPECT_LT(std::abs(s.mu[0]) + std::abs(s.mu[2]) + std::abs(s.mu[4]), 1e-12);
      for (int k = 0; k <= N; ++k)
        EXPECT_NEAR(s.pmf[static_cast<std::size_t>(k)], s.pmf[static_cast<std::size_t>(N - k)], 1e-14);
    }
  }
}

TEST(ModelSummary, BimodalPeaksAtConsistencyRoots) {
  const int N = 300;
  const auto s = model_summary({0, 1.2, 0}, N);
  EXPECT_EQ(s.mu[0], 0.0);
  std::size_t left = 0, right = static_cast<std::size_t>(N);
  for (std::size_t k = 0; k <= static_cast<std::size_t>(N) / 2; ++k)
    if (s.pmf[k] > s.pmf[left]) left = k;
  for (std::size_t k = static_cast<std::size_t>(N) / 2; k <= static_cast<std::size_t>(N); ++k)
    if (s.pmf[k] > s.pmf[right]) right = k;
  EXPECT_EQ(s.pmf[left], s.pmf[right]);
  // At finite N the log-pmf is N f(m) - log(1 - m^2)/2 + O(1/N), which moves
  // the peak from the root m* by (m*/(1 - m*^2)) / (N |f''(m*)|).
  const double root = bisect_tanh_root(1.2, 0.1, 1.0);
  const double curv = 1.0 / (1.0 - root * root) - 1.2;
  const double peak = root + root / (1.0 - root * root) / (N * curv);
  EXPECT_NEAR(atom(N, static_cast<int>(right)), peak, 1.0 / N);
  EXPECT_NEAR(atom(N, static_cast<int>(left)), -peak, 1.0 / N);
  EXPECT_NEAR(solve_consistency({0, 1.2, 0}, 0.9), root, 1e-10);
}

TEST(ModelSummary, StatisticCovarianceMatchesDirectSum) {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 50; ++i) {
    const Theta t = random_theta(rng, -1.5, 1.5);
    const int N = 60;
    const auto s = model_summary(t, N);
    Vec3 mean = Vec3::Zero();
    Mat3 second = Mat3::Zero();
    for (int k = 0; k <= N; ++k) {
      const double m = atom(N, k);
      const Vec3 v(m * m * m / 3.0, m * m / 2.0, m);
      mean += s.pmf[static_cast<std::size_t>(k)] * v;
      second += s.pmf[static_cast<std::size_t>(k)] * v * v.transpose();
    }
    const Mat3 cov = second - mean * mean.transpose();
    EXPECT_LT((s.stat_mean - mean).cwiseAbs().maxCoeff(), 1e-13);
    EXPECT_LT((s.stat_cov - cov).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(ModelSummary, RejectsNonFiniteTheta) {
  EXPECT_THROW((void)model_summary({std::nan(""), 0, 0}, 10), DomainError);
  EXPECT_THROW((void)model_summary({0, 0, 0}, 0), DomainError);
}

TEST(ModelSummary, ExtremeParametersStayFinite) {
  const auto s = model_summary({50, -40, 30}, 1000);
  EXPECT_TRUE(std::isfinite(s.log_z));
  double total = 0.0;
  for (double p : s.pmf) total += p;
  EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(ModelSummary, MeanApproachesConsistencyRootWithN) {
  const Theta t{0.5, 0.3, 0.1};
  const double root = solve_consistency(t, 0.5);
  double prev = std::numeric_limits<double>::infinity();
  for (int N : {50, 300, 3000}) {
    const double err = std::abs(model_summary(t, N).mean() - root);
    EXPECT_LT(err, prev) << "N=" << N;
    prev = err;
  }
  for (int N : {50, 300, 3000}) EXPECT_LT(std::abs(model_summary({0, 0, 0.5}, N).mean() - std::tanh(0.5)), 2.0 / N);
}

TEST(FreeEnergy, KnownValues) {
  EXPECT_NEAR(free_energy_density({0, 0, 0}, 0.0), kLog2, 1e-15);
  EXPECT_EQ(free_energy_density({0, 0, 0}, 1.0), 0.0);
  EXPECT_EQ(free_energy_density({0, 0, 0}, -1.0), 0.0);
  EXPECT_NEAR(free_energy_density({0, 1, 0}, 0.0), kLog2, 1e-15);
}

TEST(PressureLimit, KnownCases) {
  const auto p0 = pressure_limit({0, 0, 0});
  EXPECT_NEAR(p0.pressure, kLog2, 1e-12);
  ASSERT_EQ(p0.argmax.size(), 1u);
  EXPECT_NEAR(p0.argmax[0], 0.0, 1e-9);

  const double root = bisect_tanh_root(1.2, 0.1, 1.0);
  const auto p1 = pressure_limit({0, 1.2, 0});
  ASSERT_EQ(p1.argmax.size(), 2u);
  EXPECT_NEAR(p1.argmax[0], -root, 1e-9);
  EXPECT_NEAR(p1.argmax[1], root, 1e-9);

  const auto pc = pressure_limit({0, 1, 0});
  ASSERT_EQ(pc.argmax.size(), 1u);
  EXPECT_NEAR(pc.argmax[0], 0.0, 1e-3);
  EXPECT_NEAR(pc.pressure, kLog2, 1e-10);

  EXPECT_THROW((void)pressure_limit({0, 0, 0}, 0.0), DomainError);
}

TEST(PressureLimit, MaximizersSolveConsistencyEquation) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 200; ++i) {
    const Theta t = random_theta(rng, -2.0, 2.0);
    const auto p = pressure_limit(t);
    ASSERT_FALSE(p.argmax.empty());
    for (double m : p.argmax) {
      if (std::abs(m) >= 1.0) continue;  // boundary maximizer only for unbounded slope
      EXPECT_LT(std::abs(m - std::tanh(t.K * m * m + t.J * m + t.h)), 1e-8) << to_string(t);
    }
    // dense check that nothing beats the reported maximum
    for (int k = 0; k <= 4000; ++k) EXPECT_LE(free_energy_density(t, -1.0 + k / 2000.0), p.pressure + 1e-12);
  }
}

TEST(PressureLimit, SandwichesFinitePressure) {
  std::mt19937_64 rng(6);
  for (int i = 0; i < 20; ++i) {
    const Theta t = random_theta(rng, -2.0, 2.0);
    const double p = pressure_limit(t).pressure;
    for (int N : {100, 300, 1000}) {
      const double diff = model_summary(t, N).log_z / N - p;
      EXPECT_GE(diff, -(3.0 + 0.5 * std::log(N)) / N);
      EXPECT_LE(diff, std::log(N + 1.0) / N);
    }
  }
}

TEST(Consistency, FixedPoints) {
  EXPECT_NEAR(solve_consistency({0, 0, 0}, 0.3), 0.0, 1e-12);
  for (double h : {-1.0, 0.2, 0.5}) EXPECT_NEAR(solve_consistency({0, 0, h}, 0.0), std::tanh(h), 1e-12);
  EXPECT_THROW((void)solve_consistency({0, 0, 0}, 1.5), DomainError);
}

TEST(Consistency, NonConvergenceCarriesLastIterate) {
  try {
    (void)solve_consistency({0, 1.2, 0}, 0.05, 1e-14, 2);
    FAIL() << "expected ConvergenceError";
  } catch (const ConvergenceError& e) {
    EXPECT_GT(e.last_iterate(), 0.05);
    EXPECT_GT(std::abs(e.residual()), 1e-14);
  }
}

TEST(Lemma1, UpperBoundAndRobbinsLowerBound) {
  for (int N : {10, 100, 300}) {
    for (int k = 1; k < N; ++k) {
      const double m = atom(N, k);
      const double gap = lemma1_gap(N, m);
      EXPECT_LE(gap, 0.0);
      EXPECT_GE(gap, lemma1_lower_bound(N, m)) << "N=" << N << " k=" << k;
    }
  }
  EXPECT_THROW((void)lemma1_gap(10, 1.0), DomainError);
  EXPECT_THROW((void)lemma1_gap(10, -1.0), DomainError);
}

TEST(Lemma1, CentralValues) {
  // 40-digit values of log C(N, N/2) - N log 2.
  EXPECT_NEAR(lemma1_gap(10, 0.0), -1.402042718088030, 1e-12);
  EXPECT_NEAR(lemma1_gap(300, 0.0), -3.078515921762972, 1e-11);
  EXPECT_NEAR(lemma1_gap(300, 0.0), -0.5 * std::log(150 * std::numbers::pi), 1e-3);
  EXPECT_GE(lemma1_gap(10, 0.0), stirling_prefactor(10, 0.0) - 0.025);
}

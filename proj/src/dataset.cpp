#include "mfising/dataset.hpp"

#include <algorithm>
#include <fmt/format.h>

namespace mfising {

Dataset::Dataset(int N, std::vector<double> values, std::optional<Theta> theta_true, RngSpec rng)
    : n_(N), values_(std::move(values)), theta_true_(theta_true), rng_(rng) {
  if (N < 1) throw DomainError(fmt::format("spin count N must be >= 1, got {}", N));
  if (values_.empty()) throw DataError("dataset has no observations");
  counts_.assign(static_cast<std::size_t>(N) + 1, 0);
  for (std::size_t i = 0; i < values_.size(); ++i) {
    int k = 0;
    try {
      k = atom_index(N, values_[i]);
    } catch (const DataError& e) {
      throw DataError(fmt::format("row {}: {}", i, e.what()), static_cast<std::ptrdiff_t>(i));
    }
    // Store the canonical atom so downstream text output is exact.
    values_[i] = atom(N, k);
    ++counts_[static_cast<std::size_t>(k)];
  }
  const LogCountTable table(N);
  // Mirrored atoms are summed together so symmetric data has exactly zero odd statistics.
  for (int k = 0; 2 * k <= N; ++k) {
    const int j = N - k;
    const auto ck = static_cast<double>(counts_[static_cast<std::size_t>(k)]);
    const auto cj = k == j ? 0.0 : static_cast<double>(counts_[static_cast<std::size_t>(j)]);
    if (ck == 0.0 && cj == 0.0) continue;
    const double mk = atom(N, k), mj = atom(N, j);
    suff_.s1 += ck * mk + cj * mj;
    suff_.s2 += ck * mk * mk + cj * mj * mj;
    suff_.s3 += ck * mk * mk * mk + cj * mj * mj * mj;
    sum_log_count_ += ck * table[k] + cj * table[j];
  }
}

std::vector<int> sample_atoms(const std::vector<double>& pmf, int count, Engine& engine) {
  std::vector<double> cdf(pmf.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < pmf.size(); ++k) cdf[k] = (acc += pmf[k]);
  // Force the last bin to catch u arbitrarily close to 1.
  cdf.back() = 1.0;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<int> out(static_cast<std::size_t>(count));
  for (auto& k : out) {
    const double u = unif(engine);
    k = static_cast<int>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
    k = std::min(k, static_cast<int>(pmf.size()) - 1);
  }
  return out;
}

Dataset sample_dataset(const Theta& theta, int N, int M, const RngSpec& rng) {
  if (M < 1) throw DomainError(fmt::format("replica count M must be >= 1, got {}", M));
  const auto summary = model_summary(theta, N);
  auto engine = make_engine(rng);
  const auto atoms = sample_atoms(summary.pmf, M, engine);
  std::vector<double> values(atoms.size());
  std::transform(atoms.begin(), atoms.end(), values.begin(), [N](int k) { return atom(N, k); });
  return Dataset(N, std::move(values), theta, rng);
}

std::array<double, 3> empirical_moments(const Dataset& data) {
  const auto m = static_cast<double>(data.m_count());
  const auto& s = data.suffstats();
  return {s.s1 / m, s.s2 / m, s.s3 / m};
}

}  // namespace mfising

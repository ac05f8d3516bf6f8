#pragma once

#include "mfising/model.hpp"
#include "mfising/rng.hpp"
#include "mfising/types.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace mfising {

// (S1, S2, S3) = (sum m, sum m^2, sum m^3).
struct SuffStats {
  double s1 = 0.0;
  double s2 = 0.0;
  double s3 = 0.0;
};

// M magnetization observations on the size-N spectrum. The atom histogram is
// the canonical sufficient statistic: every derived sum is accumulated over
// atoms in index order, so any permutation of `values` yields bit-identical
// statistics.
class Dataset {
 public:
  // Validates every value against the spectrum; throws DataError carrying the
  // offending row index.
  Dataset(int N, std::vector<double> values, std::optional<Theta> theta_true = std::nullopt,
          RngSpec rng = {});

  [[nodiscard]] int n() const { return n_; }
  [[nodiscard]] std::size_t m_count() const { return values_.size(); }
  [[nodiscard]] const std::vector<double>& values() const { return values_; }
  [[nodiscard]] const std::vector<std::int64_t>& counts() const { return counts_; }
  [[nodiscard]] const SuffStats& suffstats() const { return suff_; }
  /// sum_i log A_N(m_i); theta-independent part of the log-likelihood.
  [[nodiscard]] double sum_log_count() const { return sum_log_count_; }
  [[nodiscard]] const std::optional<Theta>& theta_true() const { return theta_true_; }
  [[nodiscard]] const RngSpec& rng() const { return rng_; }

 private:
  int n_;
  std::vector<double> values_;
  std::vector<std::int64_t> counts_;
  SuffStats suff_;
  double sum_log_count_ = 0.0;
  std::optional<Theta> theta_true_;
  RngSpec rng_;
};

/// Draws M i.i.d. magnetizations by inverse-CDF sampling of the exact pmf.
[[nodiscard]] Dataset sample_dataset(const Theta& theta, int N, int M, const RngSpec& rng);

/// Inverse-CDF draws of atom indices from a pmf; shared with tests.
[[nodiscard]] std::vector<int> sample_atoms(const std::vector<double>& pmf, int count, Engine& engine);

/// (S1/M, S2/M, S3/M).
[[nodiscard]] std::array<double, 3> empirical_moments(const Dataset& data);

}  // namespace mfising

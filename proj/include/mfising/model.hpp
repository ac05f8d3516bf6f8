#pragma once

// Exact evaluation of the mean-field Ising model with three-body interaction.
//
// For N spins the Hamiltonian depends on a configuration only through its
// magnetization m, which takes one of the N+1 values m_k = (2k - N)/N. With
// per-spin energy U(m) = K m^3/3 + J m^2/2 + h m the law of m is
//
//   P(m_k) = C(N, k) exp(N U(m_k)) / Z,   Z = sum_k C(N, k) exp(N U(m_k)),
//
// which every routine here evaluates in log space.

#include "mfising/types.hpp"

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace mfising {

/// Atom m_k of the size-N spectrum, computed as (2k - N)/N so that
/// atom(N, N - k) == -atom(N, k) holds exactly.
[[nodiscard]] double atom(int N, int k);

/// All N + 1 atoms in increasing order.
[[nodiscard]] std::vector<double> spectrum(int N);

/// Index k with atom(N, k) == m, allowing one ulp of slack either side.
/// Throws DataError naming the two nearest atoms when m is off the spectrum.
[[nodiscard]] int atom_index(int N, double m);

/// log C(N, k) for k = 0..N. Immutable after construction.
class LogCountTable {
 public:
  explicit LogCountTable(int N);

  [[nodiscard]] int size_n() const { return n_; }
  [[nodiscard]] double operator[](int k) const { return log_count_[static_cast<std::size_t>(k)]; }
  [[nodiscard]] std::span<const double> values() const { return log_count_; }

 private:
  int n_;
  std::vector<double> log_count_;
};

/// Per-(theta, N) quantities from one sweep over the spectrum.
struct ModelSummary {
  Theta theta;
  int N = 0;
  double log_z = 0.0;
  std::vector<double> pmf;     // over atoms k = 0..N
  std::array<double, 6> mu{};  // mu[j-1] = E[m^j]
  // Moments of the sufficient statistic v(m) = (m^3/3, m^2/2, m), (K, J, h) order.
  // Computed about the modal atom so the covariance avoids raw-moment cancellation.
  Vec3 stat_mean = Vec3::Zero();
  Mat3 stat_cov = Mat3::Zero();

  [[nodiscard]] double mean() const { return mu[0]; }
};

/// Rate function I(m) <= 0, with 0 log 0 = 0 at m = +-1. Throws DomainError for |m| > 1.
[[nodiscard]] double entropy_I(double m);

/// log C(N, N(1+m)/2); m must be an atom of the size-N spectrum.
[[nodiscard]] double log_count(int N, double m);

/// U(m) = K m^3/3 + J m^2/2 + h m, so that -H(x) = N U(m).
[[nodiscard]] double hamiltonian_density(const Theta& theta, double m);

[[nodiscard]] ModelSummary model_summary(const Theta& theta, int N);
[[nodiscard]] ModelSummary model_summary(const Theta& theta, const LogCountTable& table);

/// f(m) = U(m) - I(m).
[[nodiscard]] double free_energy_density(const Theta& theta, double m);

struct PressureLimit {
  double pressure = 0.0;
  std::vector<double> argmax;  // every maximizer within tol of the max, ascending
};

/// max over [-1, 1] of f, via a 1e-3 grid and bisection on f' around each local max.
[[nodiscard]] PressureLimit pressure_limit(const Theta& theta, double tol = 1e-10);

/// Fixed point of m = tanh(K m^2 + J m + h) by damped iteration from m0.
/// Throws ConvergenceError (carrying the last iterate) after max_iter steps.
[[nodiscard]] double solve_consistency(const Theta& theta, double m0, double tol = 1e-12,
                                       int max_iter = 100000);

/// log A_N(m) + N I(m) for interior atoms; <= 0 by the tail bound.
[[nodiscard]] double lemma1_gap(int N, double m);

/// Leading Stirling prefactor 0.5 log(2 / (pi N (1 - m^2))).
[[nodiscard]] double stirling_prefactor(int N, double m);

/// Lower bound on lemma1_gap valid at every interior atom, from Robbins'
/// factorial bounds: prefactor + 1/(12N + 1) - 1/(3 N (1 - m^2)).
[[nodiscard]] double lemma1_lower_bound(int N, double m);

}  // namespace mfising

#include "mfising/model.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <limits>
#include <numbers>

namespace mfising {

std::string to_string(const Theta& theta) {
  return fmt::format("({}, {}, {})", theta.K, theta.J, theta.h);
}

namespace {

void require_n(int N) {
  if (N < 1) throw DomainError(fmt::format("spin count N must be >= 1, got {}", N));
}

void require_unit_interval(double m) {
  if (!(std::abs(m) <= 1.0)) throw DomainError(fmt::format("magnetization {} outside [-1, 1]", m));
}

void require_finite(const Theta& theta) {
  if (!theta.finite()) throw DomainError("non-finite parameter " + to_string(theta));
}

// x log x with the 0 log 0 = 0 convention.
double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

// d/dm f(m) = U'(m) - atanh(m).
double free_energy_slope(const Theta& t, double m) {
  return t.K * m * m + t.J * m + t.h - std::atanh(m);
}

}  // namespace

double atom(int N, int k) { return static_cast<double>(2 * k - N) / static_cast<double>(N); }

std::vector<double> spectrum(int N) {
  require_n(N);
  std::vector<double> out(static_cast<std::size_t>(N) + 1);
  for (int k = 0; k <= N; ++k) out[static_cast<std::size_t>(k)] = atom(N, k);
  return out;
}

int atom_index(int N, double m) {
  require_n(N);
  if (!std::isfinite(m)) throw DataError(fmt::format("non-finite magnetization {}", m));
  const double pos = 0.5 * static_cast<double>(N) * (1.0 + m);
  const int k = static_cast<int>(std::clamp(std::lround(pos), 0L, static_cast<long>(N)));
  const double a = atom(N, k);
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (m >= std::nextafter(a, -inf) && m <= std::nextafter(a, inf)) return k;
  const int lo = std::clamp(static_cast<int>(std::floor(pos)), 0, N);
  const int hi = std::clamp(lo + 1, 0, N);
  throw DataError(fmt::format("value {} is not on the N={} spectrum (nearest atoms {} and {})", m,
                              N, atom(N, lo), atom(N, hi)));
}

LogCountTable::LogCountTable(int N) : n_(N) {
  require_n(N);
  log_count_.resize(static_cast<std::size_t>(N) + 1);
  const double lf_n = std::lgamma(static_cast<double>(N) + 1.0);
  for (int k = 0; k <= N; ++k) {
    // Sum the two factorial terms first so logA[k] == logA[N-k] bit for bit.
    const double denom = std::lgamma(static_cast<double>(k) + 1.0) +
                         std::lgamma(static_cast<double>(N - k) + 1.0);
    log_count_[static_cast<std::size_t>(k)] = lf_n - denom;
  }
  log_count_.front() = 0.0;
  log_count_.back() = 0.0;
}

double entropy_I(double m) {
  require_unit_interval(m);
  return xlogx(0.5 * (1.0 - m)) + xlogx(0.5 * (1.0 + m));
}

double log_count(int N, double m) {
  const int k = atom_index(N, m);
  const double denom = std::lgamma(static_cast<double>(k) + 1.0) +
                       std::lgamma(static_cast<double>(N - k) + 1.0);
  if (k == 0 || k == N) return 0.0;
  return std::lgamma(static_cast<double>(N) + 1.0) - denom;
}

double hamiltonian_density(const Theta& theta, double m) {
  require_unit_interval(m);
  return m * (m * (theta.K / 3.0 * m + theta.J / 2.0) + theta.h);
}

ModelSummary model_summary(const Theta& theta, int N) {
  require_n(N);
  return model_summary(theta, LogCountTable(N));
}

ModelSummary model_summary(const Theta& theta, const LogCountTable& table) {
  require_finite(theta);
  const int N = table.size_n();
  const auto n_atoms = static_cast<std::size_t>(N) + 1;
  const double dn = static_cast<double>(N);

  ModelSummary s;
  s.theta = theta;
  s.N = N;
  s.pmf.resize(n_atoms);

  std::size_t mode = 0;
  for (std::size_t k = 0; k < n_atoms; ++k) {
    const double m = atom(N, static_cast<int>(k));
    s.pmf[k] = table[static_cast<int>(k)] + dn * m * (m * (theta.K / 3.0 * m + theta.J / 2.0) + theta.h);
    if (s.pmf[k] > s.pmf[mode]) mode = k;
  }

  // One accumulation pass: normaliser and the first six moments of d = m - c,
  // with c the modal atom.
  const double w_max = s.pmf[mode];
  const double c = atom(N, static_cast<int>(mode));
  double total = 0.0;
  std::array<double, 7> nu{};
  for (std::size_t k = 0; k < n_atoms; ++k) {
    const double e = std::exp(s.pmf[k] - w_max);
    s.pmf[k] = e;
    total += e;
    const double d = atom(N, static_cast<int>(k)) - c;
    double p = e;
    for (int j = 1; j <= 6; ++j) {
      p *= d;
      nu[static_cast<std::size_t>(j)] += p;
    }
  }
  s.log_z = w_max + std::log(total);
  for (auto& p : s.pmf) p /= total;
  nu[0] = 1.0;
  for (int j = 1; j <= 6; ++j) nu[static_cast<std::size_t>(j)] /= total;

  // Raw moments summed over mirrored atom pairs (k, N - k), so odd moments of
  // a spin-flip symmetric pmf cancel exactly.
  s.mu.fill(0.0);
  for (int k = 0; 2 * k <= N; ++k) {
    const int mirror = N - k;
    const double a = atom(N, k);
    const double b = atom(N, mirror);
    const double pa = s.pmf[static_cast<std::size_t>(k)];
    const double pb = mirror == k ? 0.0 : s.pmf[static_cast<std::size_t>(mirror)];
    double xa = pa;
    double xb = pb;
    for (std::size_t j = 0; j < 6; ++j) {
      xa *= a;
      xb *= b;
      s.mu[j] += xa + xb;
    }
  }

  // v(m) = A (d, d^2, d^3) + const, rows in (K, J, h) order.
  Eigen::Matrix3d A;
  A << c * c, c, 1.0 / 3.0,  //
      c, 0.5, 0.0,           //
      1.0, 0.0, 0.0;
  Eigen::Matrix3d S;
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= 3; ++j)
      S(i - 1, j - 1) = nu[static_cast<std::size_t>(i + j)] -
                        nu[static_cast<std::size_t>(i)] * nu[static_cast<std::size_t>(j)];
  s.stat_cov = A * S * A.transpose();
  s.stat_cov = 0.5 * (s.stat_cov + s.stat_cov.transpose()).eval();
  s.stat_mean = Vec3(s.mu[2] / 3.0, s.mu[1] / 2.0, s.mu[0]);
  return s;
}

double free_energy_density(const Theta& theta, double m) {
  return hamiltonian_density(theta, m) - entropy_I(m);
}

PressureLimit pressure_limit(const Theta& theta, double tol) {
  if (!(tol > 0.0)) throw DomainError("pressure_limit tolerance must be positive");
  require_finite(theta);
  constexpr int kGrid = 2000;  // step 1e-3
  std::vector<double> f(kGrid + 1);
  auto grid_m = [](int i) { return static_cast<double>(i - kGrid / 2) / (kGrid / 2); };
  for (int i = 0; i <= kGrid; ++i) f[static_cast<std::size_t>(i)] = free_energy_density(theta, grid_m(i));

  std::vector<std::pair<double, double>> maxima;  // (m, f)
  for (int i = 0; i <= kGrid; ++i) {
    const double fi = f[static_cast<std::size_t>(i)];
    const bool left_ok = i == 0 || fi >= f[static_cast<std::size_t>(i - 1)];
    const bool right_ok = i == kGrid || fi > f[static_cast<std::size_t>(i + 1)];
    if (!(left_ok && right_ok)) continue;

    // f' > 0 at a, f' < 0 at b (or infinite at the boundary).
    double a = grid_m(std::max(i - 1, 0));
    double b = grid_m(std::min(i + 1, kGrid));
    double m_star = grid_m(i);
    if (free_energy_slope(theta, a) > 0.0 && free_energy_slope(theta, b) < 0.0) {
      for (int it = 0; it < 200 && b - a > 0.0; ++it) {
        const double mid = 0.5 * (a + b);
        if (mid <= a || mid >= b) break;
        const double g = free_energy_slope(theta, mid);
        if (g > 0.0) a = mid;
        else if (g < 0.0) b = mid;
        else { a = b = mid; break; }
      }
      m_star = 0.5 * (a + b);
    }
    const double f_star = free_energy_density(theta, m_star);
    if (!maxima.empty() && std::abs(maxima.back().first - m_star) < 1e-9) {
      if (f_star > maxima.back().second) maxima.back() = {m_star, f_star};
      continue;
    }
    maxima.emplace_back(m_star, f_star);
  }

  PressureLimit out;
  out.pressure = -std::numeric_limits<double>::infinity();
  for (const auto& [m, fm] : maxima) out.pressure = std::max(out.pressure, fm);
  for (const auto& [m, fm] : maxima)
    if (fm >= out.pressure - tol) out.argmax.push_back(m);
  return out;
}

double solve_consistency(const Theta& theta, double m0, double tol, int max_iter) {
  require_unit_interval(m0);
  require_finite(theta);
  auto map = [&](double m) { return std::tanh(theta.K * m * m + theta.J * m + theta.h); };
  double m = m0;
  double damping = 1.0;
  double prev_step = 0.0;
  double residual = map(m) - m;
  for (int it = 0; it < max_iter; ++it) {
    if (std::abs(residual) < tol) return m;
    const double step = damping * residual;
    if (step * prev_step < 0.0) damping *= 0.5;  // oscillation
    m += damping * residual;
    prev_step = step;
    residual = map(m) - m;
  }
  if (std::abs(residual) < tol) return m;
  throw ConvergenceError(fmt::format("consistency iteration did not converge after {} steps "
                                     "(last m = {}, residual = {})",
                                     max_iter, m, residual),
                         m, residual);
}

double lemma1_gap(int N, double m) {
  require_n(N);
  if (!(std::abs(m) < 1.0)) throw DomainError("lemma1_gap requires an interior atom (|m| < 1)");
  return log_count(N, m) + static_cast<double>(N) * entropy_I(m);
}

double stirling_prefactor(int N, double m) {
  return 0.5 * std::log(2.0 / (std::numbers::pi * static_cast<double>(N) * (1.0 - m * m)));
}

double lemma1_lower_bound(int N, double m) {
  const double dn = static_cast<double>(N);
  return stirling_prefactor(N, m) + 1.0 / (12.0 * dn + 1.0) - 1.0 / (3.0 * dn * (1.0 - m * m));
}

}  // namespace mfising

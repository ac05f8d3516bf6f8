#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace mfising {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

// Parameter triple of the mean-field model. Component order is (K, J, h)
// everywhere: vectors, matrices, CSV columns and JSON arrays.
struct Theta {
  double K = 0.0;  // three-body coupling
  double J = 0.0;  // two-body coupling
  double h = 0.0;  // external field

  [[nodiscard]] Vec3 vec() const { return {K, J, h}; }
  [[nodiscard]] static Theta from(const Vec3& v) { return {v[0], v[1], v[2]}; }
  [[nodiscard]] bool finite() const {
    return std::isfinite(K) && std::isfinite(J) && std::isfinite(h);
  }
  friend bool operator==(const Theta&, const Theta&) = default;
};

std::string to_string(const Theta& theta);

// Invalid arguments: out-of-range inputs, non-finite parameters, bad config.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Input data that violates the model support (off-spectrum values, empty sets).
class DataError : public DomainError {
 public:
  DataError(const std::string& what, std::ptrdiff_t row = -1)
      : DomainError(what), row_(row) {}
  [[nodiscard]] std::ptrdiff_t row() const { return row_; }

 private:
  std::ptrdiff_t row_;
};

// Numerical breakdown: failed factorisation, non-convergence.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConvergenceError : public NumericalError {
 public:
  ConvergenceError(const std::string& what, double last_iterate, double residual)
      : NumericalError(what), last_iterate_(last_iterate), residual_(residual) {}
  [[nodiscard]] double last_iterate() const { return last_iterate_; }
  [[nodiscard]] double residual() const { return residual_; }

 private:
  double last_iterate_;
  double residual_;
};

}  // namespace mfising

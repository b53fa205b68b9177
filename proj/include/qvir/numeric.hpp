#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace qvir {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

// Truncation knobs shared by every infinite product and sum.
struct NumericConfig {
  double tail_epsilon = 1e-14;
  std::size_t term_cap = 100000;
  // Consecutive below-threshold terms required before a sum is declared converged.
  int quiet_terms = 3;
};

class QvirError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input outside the domain of a function (|q| >= 1 for an infinite product, z = 0, ...).
class DomainError : public QvirError {
 public:
  using QvirError::QvirError;
};

// Evaluation hit a pole of the function.
class PoleError : public QvirError {
 public:
  using QvirError::QvirError;
};

// A sum or product failed to converge within the term cap.
class ConvergenceError : public QvirError {
 public:
  using QvirError::QvirError;
};

class ConfigError : public QvirError {
 public:
  using QvirError::QvirError;
};

}  // namespace qvir

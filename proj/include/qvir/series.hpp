#pragma once

#include <functional>
#include <map>
#include <span>
#include <vector>

#include "qvir/numeric.hpp"
#include "qvir/report.hpp"

namespace qvir {

// Truncated Laurent series  x^{prefactor_exponent} * sum_{k=lo}^{hi} c_k x^k.
//
// Coefficients outside [lo, hi] are unknown, not zero; arithmetic only ever
// reports coefficients it can determine exactly from the inputs.  The series
// is taken to have no terms below `lo` (it is bounded below).
class LaurentSeries {
 public:
  LaurentSeries() = default;
  LaurentSeries(int lo, int hi, cplx prefactor_exponent = 0.0);

  static LaurentSeries constant(cplx c, int order);
  static LaurentSeries from_coefficients(int lo, std::vector<cplx> coeffs,
                                         cplx prefactor_exponent = 0.0);

  int lo() const { return lo_; }
  int hi() const { return hi_; }
  cplx prefactor_exponent() const { return prefactor_exponent_; }
  bool is_zero() const;

  // Coefficient of x^k; zero below lo, throws DomainError above hi.
  cplx coeff(int k) const;
  void set(int k, cplx value);
  const std::vector<cplx>& coefficients() const { return c_; }

  LaurentSeries truncated(int hi) const;
  LaurentSeries scaled(cplx factor) const;
  // Multiply by x^shift.
  LaurentSeries shifted(int shift) const;
  // Substitute x -> factor * x (prefactor exponent handled by the caller).
  LaurentSeries argument_scaled(cplx factor) const;

  // Partial sum at a point (no convergence claim).
  cplx evaluate(cplx x) const;

 private:
  int lo_ = 0;
  int hi_ = -1;
  cplx prefactor_exponent_ = 0.0;
  std::vector<cplx> c_;
};

// exp(sum_{n=1}^{order} log_coeffs(n) x^n), truncated at x^order.
LaurentSeries series_exp(const std::function<cplx(int)>& log_coeffs, int order);
LaurentSeries series_mul(const LaurentSeries& a, const LaurentSeries& b);
LaurentSeries series_add(const LaurentSeries& a, const LaurentSeries& b);
// Multiplicative inverse of a power series with nonzero leading coefficient.
LaurentSeries series_inverse(const LaurentSeries& a);
inline cplx series_coeff(const LaurentSeries& a, int k) { return a.coeff(k); }

// Bilateral coefficient table for a two-variable matrix element
//
//     z^{z_exponent} w^{w_exponent} sum_J c_J (w/z)^J,
//
// known exactly for J in [lo, hi].  Exponents are complex because zero-mode
// monomials carry powers such as sqrt(beta) * momentum.
class CoeffTable {
 public:
  CoeffTable() = default;
  // Entries outside [lo, hi] are zero on a side flagged `zero_below` /
  // `zero_above`, and unknown otherwise.
  CoeffTable(int lo, int hi, cplx z_exponent = 0.0, cplx w_exponent = 0.0, bool zero_below = false,
             bool zero_above = false);

  int lo() const { return lo_; }
  int hi() const { return hi_; }
  cplx z_exponent() const { return z_exp_; }
  cplx w_exponent() const { return w_exp_; }

  bool zero_below() const { return zero_below_; }
  bool zero_above() const { return zero_above_; }
  bool finite() const { return zero_below_ && zero_above_; }

  // Entry J; zero outside the window on flagged sides, DomainError otherwise.
  cplx at(int j) const;
  cplx& operator[](int j);
  bool is_zero() const;

  // Move integer parts of the z exponent into the w/z grading so two tables
  // describing the same function compare entry by entry.
  CoeffTable canonical() const;
  bool monomial_matches(const CoeffTable& other, double tol = 1e-10) const;

  CoeffTable& operator+=(const CoeffTable& other);
  CoeffTable& operator-=(const CoeffTable& other);
  CoeffTable& operator*=(cplx s);

  // Multiply by (w/z)^k.
  CoeffTable shifted(int k) const;
  // Multiply by a power series in w/z (`in_inverse` = false) or in z/w (true).
  CoeffTable times_series(const LaurentSeries& s, bool in_inverse) const;
  // Multiply by delta(alpha w/z) = sum_n alpha^n (w/z)^n over [lo, hi].
  // The input must be a finite table (all nonzero entries inside its window).
  CoeffTable times_delta(cplx alpha, int lo, int hi) const;
  // Substitute w -> e^{log_xi} w.
  CoeffTable w_scaled(cplx log_xi) const;
  // Restrict the known window.
  CoeffTable window(int lo, int hi) const;

 private:
  int lo_ = 0;
  int hi_ = -1;
  cplx z_exp_ = 0.0;
  cplx w_exp_ = 0.0;
  bool zero_below_ = false;
  bool zero_above_ = false;
  std::vector<cplx> c_;
};

// Coefficient-wise comparison of two tables over [lo, hi]; returns the max
// absolute difference and the index where it occurs.
struct TableDiff {
  double residual = 0.0;
  int worst = 0;
  double scale = 0.0;
};
TableDiff compare_tables(const CoeffTable& a, const CoeffTable& b, int lo, int hi);

// exp(sum (1/n)(1 - sum r_i^n) x^n) - (-x)^{m-1} prod r_i exp(sum (1/n)(1 - sum r_i^{-n}) x^{-n})
//   = prod (1 - r_i) delta(x),  checked on powers -window..window.
CheckReport check_delta_identity(std::span<const cplx> r, int window, double tol = 1e-10);

}  // namespace qvir

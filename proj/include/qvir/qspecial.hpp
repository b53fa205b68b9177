#pragma once

#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "qvir/numeric.hpp"

namespace qvir {

// Deformation parameters (q, t) with beta = log t / log q and p = q / t.
//
// The logarithms are the primary data: every fractional power q^e is
// evaluated as exp(e log q), so the involutions below act exactly
// (log q -> -log q) and never re-take a branch.
class QParams {
 public:
  // Default regime: 0 < |q|, |t| < 1.  q == t is accepted here (p = 1 is a
  // removable singularity handled by the checkers); the CLI rejects it.
  static QParams make(cplx q, cplx t);
  // No regime checks; used for involution images where |q| > 1.
  static QParams from_logs(cplx log_q, cplx log_t, cplx sqrt_beta);

  cplx q() const { return std::exp(log_q_); }
  cplx t() const { return std::exp(log_t_); }
  cplx p() const { return std::exp(log_p()); }
  cplx log_q() const { return log_q_; }
  cplx log_t() const { return log_t_; }
  cplx log_p() const { return log_q_ - log_t_; }
  cplx beta() const { return sqrt_beta_ * sqrt_beta_; }
  cplx sqrt_beta() const { return sqrt_beta_; }

  cplx q_pow(cplx e) const { return std::exp(e * log_q_); }
  cplx t_pow(cplx e) const { return std::exp(e * log_t_); }
  cplx p_pow(cplx e) const { return std::exp(e * log_p()); }

  // (q, t) -> (1/q, 1/t); beta unchanged.
  QParams theta() const;
  // q <-> t; sqrt(beta) -> 1/sqrt(beta).
  QParams omega() const;

 private:
  QParams(cplx log_q, cplx log_t, cplx sqrt_beta)
      : log_q_(log_q), log_t_(log_t), sqrt_beta_(sqrt_beta) {}
  cplx log_q_;
  cplx log_t_;
  cplx sqrt_beta_;
};

// Grid parameters of the theta bracket [u]: x = q^{1/(2 r ell)}, epsilon = -2 pi^2 / log x.
struct BracketParams {
  double r = 1.0;
  int ell = 1;
  cplx log_x;
  cplx x;
  cplx epsilon;

  static BracketParams make(cplx q, double r, int ell);
};

inline constexpr std::size_t kInfiniteOrder = std::numeric_limits<std::size_t>::max();

// (a; q_1, ..., q_l)_n.  With n == kInfiniteOrder every base must satisfy |q_i| < 1.
cplx pochhammer(cplx a, std::span<const cplx> bases, std::size_t n,
                const NumericConfig& cfg = {});
cplx pochhammer(cplx a, cplx base, std::size_t n, const NumericConfig& cfg = {});
// Product over several first arguments sharing the same bases.
cplx pochhammer_multi(std::span<const cplx> as, std::span<const cplx> bases, std::size_t n,
                      const NumericConfig& cfg = {});

cplx gamma_q(cplx z, cplx q, const NumericConfig& cfg = {});
cplx beta_q(cplx x, cplx y, cplx q, const NumericConfig& cfg = {});
cplx theta_q(cplx z, cplx q, const NumericConfig& cfg = {});
cplx phi21(cplx a, cplx b, cplx c, cplx q, cplx z, const NumericConfig& cfg = {});

enum class JacksonKind { kZeroToA, kZeroToAInfinity, kAToB };

// Jackson q-integral.  For kZeroToA / kZeroToAInfinity only `a` is used; for
// kAToB the integral runs from `a` to `b`.
cplx jackson_integral(const std::function<cplx(cplx)>& f, JacksonKind kind, cplx a, cplx b,
                      cplx q, const NumericConfig& cfg = {});

// Theta bracket [u] = sqrt(2 pi r / eps) x^{r/4} x^{u(u-r)/r} theta_{x^{2r}}(x^{2u}).
// The sqrt(2 pi r / eps) constant cancels from every ratio of brackets.
cplx bracket(cplx u, const BracketParams& params, const NumericConfig& cfg = {});

}  // namespace qvir

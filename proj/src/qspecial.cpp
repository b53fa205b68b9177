#include "qvir/qspecial.hpp"

#include <cmath>
#include <sstream>

namespace qvir {

namespace {

std::string describe(cplx z) {
  std::ostringstream os;
  os.precision(17);
  os << "(" << z.real() << "," << z.imag() << ")";
  return os.str();
}

// Infinite multi-base product, recursing over the bases.  `scale` bounds the
// contribution of the remaining bases so the tail test stays conservative.
cplx poch_infinite(cplx a, std::span<const cplx> bases, const NumericConfig& cfg) {
  if (bases.empty()) return 1.0 - a;
  const cplx base = bases.front();
  const auto rest = bases.subspan(1);
  double rest_scale = 1.0;
  for (cplx b : rest) rest_scale /= (1.0 - std::abs(b));
  const double denom = 1.0 - std::abs(base);

  cplx result = 1.0;
  cplx arg = a;
  for (std::size_t k = 0; k < cfg.term_cap; ++k) {
    // Remaining factors contribute at most exp(tail) - 1 relative change.
    const double tail = std::abs(arg) * rest_scale / denom;
    if (tail < cfg.tail_epsilon) return result;
    result *= poch_infinite(arg, rest, cfg);
    if (result == cplx(0.0)) return result;
    arg *= base;
  }
  throw ConvergenceError("pochhammer: term cap reached for a = " + describe(a));
}

cplx poch_finite(cplx a, std::span<const cplx> bases, std::size_t n) {
  if (bases.empty()) return 1.0 - a;
  const auto rest = bases.subspan(1);
  cplx result = 1.0;
  cplx arg = a;
  for (std::size_t k = 0; k < n; ++k) {
    result *= poch_finite(arg, rest, n);
    arg *= bases.front();
  }
  return result;
}

}  // namespace

QParams QParams::make(cplx q, cplx t) {
  if (q == cplx(0.0) || t == cplx(0.0)) throw DomainError("QParams: q and t must be nonzero");
  if (std::abs(q) >= 1.0 || std::abs(t) >= 1.0)
    throw DomainError("QParams: default regime requires |q| < 1 and |t| < 1, got q = " +
                      describe(q) + ", t = " + describe(t));
  const cplx lq = std::log(q);
  const cplx lt = std::log(t);
  return QParams(lq, lt, std::sqrt(lt / lq));
}

QParams QParams::from_logs(cplx log_q, cplx log_t, cplx sqrt_beta) {
  return QParams(log_q, log_t, sqrt_beta);
}

QParams QParams::theta() const { return QParams(-log_q_, -log_t_, sqrt_beta_); }

QParams QParams::omega() const { return QParams(log_t_, log_q_, 1.0 / sqrt_beta_); }

BracketParams BracketParams::make(cplx q, double r, int ell) {
  if (!(r > 0.0)) throw DomainError("bracket: r must be positive");
  if (ell < 1) throw DomainError("bracket: ell must be >= 1");
  if (q == cplx(0.0)) throw DomainError("bracket: q must be nonzero");
  BracketParams bp;
  bp.r = r;
  bp.ell = ell;
  bp.log_x = std::log(q) / (2.0 * r * ell);
  bp.x = std::exp(bp.log_x);
  bp.epsilon = -2.0 * kPi * kPi / bp.log_x;
  return bp;
}

cplx pochhammer(cplx a, std::span<const cplx> bases, std::size_t n, const NumericConfig& cfg) {
  if (n == 0) return 1.0;
  if (n != kInfiniteOrder) return poch_finite(a, bases, n);
  for (cplx b : bases) {
    if (std::abs(b) >= 1.0)
      throw DomainError("pochhammer: infinite product needs |base| < 1, got " + describe(b));
  }
  if (a == cplx(0.0)) return 1.0;
  if (bases.size() == 1) {
    // Exact zero factor 1 - a q^k (k >= 0).  Checked up front because for
    // large |a| the partial product overflows long before reaching it.
    const cplx k = -std::log(a) / std::log(bases[0]);
    const double kr = std::round(k.real());
    if (kr >= 0.0 && std::abs(k - kr) < 1e-9 &&
        std::abs(1.0 - a * std::pow(bases[0], kr)) < 1e-12)
      return 0.0;
  }
  return poch_infinite(a, bases, cfg);
}

cplx pochhammer(cplx a, cplx base, std::size_t n, const NumericConfig& cfg) {
  const cplx bases[] = {base};
  return pochhammer(a, bases, n, cfg);
}

cplx pochhammer_multi(std::span<const cplx> as, std::span<const cplx> bases, std::size_t n,
                      const NumericConfig& cfg) {
  cplx result = 1.0;
  for (cplx a : as) result *= pochhammer(a, bases, n, cfg);
  return result;
}

cplx gamma_q(cplx z, cplx q, const NumericConfig& cfg) {
  if (std::abs(q) >= 1.0) throw DomainError("gamma_q: |q| < 1 required");
  const cplx qz = std::exp(z * std::log(q));
  // Pole when q^{z+k} = 1 for some k >= 0, i.e. z a non-positive integer.
  const double zr = z.real();
  if (std::abs(z.imag()) < 1e-12 && zr <= 0.5 && std::abs(zr - std::round(zr)) < 1e-12)
    throw PoleError("gamma_q: pole at z = " + describe(z));
  const cplx denom = pochhammer(qz, q, kInfiniteOrder, cfg);
  if (std::abs(denom) < 1e-300) throw PoleError("gamma_q: pole at z = " + describe(z));
  return std::exp((1.0 - z) * std::log(1.0 - q)) * pochhammer(q, q, kInfiniteOrder, cfg) / denom;
}

cplx beta_q(cplx x, cplx y, cplx q, const NumericConfig& cfg) {
  return gamma_q(x, q, cfg) * gamma_q(y, q, cfg) / gamma_q(x + y, q, cfg);
}

cplx theta_q(cplx z, cplx q, const NumericConfig& cfg) {
  if (z == cplx(0.0)) throw DomainError("theta_q: z = 0");
  if (std::abs(q) >= 1.0) throw DomainError("theta_q: |q| < 1 required");
  return pochhammer(q, q, kInfiniteOrder, cfg) * pochhammer(z, q, kInfiniteOrder, cfg) *
         pochhammer(q / z, q, kInfiniteOrder, cfg);
}

cplx phi21(cplx a, cplx b, cplx c, cplx q, cplx z, const NumericConfig& cfg) {
  if (std::abs(q) >= 1.0) throw DomainError("phi21: |q| < 1 required");
  if (std::abs(z) >= 1.0) throw ConvergenceError("phi21: series needs |z| < 1, got z = " + describe(z));
  cplx sum = 0.0;
  cplx term = 1.0;
  cplx qn = 1.0;
  int quiet = 0;
  for (std::size_t n = 0; n < cfg.term_cap; ++n) {
    sum += term;
    const cplx cq = c * qn;
    if (std::abs(1.0 - cq) < 1e-15) throw PoleError("phi21: pole, c q^n = 1 at n = " + std::to_string(n));
    const cplx ratio = (1.0 - a * qn) * (1.0 - b * qn) / ((1.0 - q * qn) * (1.0 - cq)) * z;
    term *= ratio;
    qn *= q;
    // Once the term ratio is below 1 the tail is bounded by a geometric series.
    const double r = std::abs(ratio);
    const bool bounded = r < 1.0 && std::abs(term) / (1.0 - r) <= cfg.tail_epsilon * std::abs(sum);
    if (term == cplx(0.0) || bounded) {
      if (++quiet >= cfg.quiet_terms) return sum + term;
    } else {
      quiet = 0;
    }
  }
  throw ConvergenceError("phi21: term cap reached");
}

namespace {

// sum_{n in direction} f(a q^n) q^n, stopping after quiet_terms consecutive
// terms that no longer change the partial sum (the summands decay
// geometrically in the convergent regime, so the tail is below rounding).
cplx jackson_direction(const std::function<cplx(cplx)>& f, cplx a, cplx q, int start, int step,
                       const NumericConfig& cfg, const char* direction) {
  cplx sum = 0.0;
  int quiet = 0;
  const cplx lq = std::log(q);
  for (std::size_t i = 0; i < cfg.term_cap; ++i) {
    const int n = start + step * static_cast<int>(i);
    const cplx qn = std::exp(static_cast<double>(n) * lq);
    const cplx term = f(a * qn) * qn;
    const cplx before = sum;
    sum += term;
    if (!std::isfinite(sum.real()) || !std::isfinite(sum.imag()))
      throw ConvergenceError(std::string("jackson_integral: summand overflows in the ") + direction + " direction");
    if (sum == before) {
      if (++quiet >= cfg.quiet_terms) return sum;
    } else {
      quiet = 0;
    }
  }
  throw ConvergenceError(std::string("jackson_integral: summand does not decay in the ") + direction +
                         " direction within the term cap");
}

}  // namespace

cplx jackson_integral(const std::function<cplx(cplx)>& f, JacksonKind kind, cplx a, cplx b, cplx q,
                      const NumericConfig& cfg) {
  if (std::abs(q) >= 1.0) throw DomainError("jackson_integral: |q| < 1 required");
  switch (kind) {
    case JacksonKind::kZeroToA:
      if (a == cplx(0.0)) return 0.0;
      return a * (1.0 - q) * jackson_direction(f, a, q, 0, 1, cfg, "n -> +infinity");
    case JacksonKind::kZeroToAInfinity: {
      if (a == cplx(0.0)) return 0.0;
      const cplx pos = jackson_direction(f, a, q, 0, 1, cfg, "n -> +infinity");
      const cplx neg = jackson_direction(f, a, q, -1, -1, cfg, "n -> -infinity");
      return a * (1.0 - q) * (pos + neg);
    }
    case JacksonKind::kAToB:
      if (a == b) return 0.0;
      return jackson_integral(f, JacksonKind::kZeroToA, b, 0.0, q, cfg) -
             jackson_integral(f, JacksonKind::kZeroToA, a, 0.0, q, cfg);
  }
  throw DomainError("jackson_integral: unknown kind");
}

cplx bracket(cplx u, const BracketParams& params, const NumericConfig& cfg) {
  const double r = params.r;
  const cplx lx = params.log_x;
  const cplx nome = std::exp(2.0 * r * lx);
  const cplx arg = std::exp(2.0 * u * lx);
  const cplx constant = std::sqrt(2.0 * kPi * r / params.epsilon);
  return constant * std::exp((r / 4.0) * lx) * std::exp(u * (u - r) / r * lx) *
         theta_q(arg, nome, cfg);
}

}  // namespace qvir

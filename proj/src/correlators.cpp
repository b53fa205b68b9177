#include "qvir/correlators.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

namespace qvir {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

struct TwoPointFactors {
  cplx p_base;
  std::vector<cplx> num, den;  // first arguments (times w/z) of the double Pochhammers
};

TwoPointFactors two_point_factors(int ell, const QParams& P) {
  TwoPointFactors f;
  const bool small_p = std::abs(P.p()) < 1.0;
  f.p_base = small_p ? P.p_pow(2.0) : P.p_pow(-2.0);
  for (int j = 1; j <= ell; ++j) {
    const cplx qj = P.q_pow(static_cast<double>(j) / ell);
    if (small_p) {
      f.num.push_back(qj / P.t());
      f.num.push_back(P.p() * qj);
      f.den.push_back(qj);
      f.den.push_back(P.p() * qj / P.t());
    } else {
      // (q^{-1} Q_j x, t^2 q^{-2} Q_j x; p^{-2}, Q) / (t q^{-1} Q_j x, t q^{-2} Q_j x; p^{-2}, Q)
      f.num.push_back(qj / P.q());
      f.num.push_back(P.t() * P.t() / (P.q() * P.q()) * qj);
      f.den.push_back(P.t() / P.q() * qj);
      f.den.push_back(P.t() / (P.q() * P.q()) * qj);
    }
  }
  return f;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

cplx two_point(int ell, const QParams& params, cplx z, cplx w, const NumericConfig& cfg) {
  if (ell < 1) throw DomainError("two_point: ell must be positive");
  if (z == cplx(0.0)) throw DomainError("two_point: z = 0");
  const TwoPointFactors f = two_point_factors(ell, params);
  const cplx x = w / z;
  const cplx bases[] = {f.p_base, params.q_pow(1.0 / ell)};
  cplx v = std::exp(static_cast<double>(ell * ell) * params.beta() / 2.0 * std::log(z));
  for (cplx a : f.num) v *= pochhammer(a * x, bases, kInfiniteOrder, cfg);
  for (cplx a : f.den) {
    const cplx d = pochhammer(a * x, bases, kInfiniteOrder, cfg);
    if (std::abs(d) < 1e-300) throw PoleError("two_point: denominator factor vanishes at w/z");
    v /= d;
  }
  return v;
}

LaurentSeries two_point_series(int ell, const QParams& params, int order) {
  const TwoPointFactors f = two_point_factors(ell, params);
  const cplx Q = params.q_pow(1.0 / ell);
  // log (a x; p, Q)_inf = -sum_n a^n x^n / (n (1 - p^n)(1 - Q^n))
  auto log_coeff = [&](int n) {
    cplx s = 0.0;
    for (cplx a : f.num) s -= std::pow(a, n);
    for (cplx a : f.den) s += std::pow(a, n);
    return s / (static_cast<double>(n) * (1.0 - std::pow(f.p_base, n)) * (1.0 - std::pow(Q, n)));
  };
  LaurentSeries s = series_exp(log_coeff, order);
  return LaurentSeries::from_coefficients(0, s.coefficients(), static_cast<double>(ell * ell) * params.beta() / 2.0);
}

cplx sv_factor(int ell, const QParams& params, cplx z, cplx mu, const NumericConfig& cfg) {
  const cplx Q = params.q_pow(1.0 / ell);
  const cplx c = params.q_pow(1.0 / (2.0 * ell));
  const cplx y = z / mu;
  return std::exp(-static_cast<double>(ell) * params.beta() * std::log(mu)) *
         pochhammer(params.t_pow(0.5) * c * y, Q, kInfiniteOrder, cfg) /
         pochhammer(params.t_pow(-0.5) * c * y, Q, kInfiniteOrder, cfg);
}

cplx vs_factor(int ell, const QParams& params, cplx z, cplx mu, const NumericConfig& cfg) {
  const cplx Q = params.q_pow(1.0 / ell);
  const cplx c = params.q_pow(1.0 / (2.0 * ell));
  const cplx y = mu / z;
  return std::exp(-static_cast<double>(ell) * params.beta() * std::log(z)) *
         pochhammer(params.t_pow(0.5) * c * y, Q, kInfiniteOrder, cfg) /
         pochhammer(params.t_pow(-0.5) * c * y, Q, kInfiniteOrder, cfg);
}

CheckReport pseudo_constant_check(int ell, const QParams& params, cplx ratio_point, double tol) {
  const auto start = Clock::now();
  CheckReport rep;
  rep.identity = "pseudo-constant";
  rep.config.q = params.q().real();
  rep.config.t = params.t().real();
  rep.config.ell = ell;
  rep.config.tolerance = tol;
  if (ratio_point == cplx(0.0)) throw DomainError("pseudo_constant_check: ratio point must be nonzero");
  if (std::abs(params.log_q()) < 1e-12) throw DomainError("pseudo_constant_check: q = 1 gives a trivial shift");
  try {
    auto ratio = [&](cplx y) { return sv_factor(ell, params, y, 1.0) / vs_factor(ell, params, y, 1.0); };
    const cplx a = ratio(ratio_point);
    const cplx b = ratio(params.q_pow(1.0 / ell) * ratio_point);
    rep.residual = std::abs(a - b) / std::abs(a);
    rep.worst_location = "z/mu=" + fmt(ratio_point.real());
  } catch (const QvirError& e) {
    CheckReport bad = inconclusive_report(rep.identity, rep.config, e.what());
    bad.runtime_ms = elapsed_ms(start);
    return bad;
  }
  rep.decide();
  rep.runtime_ms = elapsed_ms(start);
  return rep;
}

// ------------------------------------------------------------ four-point functions

std::string regime_violation(const CorrelatorParams& cp) {
  const cplx beta = cp.q.beta();
  if (std::abs(beta.imag()) > 1e-12 || std::abs(cp.L.imag()) > 1e-12) return "complex beta or L outside the checked regime";
  const double lb = cp.ell * beta.real();
  const double Lb = (cp.L * beta).real();
  if (!(lb > 0.0 && lb < 1.0)) return "ell*beta = " + fmt(lb) + " outside (0,1)";
  if (!(Lb > 0.0 && Lb < 1.0)) return "L*beta = " + fmt(Lb) + " outside (0,1)";
  return {};
}

namespace {

cplx cpow(cplx base, cplx e) { return std::exp(e * std::log(base)); }

// <VV> (zw)^{ell L beta / 2}
cplx four_point_prefactor(cplx z, cplx w, const CorrelatorParams& cp, const NumericConfig& cfg) {
  return two_point(cp.ell, cp.q, z, w, cfg) * cpow(z * w, static_cast<double>(cp.ell) * cp.L * cp.q.beta() / 2.0);
}

}  // namespace

cplx four_point_closed(Screening s, cplx z, cplx w, const CorrelatorParams& cp, const NumericConfig& cfg) {
  const QParams& P = cp.q;
  const int ell = cp.ell;
  const cplx a = cp.a(), b = cp.b(), Q = cp.base();
  const cplx arg = P.q_pow((1.0 - a) / static_cast<double>(ell)) * w / z;
  auto qe = [&](cplx e) { return P.q_pow(e / static_cast<double>(ell)); };
  const cplx pre = four_point_prefactor(z, w, cp, cfg);
  if (s == Screening::kPlus) {
    return pre * beta_q(2.0 * a - b, 1.0 - a, Q, cfg) *
           cpow(P.t_pow(0.5) * P.q_pow(-1.0 / (2.0 * ell)) * z, b - 2.0 * a) *
           phi21(qe(a), qe(2.0 * a - b), qe(1.0 + a - b), Q, arg, cfg);
  }
  return pre * beta_q(b, 1.0 - a, Q, cfg) * cpow(z * w, -a) * cpow(P.t_pow(-0.5) * P.q_pow(1.0 / (2.0 * ell)) * w, b) *
         phi21(qe(a), qe(b), qe(1.0 - a + b), Q, arg, cfg);
}

cplx four_point_jackson(Screening s, cplx z, cplx w, const CorrelatorParams& cp, const NumericConfig& cfg) {
  const QParams& P = cp.q;
  const int ell = cp.ell;
  const cplx Q = cp.base();
  const cplx Lb = cp.L * P.beta();
  const cplx pre = four_point_prefactor(z, w, cp, cfg);
  // S_+(mu) with V_L(0): mu^{-L beta}.
  if (s == Screening::kPlus) {
    auto f = [&](cplx mu) {
      return sv_factor(ell, P, z, mu, cfg) * sv_factor(ell, P, w, mu, cfg) * cpow(mu, -Lb);
    };
    const cplx A = P.t_pow(0.5) * P.q_pow(1.0 / (2.0 * ell)) * z;
    // int_A^{A infinity} = bilateral - unilateral
    return pre * (jackson_integral(f, JacksonKind::kZeroToAInfinity, A, 0.0, Q, cfg) -
                  jackson_integral(f, JacksonKind::kZeroToA, A, 0.0, Q, cfg));
  }
  auto f = [&](cplx mu) {
    return vs_factor(ell, P, z, mu, cfg) * vs_factor(ell, P, w, mu, cfg) * cpow(mu, -Lb);
  };
  const cplx B = P.t_pow(-0.5) * P.q_pow(1.0 / (2.0 * ell)) * w;
  return pre * jackson_integral(f, JacksonKind::kZeroToA, B, 0.0, Q, cfg);
}

CheckReport check_four_point(const CorrelatorParams& cp, cplx z, cplx w, double tol, const NumericConfig& cfg) {
  const auto start = Clock::now();
  CheckReport rep;
  rep.identity = "four-point";
  rep.config.q = cp.q.q().real();
  rep.config.t = cp.q.t().real();
  rep.config.ell = cp.ell;
  rep.config.L = cp.L.real();
  rep.config.tolerance = tol;
  if (const std::string why = regime_violation(cp); !why.empty()) {
    CheckReport bad = inconclusive_report(rep.identity, rep.config, why);
    bad.runtime_ms = elapsed_ms(start);
    return bad;
  }
  try {
    for (Screening s : {Screening::kPlus, Screening::kMinus}) {
      const cplx closed = four_point_closed(s, z, w, cp, cfg);
      const cplx sum = four_point_jackson(s, z, w, cp, cfg);
      const double r = std::abs(closed - sum) / std::abs(closed);
      if (!(r <= rep.residual)) {
        rep.residual = r;
        rep.worst_location = std::string(s == Screening::kPlus ? "U+" : "U-") + " at w/z=" + fmt((w / z).real());
      }
    }
  } catch (const QvirError& e) {
    CheckReport bad = inconclusive_report(rep.identity, rep.config, e.what());
    bad.runtime_ms = elapsed_ms(start);
    return bad;
  }
  rep.decide();
  rep.runtime_ms = elapsed_ms(start);
  return rep;
}

// ------------------------------------------------------------ connection matrix

cplx u_from_ratio(cplx ratio, const CorrelatorParams& cp) {
  const BracketParams bp = BracketParams::make(cp.q.q(), cp.r, cp.ell);
  return std::log(ratio) / (2.0 * bp.log_x);
}

cplx ratio_from_u(cplx u, const CorrelatorParams& cp) {
  const BracketParams bp = BracketParams::make(cp.q.q(), cp.r, cp.ell);
  return std::exp(2.0 * u * bp.log_x);
}

ConnectionMatrix connection_matrix(cplx u, const CorrelatorParams& cp, const NumericConfig& cfg) {
  const BracketParams bp = BracketParams::make(cp.q.q(), cp.r, cp.ell);
  auto br = [&](cplx v) { return bracket(v, bp, cfg); };
  const double l = cp.ell;
  const cplx L = cp.L;
  const cplx den = br(l + L) * br(u + l);
  if (std::abs(den) < 1e-300) throw PoleError("connection_matrix: [ell+L][u+ell] vanishes");
  ConnectionMatrix m;
  m.u = u;
  m.entries[0][0] = br(l) * br(-u + l + L) / den;
  m.entries[0][1] = br(L) * br(-u) / den;
  m.entries[1][0] = br(2.0 * l + L) * br(-u) / den;
  m.entries[1][1] = br(l) * br(u + l + L) / den;
  const cplx w = ratio_from_u(u, cp);
  m.prefactor = two_point(cp.ell, cp.q, 1.0, w, cfg) / two_point(cp.ell, cp.q, w, 1.0, cfg);
  return m;
}

CheckReport check_connection_formula(const std::vector<cplx>& u_samples, const CorrelatorParams& cp, double tol,
                                     bool swap_rows, const NumericConfig& cfg) {
  const auto start = Clock::now();
  CheckReport rep;
  rep.identity = swap_rows ? "connection-formula[swapped-rows]" : "connection-formula";
  rep.config.q = cp.q.q().real();
  rep.config.t = cp.q.t().real();
  rep.config.ell = cp.ell;
  rep.config.L = cp.L.real();
  rep.config.r = cp.r;
  rep.config.tolerance = tol;
  if (const std::string why = regime_violation(cp); !why.empty()) {
    CheckReport bad = inconclusive_report(rep.identity, rep.config, why);
    bad.runtime_ms = elapsed_ms(start);
    return bad;
  }
  try {
    for (cplx u : u_samples) {
      const cplx z = 1.0;
      const cplx w = ratio_from_u(u, cp);
      ConnectionMatrix m = connection_matrix(u, cp, cfg);
      if (swap_rows) std::swap(m.entries[0], m.entries[1]);
      const cplx lhs[2] = {four_point_jackson(Screening::kPlus, z, w, cp, cfg),
                           four_point_jackson(Screening::kMinus, z, w, cp, cfg)};
      const cplx rv[2] = {four_point_jackson(Screening::kPlus, w, z, cp, cfg),
                          four_point_jackson(Screening::kMinus, w, z, cp, cfg)};
      for (int i = 0; i < 2; ++i) {
        const cplx rhs = m.prefactor * (m.entries[i][0] * rv[0] + m.entries[i][1] * rv[1]);
        const double r = std::abs(lhs[i] - rhs) / std::max(std::abs(lhs[i]), std::abs(rhs));
        if (!(r <= rep.residual)) {
          rep.residual = r;
          rep.worst_location = std::string(i == 0 ? "U+" : "U-") + " row at u=" + fmt(u.real());
        }
      }
    }
  } catch (const QvirError& e) {
    CheckReport bad = inconclusive_report(rep.identity, rep.config, e.what());
    bad.runtime_ms = elapsed_ms(start);
    return bad;
  }
  rep.decide();
  rep.runtime_ms = elapsed_ms(start);
  return rep;
}

namespace {

CheckReport connection_report(const char* identity, const CorrelatorParams& cp, double tol) {
  CheckReport rep;
  rep.identity = identity;
  rep.config.q = cp.q.q().real();
  rep.config.t = cp.q.t().real();
  rep.config.ell = cp.ell;
  rep.config.L = cp.L.real();
  rep.config.r = cp.r;
  rep.config.tolerance = tol;
  return rep;
}

}  // namespace

CheckReport check_connection_identity(const CorrelatorParams& cp, double tol, const NumericConfig& cfg) {
  const auto start = Clock::now();
  CheckReport rep = connection_report("connection-identity", cp, tol);
  try {
    const ConnectionMatrix m = connection_matrix(0.0, cp, cfg);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        const double r = std::abs(m.entries[i][j] - (i == j ? 1.0 : 0.0));
        if (!(r <= rep.residual)) {
          rep.residual = r;
          rep.worst_location = "M(0)[" + std::to_string(i) + "][" + std::to_string(j) + "]";
        }
      }
  } catch (const QvirError& e) {
    CheckReport bad = inconclusive_report(rep.identity, rep.config, e.what());
    bad.runtime_ms = elapsed_ms(start);
    return bad;
  }
  rep.decide();
  rep.runtime_ms = elapsed_ms(start);
  return rep;
}

CheckReport check_connection_inversion(const std::vector<cplx>& u_samples, const CorrelatorParams& cp, double tol,
                                       const NumericConfig& cfg) {
  const auto start = Clock::now();
  CheckReport rep = connection_report("connection-inversion", cp, tol);
  try {
    for (cplx u : u_samples) {
      const ConnectionMatrix a = connection_matrix(u, cp, cfg);
      const ConnectionMatrix b = connection_matrix(-u, cp, cfg);
      auto note = [&](double r, const std::string& where) {
        if (!(r <= rep.residual)) {
          rep.residual = r;
          rep.worst_location = where + " at u=" + fmt(u.real());
        }
      };
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
          cplx s = 0.0;
          for (int k = 0; k < 2; ++k) s += a.entries[i][k] * b.entries[k][j];
          note(std::abs(s - (i == j ? 1.0 : 0.0)), "(M(u)M(-u))[" + std::to_string(i) + "][" + std::to_string(j) + "]");
        }
      note(std::abs(a.prefactor * b.prefactor - 1.0), "prefactor product");
    }
  } catch (const QvirError& e) {
    CheckReport bad = inconclusive_report(rep.identity, rep.config, e.what());
    bad.runtime_ms = elapsed_ms(start);
    return bad;
  }
  rep.decide();
  rep.runtime_ms = elapsed_ms(start);
  return rep;
}

}  // namespace qvir

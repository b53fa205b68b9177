#include "qvir/series.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace qvir {

// ---------------------------------------------------------------- LaurentSeries

LaurentSeries::LaurentSeries(int lo, int hi, cplx prefactor_exponent)
    : lo_(lo), hi_(hi), prefactor_exponent_(prefactor_exponent),
      c_(static_cast<std::size_t>(std::max(0, hi - lo + 1)), cplx(0.0)) {}

LaurentSeries LaurentSeries::constant(cplx c, int order) {
  LaurentSeries s(0, order);
  s.set(0, c);
  return s;
}

LaurentSeries LaurentSeries::from_coefficients(int lo, std::vector<cplx> coeffs, cplx prefactor_exponent) {
  LaurentSeries s(lo, lo + static_cast<int>(coeffs.size()) - 1, prefactor_exponent);
  s.c_ = std::move(coeffs);
  return s;
}

bool LaurentSeries::is_zero() const {
  return std::all_of(c_.begin(), c_.end(), [](cplx v) { return v == cplx(0.0); });
}

cplx LaurentSeries::coeff(int k) const {
  if (k < lo_) return 0.0;
  if (k > hi_) throw DomainError("LaurentSeries: coefficient " + std::to_string(k) + " beyond truncation " +
                                 std::to_string(hi_));
  return c_[static_cast<std::size_t>(k - lo_)];
}

void LaurentSeries::set(int k, cplx value) {
  if (k < lo_ || k > hi_) throw DomainError("LaurentSeries: index outside window");
  c_[static_cast<std::size_t>(k - lo_)] = value;
}

LaurentSeries LaurentSeries::truncated(int hi) const {
  LaurentSeries out(lo_, std::min(hi, hi_), prefactor_exponent_);
  for (int k = out.lo_; k <= out.hi_; ++k) out.set(k, coeff(k));
  return out;
}

LaurentSeries LaurentSeries::scaled(cplx factor) const {
  LaurentSeries out = *this;
  for (auto& v : out.c_) v *= factor;
  return out;
}

LaurentSeries LaurentSeries::shifted(int shift) const {
  LaurentSeries out = *this;
  out.lo_ += shift;
  out.hi_ += shift;
  return out;
}

LaurentSeries LaurentSeries::argument_scaled(cplx factor) const {
  LaurentSeries out = *this;
  for (int k = lo_; k <= hi_; ++k) out.set(k, coeff(k) * std::pow(factor, k));
  return out;
}

cplx LaurentSeries::evaluate(cplx x) const {
  cplx sum = 0.0;
  for (int k = hi_; k >= lo_; --k) sum = sum * x + coeff(k);
  return sum * std::pow(x, lo_) * (prefactor_exponent_ == cplx(0.0) ? cplx(1.0) : std::pow(x, prefactor_exponent_));
}

LaurentSeries series_exp(const std::function<cplx(int)>& log_coeffs, int order) {
  if (order < 0) throw DomainError("series_exp: negative order");
  std::vector<cplx> c(static_cast<std::size_t>(order + 1), 0.0);
  std::vector<cplx> a(static_cast<std::size_t>(order + 1), 0.0);
  for (int n = 1; n <= order; ++n) c[n] = log_coeffs(n);
  a[0] = 1.0;
  for (int k = 1; k <= order; ++k) {
    cplx acc = 0.0;
    for (int j = 1; j <= k; ++j) acc += static_cast<double>(j) * c[j] * a[k - j];
    a[k] = acc / static_cast<double>(k);
  }
  return LaurentSeries::from_coefficients(0, std::move(a));
}

LaurentSeries series_mul(const LaurentSeries& a, const LaurentSeries& b) {
  const int lo = a.lo() + b.lo();
  const int hi = std::min(a.hi() + b.lo(), b.hi() + a.lo());
  if (hi < lo) throw DomainError("series_mul: truncation windows do not overlap");
  LaurentSeries out(lo, hi, a.prefactor_exponent() + b.prefactor_exponent());
  for (int k = lo; k <= hi; ++k) {
    cplx acc = 0.0;
    for (int i = a.lo(); i <= k - b.lo(); ++i) acc += a.coeff(i) * b.coeff(k - i);
    out.set(k, acc);
  }
  return out;
}

LaurentSeries series_add(const LaurentSeries& a, const LaurentSeries& b) {
  if (std::abs(a.prefactor_exponent() - b.prefactor_exponent()) > 1e-12)
    throw DomainError("series_add: prefactor exponents differ");
  const int lo = std::min(a.lo(), b.lo());
  const int hi = std::min(a.hi(), b.hi());
  if (hi < lo) throw DomainError("series_add: empty window");
  LaurentSeries out(lo, hi, a.prefactor_exponent());
  for (int k = lo; k <= hi; ++k) out.set(k, a.coeff(k) + b.coeff(k));
  return out;
}

LaurentSeries series_inverse(const LaurentSeries& a) {
  const cplx lead = a.coeff(a.lo());
  if (lead == cplx(0.0)) throw DomainError("series_inverse: vanishing leading coefficient");
  const int order = a.hi() - a.lo();
  LaurentSeries out(-a.lo(), -a.lo() + order, -a.prefactor_exponent());
  std::vector<cplx> b(static_cast<std::size_t>(order + 1), 0.0);
  b[0] = 1.0 / lead;
  for (int k = 1; k <= order; ++k) {
    cplx acc = 0.0;
    for (int j = 1; j <= k; ++j) acc += a.coeff(a.lo() + j) * b[k - j];
    b[k] = -acc / lead;
  }
  for (int k = 0; k <= order; ++k) out.set(-a.lo() + k, b[k]);
  return out;
}

// ------------------------------------------------------------------ CoeffTable

CoeffTable::CoeffTable(int lo, int hi, cplx z_exponent, cplx w_exponent, bool zero_below, bool zero_above)
    : lo_(lo), hi_(hi), z_exp_(z_exponent), w_exp_(w_exponent), zero_below_(zero_below),
      zero_above_(zero_above), c_(static_cast<std::size_t>(std::max(0, hi - lo + 1)), cplx(0.0)) {}

cplx CoeffTable::at(int j) const {
  if (j >= lo_ && j <= hi_) return c_[static_cast<std::size_t>(j - lo_)];
  if ((j < lo_ && zero_below_) || (j > hi_ && zero_above_)) return 0.0;
  throw DomainError("CoeffTable: entry " + std::to_string(j) + " outside known window [" +
                    std::to_string(lo_) + ", " + std::to_string(hi_) + "]");
}

cplx& CoeffTable::operator[](int j) {
  if (j < lo_ || j > hi_) throw DomainError("CoeffTable: write outside window");
  return c_[static_cast<std::size_t>(j - lo_)];
}

bool CoeffTable::is_zero() const {
  return finite() && std::all_of(c_.begin(), c_.end(), [](cplx v) { return v == cplx(0.0); });
}

CoeffTable CoeffTable::canonical() const {
  const int k = static_cast<int>(std::lround(z_exp_.real()));
  if (k == 0) return *this;
  // z^k = w^k (w/z)^{-k}
  CoeffTable out = *this;
  out.z_exp_ -= static_cast<double>(k);
  out.w_exp_ += static_cast<double>(k);
  out.lo_ -= k;
  out.hi_ -= k;
  return out;
}

bool CoeffTable::monomial_matches(const CoeffTable& other, double tol) const {
  const CoeffTable a = canonical();
  const CoeffTable b = other.canonical();
  return std::abs(a.z_exp_ - b.z_exp_) < tol && std::abs(a.w_exp_ - b.w_exp_) < tol;
}

namespace {

// Window of a sum/difference given each side's window and zero flags.
void combined_window(const CoeffTable& a, const CoeffTable& b, int& lo, int& hi, bool& zb, bool& za) {
  zb = a.zero_below() && b.zero_below();
  za = a.zero_above() && b.zero_above();
  lo = zb ? std::min(a.lo(), b.lo())
          : std::max(a.zero_below() ? std::numeric_limits<int>::min() : a.lo(),
                     b.zero_below() ? std::numeric_limits<int>::min() : b.lo());
  hi = za ? std::max(a.hi(), b.hi())
          : std::min(a.zero_above() ? std::numeric_limits<int>::max() : a.hi(),
                     b.zero_above() ? std::numeric_limits<int>::max() : b.hi());
}

}  // namespace

static CoeffTable combine(const CoeffTable& lhs, const CoeffTable& rhs, double sign) {
  const CoeffTable a = lhs.canonical();
  const CoeffTable b = rhs.canonical();
  if (!a.monomial_matches(b))
    throw DomainError("CoeffTable: cannot combine tables with different overall monomials");
  int lo, hi;
  bool zb, za;
  combined_window(a, b, lo, hi, zb, za);
  if (hi < lo) throw DomainError("CoeffTable: combined window is empty");
  CoeffTable out(lo, hi, a.z_exponent(), a.w_exponent(), zb, za);
  for (int j = lo; j <= hi; ++j) out[j] = a.at(j) + sign * b.at(j);
  return out;
}

CoeffTable& CoeffTable::operator+=(const CoeffTable& other) {
  if (c_.empty() && !finite()) return *this = other.canonical();
  *this = combine(*this, other, 1.0);
  return *this;
}

CoeffTable& CoeffTable::operator-=(const CoeffTable& other) {
  if (c_.empty() && !finite()) {
    *this = other.canonical();
    for (auto& v : c_) v = -v;
    return *this;
  }
  *this = combine(*this, other, -1.0);
  return *this;
}

CoeffTable& CoeffTable::operator*=(cplx s) {
  for (auto& v : c_) v *= s;
  return *this;
}

CoeffTable CoeffTable::shifted(int k) const {
  CoeffTable out = *this;
  out.lo_ += k;
  out.hi_ += k;
  return out;
}

CoeffTable CoeffTable::times_series(const LaurentSeries& s, bool in_inverse) const {
  if (std::abs(s.prefactor_exponent()) > 0.0)
    throw DomainError("CoeffTable::times_series: series must have integer grading");
  if (!in_inverse) {
    if (!zero_below_) throw DomainError("CoeffTable::times_series: table must be bounded below");
    const int lo = lo_ + s.lo();
    const int hi = std::min(hi_ + s.lo(), lo_ + s.hi());
    CoeffTable out(lo, hi, z_exp_, w_exp_, true, false);
    for (int j = lo; j <= hi; ++j) {
      cplx acc = 0.0;
      for (int k = s.lo(); j - k >= lo_; ++k) acc += s.coeff(k) * at(j - k);
      out[j] = acc;
    }
    return out;
  }
  if (!zero_above_) throw DomainError("CoeffTable::times_series: table must be bounded above");
  const int hi = hi_ - s.lo();
  const int lo = std::max(lo_ - s.lo(), hi_ - s.hi());
  CoeffTable out(lo, hi, z_exp_, w_exp_, false, true);
  for (int j = lo; j <= hi; ++j) {
    cplx acc = 0.0;
    for (int k = s.lo(); j + k <= hi_; ++k) acc += s.coeff(k) * at(j + k);
    out[j] = acc;
  }
  return out;
}

CoeffTable CoeffTable::times_delta(cplx alpha, int lo, int hi) const {
  if (!finite()) throw DomainError("CoeffTable::times_delta: table must be finite");
  CoeffTable out(lo, hi, z_exp_, w_exp_, false, false);
  const cplx log_alpha = std::log(alpha);
  for (int j = lo; j <= hi; ++j) {
    cplx acc = 0.0;
    for (int i = lo_; i <= hi_; ++i) {
      const cplx v = at(i);
      if (v != cplx(0.0)) acc += v * std::exp(static_cast<double>(j - i) * log_alpha);
    }
    out[j] = acc;
  }
  return out;
}

CoeffTable CoeffTable::w_scaled(cplx log_xi) const {
  CoeffTable out = *this;
  for (int j = lo_; j <= hi_; ++j) out[j] *= std::exp((w_exp_ + static_cast<double>(j)) * log_xi);
  return out;
}

CoeffTable CoeffTable::window(int lo, int hi) const {
  CoeffTable out(lo, hi, z_exp_, w_exp_, false, false);
  for (int j = lo; j <= hi; ++j) out[j] = at(j);
  return out;
}

TableDiff compare_tables(const CoeffTable& lhs, const CoeffTable& rhs, int lo, int hi) {
  const CoeffTable a = lhs.canonical();
  const CoeffTable b = rhs.canonical();
  if (!a.monomial_matches(b)) throw DomainError("compare_tables: overall monomials differ");
  TableDiff d;
  d.worst = lo;
  for (int j = lo; j <= hi; ++j) {
    const cplx va = a.at(j);
    const cplx vb = b.at(j);
    const double diff = std::abs(va - vb);
    d.scale = std::max({d.scale, std::abs(va), std::abs(vb)});
    if (diff > d.residual) {
      d.residual = diff;
      d.worst = j;
    }
  }
  return d;
}

namespace {

// The x^{-n} exponents grow like r^{-n}; the exponential recursion cancels
// them down to O(1) coefficients, which costs ~|log10 r| n digits.  Double
// precision loses the identity for small r, so this check runs in binary128.
using quad = __float128;
using cquad = std::complex<quad>;

std::vector<cquad> quad_exp(const std::vector<cquad>& log_coeffs, int order) {
  std::vector<cquad> a(static_cast<std::size_t>(order + 1), cquad(0));
  a[0] = cquad(1);
  for (int k = 1; k <= order; ++k) {
    cquad acc(0);
    for (int j = 1; j <= k; ++j) acc += cquad(static_cast<quad>(j)) * log_coeffs[j] * a[k - j];
    a[k] = acc * cquad(quad(1) / static_cast<quad>(k));
  }
  return a;
}

cquad to_quad(cplx z) { return cquad(static_cast<quad>(z.real()), static_cast<quad>(z.imag())); }

cplx to_double(cquad z) { return cplx(static_cast<double>(z.real()), static_cast<double>(z.imag())); }

}  // namespace

CheckReport check_delta_identity(std::span<const cplx> r, int window, double tol) {
  CheckReport rep;
  rep.identity = "delta-identity";
  rep.config.window = window;
  rep.config.tolerance = tol;
  const int m = static_cast<int>(r.size());
  for (cplx ri : r)
    if (ri == cplx(0.0)) throw DomainError("check_delta_identity: r_i must be nonzero");

  std::vector<cquad> rq, rinv;
  cquad prod_r(1), prod_one_minus(1);
  for (cplx ri : r) {
    rq.push_back(to_quad(ri));
    rinv.push_back(cquad(1) / rq.back());
    prod_r *= rq.back();
    prod_one_minus *= cquad(1) - rq.back();
  }
  // (1/n)(1 - sum rho_i^n) for n = 1..order
  auto log_coeffs = [&](const std::vector<cquad>& rho, int order) {
    std::vector<cquad> c(static_cast<std::size_t>(order + 1), cquad(0));
    std::vector<cquad> power(rho.size(), cquad(1));
    for (int n = 1; n <= order; ++n) {
      cquad s(1);
      for (std::size_t i = 0; i < rho.size(); ++i) {
        power[i] *= rho[i];
        s -= power[i];
      }
      c[n] = s * cquad(quad(1) / static_cast<quad>(n));
    }
    return c;
  };
  // First exponential: power series in x, zero below x^0.
  const std::vector<cquad> pos = quad_exp(log_coeffs(rq, window), window);
  // Second: (-x)^{m-1} prod r * series in 1/x, zero above x^{m-1}.
  const int neg_order = window + m - 1;
  const std::vector<cquad> neg = quad_exp(log_coeffs(rinv, neg_order), neg_order);
  const quad sign = ((m - 1) % 2 == 0) ? quad(1) : quad(-1);

  double worst = 0.0;
  int where = 0;
  for (int k = -window; k <= window; ++k) {
    cquad lhs(0);
    if (k >= 0) lhs += pos[k];
    if (k <= m - 1) lhs -= cquad(sign) * prod_r * neg[m - 1 - k];
    const double diff = std::abs(to_double(lhs - prod_one_minus));
    if (diff > worst) {
      worst = diff;
      where = k;
    }
  }
  rep.residual = worst;
  std::ostringstream loc;
  loc << "power " << where << " (m=" << m << ")";
  rep.worst_location = loc.str();
  rep.decide();
  return rep;
}

}  // namespace qvir

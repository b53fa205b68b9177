#include <doctest.h>

#include <cmath>

#include "qvir/qspecial.hpp"
#include "qvir/suite.hpp"

using namespace qvir;

namespace {
bool close(cplx a, cplx b, double tol) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(b)); }
}  // namespace

TEST_CASE("finite pochhammer is the explicit product") {
  const cplx a(0.3, 0.2), q = 0.6;
  const cplx want = (1.0 - a) * (1.0 - a * q) * (1.0 - a * q * q);
  CHECK(close(pochhammer(a, q, 3), want, 1e-15));
  CHECK(pochhammer(a, q, 0) == cplx(1.0));
}

TEST_CASE("(q;q)_inf matches the pentagonal number series") {
  for (double q : {0.2, 0.5, 0.8}) {
    cplx sum = 0.0;
    for (int k = -60; k <= 60; ++k) sum += ((k % 2 == 0) ? 1.0 : -1.0) * std::pow(q, k * (3.0 * k - 1.0) / 2.0);
    CHECK(close(pochhammer(q, q, kInfiniteOrder), sum, 1e-13));
  }
}

TEST_CASE("double-base pochhammer factorizes over the second base") {
  // (a; p, q)_inf = prod_m (a p^m; q)_inf
  const cplx a = 0.4, p = 0.3, q = 0.5;
  cplx want = 1.0;
  for (int m = 0; m < 60; ++m) want *= pochhammer(a * std::pow(p, m), q, kInfiniteOrder);
  const cplx bases[] = {p, q};
  CHECK(close(pochhammer(a, bases, kInfiniteOrder), want, 1e-13));
}

TEST_CASE("an exactly vanishing factor gives zero even for huge arguments") {
  const double q = 0.7;
  CHECK(pochhammer(std::pow(q, -3), q, kInfiniteOrder) == cplx(0.0));
  CHECK(pochhammer(std::pow(q, -250), q, kInfiniteOrder) == cplx(0.0));
  CHECK(pochhammer(1.0, q, kInfiniteOrder) == cplx(0.0));
  CHECK(std::abs(pochhammer(std::pow(q, -3.5), q, kInfiniteOrder)) > 0.0);
}

TEST_CASE("infinite pochhammer rejects |base| >= 1") {
  CHECK_THROWS_AS(pochhammer(0.5, 1.2, kInfiniteOrder), DomainError);
}

TEST_CASE("gamma_q values, poles and the classical limit") {
  CHECK(close(gamma_q(1.0, 0.6), 1.0, 1e-14));
  CHECK(close(gamma_q(2.0, 0.6), 1.0, 1e-14));
  // Gamma_q(3) = [2]_q = 1 + q
  CHECK(close(gamma_q(3.0, 0.6), 1.6, 1e-14));
  CHECK_THROWS_AS(gamma_q(0.0, 0.6), PoleError);
  CHECK_THROWS_AS(gamma_q(-2.0, 0.6), PoleError);
  CHECK(std::abs(gamma_q(0.5, 0.99) - std::sqrt(kPi)) < 5e-3);
  CHECK(check_gamma_functional(0.7).pass());
  CHECK(check_gamma_functional(0.4).pass());
}

TEST_CASE("beta_q is the gamma ratio") {
  const cplx q = 0.55;
  CHECK(close(beta_q(0.3, 1.7, q), gamma_q(0.3, q) * gamma_q(1.7, q) / gamma_q(2.0, q), 1e-14));
}

TEST_CASE("theta_q zeros and quasi-periodicity") {
  CHECK(theta_q(1.0, 0.5) == cplx(0.0));
  CHECK(check_theta_quasi_periodicity(0.7).pass());
  CHECK(check_theta_quasi_periodicity(0.3).pass());
}

TEST_CASE("phi21 at z = 0, q-binomial and q-Chu-Vandermonde") {
  CHECK(phi21(0.3, 0.5, 0.2, 0.7, 0.0) == cplx(1.0));
  CHECK(check_qbinomial(0.7).pass());
  CHECK(check_qbinomial(0.35).pass());
  // 2phi1(q^{-n}, b; c; q, q) = (c/b; q)_n b^n / (c; q)_n
  const double q = 0.6, b = 0.45, c = 0.3;
  for (int n = 0; n <= 5; ++n) {
    const cplx want = pochhammer(c / b, q, n) * std::pow(b, n) / pochhammer(c, q, n);
    CHECK(close(phi21(std::pow(q, -n), b, c, q, q), want, 1e-13));
  }
  CHECK_THROWS_AS(phi21(0.3, 0.5, 0.2, 0.7, 1.0), ConvergenceError);
}

TEST_CASE("jackson integrals of polynomials") {
  const double q = 0.7;
  auto one = [](cplx) { return cplx(1.0); };
  auto id = [](cplx z) { return z; };
  CHECK(check_jackson_unit(q).pass());
  CHECK(check_jackson_unit(0.2).pass());
  // int_0^1 z d_q z = 1 / (1 + q)
  CHECK(close(jackson_integral(id, JacksonKind::kZeroToA, 1.0, 0.0, q), 1.0 / (1.0 + q), 1e-14));
  CHECK(close(jackson_integral(one, JacksonKind::kAToB, 0.5, 2.0, q), 1.5, 1e-14));
  // bilateral sum picks up the n < 0 terms
  auto f = [](cplx z) { return 1.0 / (1.0 + z * z); };
  const cplx full = jackson_integral(f, JacksonKind::kZeroToAInfinity, 1.0, 0.0, q);
  const cplx lower = jackson_integral(f, JacksonKind::kZeroToA, 1.0, 0.0, q);
  CHECK(full.real() > lower.real());
  auto grow = [](cplx) { return cplx(1.0); };
  CHECK_THROWS_AS(jackson_integral(grow, JacksonKind::kZeroToAInfinity, 1.0, 0.0, q), ConvergenceError);
}

TEST_CASE("bracket is odd and r-antiperiodic") {
  const BracketParams bp = BracketParams::make(0.7, 5.0, 1);
  for (double u : {0.3, 1.7, 4.2}) {
    CHECK(close(bracket(-u, bp), -bracket(u, bp), 1e-12));
    CHECK(close(bracket(u + 5.0, bp), -bracket(u, bp), 1e-12));
  }
  CHECK(std::abs(bracket(0.0, bp)) < 1e-300);
}

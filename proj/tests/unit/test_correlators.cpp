#include <doctest.h>

#include <cmath>

#include "qvir/correlators.hpp"

using namespace qvir;

namespace {

CorrelatorParams cell(double beta, double L, double r = 5.0) {
  return CorrelatorParams{QParams::make(0.7, std::pow(0.7, beta)), 1, L, r};
}

}  // namespace

TEST_CASE("two-point function matches its series in both p regimes") {
  for (auto [q, t] : {std::pair{0.7, 0.3}, std::pair{0.4, 0.9}}) {
    const QParams P = QParams::make(q, t);
    for (int ell = 1; ell <= 2; ++ell) {
      const LaurentSeries s = two_point_series(ell, P, 50);
      const cplx y = 0.15;
      const cplx direct = two_point(ell, P, 1.0, y);
      cplx sum = 0.0;
      for (int j = 50; j >= 0; --j) sum = sum * y + s.coeff(j);
      CHECK(std::abs(sum - direct) < 1e-12 * std::abs(direct));
      // the z power
      const cplx z = 2.0;
      CHECK(std::abs(two_point(ell, P, z, z * y) - std::pow(z, static_cast<double>(ell * ell) * P.beta() / 2.0) * direct) <
            1e-12 * std::abs(direct));
    }
  }
}

TEST_CASE("pseudo-constant ratio is invariant under the Q shift") {
  const QParams P = QParams::make(0.7, 0.3);
  for (int ell = 1; ell <= 3; ++ell) CHECK(pseudo_constant_check(ell, P, 0.35, 1e-10).pass());
}

TEST_CASE("closed form equals Jackson sum") {
  for (double beta : {0.45, 0.65})
    for (double L : {0.5, 1.2}) {
      const CheckReport r = check_four_point(cell(beta, L), 1.0, 0.3, 1e-8);
      CHECK(r.pass());
    }
}

TEST_CASE("Jackson sums outside the convergent regime are inconclusive") {
  const CorrelatorParams cp{QParams::make(0.7, 0.3), 1, 1.0, 5.0};
  CHECK_FALSE(regime_violation(cp).empty());
  CHECK(check_four_point(cp, 1.0, 0.3).status == CheckStatus::kInconclusive);
  CHECK(regime_violation(cell(0.55, 1.0)).empty());
}

TEST_CASE("connection matrix identity, inversion and formula") {
  const CorrelatorParams cp = cell(0.8, 1.0);
  CHECK(check_connection_identity(cp, 1e-10).pass());
  CHECK(check_connection_inversion({0.6, 3.1}, cp, 1e-8).pass());
  CHECK(check_connection_formula({1.9, 6.37}, cp, 1e-6).pass());
  CHECK(check_connection_formula({1.9, 6.37}, cp, 1e-6, true).status == CheckStatus::kFail);
}

TEST_CASE("anti-diagonal entries share the factor [-u]") {
  const CorrelatorParams cp = cell(0.8, 1.0);
  const BracketParams bp = BracketParams::make(cp.q.q(), cp.r, cp.ell);
  for (double u : {1.3, 4.4}) {
    const ConnectionMatrix m = connection_matrix(u, cp);
    const cplx want = bracket(1.0, bp) / bracket(3.0, bp);  // [L] / [2 ell + L]
    CHECK(std::abs(m.entries[0][1] / m.entries[1][0] - want) < 1e-12 * std::abs(want));
  }
}

TEST_CASE("u and w/z round trip") {
  const CorrelatorParams cp = cell(0.8, 1.0);
  for (double u : {-2.0, 0.5, 7.3}) CHECK(std::abs(u_from_ratio(ratio_from_u(u, cp), cp) - u) < 1e-12);
}

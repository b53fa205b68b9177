#include <doctest.h>

#include <cmath>
#include <random>

#include "qvir/series.hpp"

using namespace qvir;

TEST_CASE("series_exp reproduces geometric and exponential series") {
  // exp(sum x^n / n) = 1 / (1 - x)
  const LaurentSeries geo = series_exp([](int n) { return cplx(1.0 / n); }, 8);
  for (int k = 0; k <= 8; ++k) CHECK(std::abs(geo.coeff(k) - 1.0) < 1e-15);
  // exp(2x) = sum 2^k / k!
  const LaurentSeries ex = series_exp([](int n) { return n == 1 ? cplx(2.0) : cplx(0.0); }, 6);
  double fact = 1.0;
  for (int k = 0; k <= 6; ++k) {
    if (k > 0) fact *= k;
    CHECK(std::abs(ex.coeff(k) - std::pow(2.0, k) / fact) < 1e-14);
  }
}

TEST_CASE("product of (1 - x)^-1 and (1 - x) is one") {
  const LaurentSeries geo = series_exp([](int n) { return cplx(1.0 / n); }, 6);
  const LaurentSeries lin = LaurentSeries::from_coefficients(0, {1.0, -1.0, 0.0, 0.0, 0.0, 0.0, 0.0});
  const LaurentSeries prod = series_mul(geo, lin);
  CHECK(std::abs(prod.coeff(0) - 1.0) < 1e-15);
  for (int k = 1; k <= prod.hi(); ++k) CHECK(std::abs(prod.coeff(k)) < 1e-15);
  const LaurentSeries inv = series_inverse(lin);
  for (int k = 0; k <= inv.hi(); ++k) CHECK(std::abs(inv.coeff(k) - 1.0) < 1e-15);
}

TEST_CASE("unknown coefficients above the order throw") {
  const LaurentSeries s = series_exp([](int n) { return cplx(1.0 / n); }, 3);
  CHECK(s.coeff(-1) == cplx(0.0));
  CHECK_THROWS_AS(s.coeff(4), DomainError);
}

TEST_CASE("delta identity for random r") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int m = 1; m <= 3; ++m) {
    std::vector<cplx> r;
    for (int i = 0; i < m; ++i) r.emplace_back(unit(rng));
    CHECK(check_delta_identity(r, 8).pass());
  }
}


TEST_CASE("times_delta transfers coefficients") {
  CoeffTable t(0, 0, 0.0, 0.0, true, true);
  t[0] = 2.0;
  const CoeffTable d = t.times_delta(0.5, -3, 3);
  for (int j = -3; j <= 3; ++j) CHECK(std::abs(d.at(j) - 2.0 * std::pow(0.5, j)) < 1e-15 * std::pow(0.5, j));
}

TEST_CASE("delta identity with r = 1 has a vanishing coefficient") {
  CHECK(check_delta_identity(std::vector<cplx>{0.3, 0.6, 1.0}, 6).pass());
}

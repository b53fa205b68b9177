#include <doctest.h>

#include <cmath>

#include "qvir/correlators.hpp"
#include "qvir/relations.hpp"
#include "qvir/voa.hpp"

using namespace qvir;

namespace {

cplx partial_sum(const LaurentSeries& s, cplx x) {
  cplx v = 0.0;
  for (int k = s.hi(); k >= s.lo(); --k) v = v * x + s.coeff(k);
  return v * std::pow(x, s.lo());
}

// (a y; Q)_inf / (b y; Q)_inf evaluated directly.
cplx poch_ratio(cplx a, cplx b, cplx Q, cplx y) {
  return pochhammer(a * y, Q, kInfiniteOrder) / pochhammer(b * y, Q, kInfiniteOrder);
}

}  // namespace

TEST_CASE("structure function f from its exponent") {
  const QParams P = QParams::make(0.7, 0.3);
  auto c = [&](int n) {
    const double h = n / 2.0;
    return -(P.q_pow(h) - P.q_pow(-h)) * (P.t_pow(h) - P.t_pow(-h)) / (P.p_pow(h) + P.p_pow(-h));
  };
  const LaurentSeries f = structure_series(structure_spec(StructureFamily::kF, 0, 0), P, 3);
  CHECK(std::abs(f.coeff(0) - 1.0) < 1e-15);
  CHECK(std::abs(f.coeff(1) - c(1)) < 1e-14);
  CHECK(std::abs(f.coeff(2) - (c(2) / 2.0 + c(1) * c(1) / 2.0)) < 1e-13);
}

TEST_CASE("V V contraction is the two-point product") {
  for (auto [q, t] : {std::pair{0.7, 0.3}, std::pair{0.4, 0.9}}) {
    const QParams P = QParams::make(q, t);
    const FockSpace fock(P, 4);
    for (int ell = 1; ell <= 3; ++ell) {
      const NormalOrderedVertex v = build_vertex(ell, 0, P);
      const Contraction c = contract(v, Var::kZ, v, Var::kW, fock, 60);
      CHECK(std::abs(c.left_exponent - static_cast<double>(ell * ell) * P.beta() / 2.0) < 1e-14);
      CHECK(std::abs(c.constant - 1.0) < 1e-15);
      const cplx y = 0.12;
      const cplx direct = two_point(ell, P, 1.0, y);
      CHECK(std::abs(partial_sum(c.series, y) - direct) < 1e-12 * std::abs(direct));
      const LaurentSeries s = two_point_series(ell, P, 12);
      for (int j = 0; j <= 12; ++j)
        CHECK(std::abs(s.coeff(j) - c.series.coeff(j)) < 1e-12 * std::max(1.0, std::abs(s.coeff(j))));
    }
  }
}

TEST_CASE("S+ V and V S+ contractions are the printed Pochhammer ratio") {
  const QParams P = QParams::make(0.7, std::pow(0.7, 0.55));
  const FockSpace fock(P, 4);
  for (int ell = 1; ell <= 3; ++ell) {
    const cplx Q = P.q_pow(1.0 / ell);
    const cplx c = P.q_pow(1.0 / (2.0 * ell));
    const cplx y = 0.2;
    const cplx want = poch_ratio(P.t_pow(0.5) * c, P.t_pow(-0.5) * c, Q, y);
    const NormalOrderedVertex s = build_screening(Sign::kPlus, P);
    const NormalOrderedVertex v = build_vertex(ell, 0, P);
    const Contraction sv = contract(s, Var::kZ, v, Var::kW, fock, 80);
    CHECK(std::abs(sv.left_exponent + static_cast<double>(ell) * P.beta()) < 1e-14);
    CHECK(std::abs(partial_sum(sv.series, y) - want) < 1e-12 * std::abs(want));
    const Contraction vs = contract(v, Var::kZ, s, Var::kW, fock, 80);
    CHECK(std::abs(vs.left_exponent + static_cast<double>(ell) * P.beta()) < 1e-14);
    CHECK(std::abs(partial_sum(vs.series, y) - want) < 1e-12 * std::abs(want));
    CHECK(std::abs(sv_factor(ell, P, y, 1.0) - want) < 1e-13 * std::abs(want));
  }
}

TEST_CASE("R- closed form equals the contraction engine and R+ is one") {
  const QParams P = QParams::make(0.7, 0.3);
  const FockSpace fock(P, 4);
  for (auto [ell, k] : {std::pair{1, 0}, std::pair{2, 0}, std::pair{3, 0}, std::pair{1, 1}, std::pair{2, 1},
                        std::pair{1, 2}}) {
    const ExpSumForm form = rminus_form(ell, k, P);
    const LaurentSeries closed =
        series_exp([&](int n) { return form.log_coefficient(n) / static_cast<double>(n); }, 10);
    const LaurentSeries engine = rsign_series(Sign::kMinus, ell, k, fock, 10);
    for (int j = 0; j <= 10; ++j) CHECK(std::abs(closed.coeff(j) - engine.coeff(j)) < 1e-11 * std::max(1.0, std::abs(closed.coeff(j))));
    const LaurentSeries plus = rsign_series(Sign::kPlus, ell, k, fock, 10);
    CHECK(std::abs(plus.coeff(0) - 1.0) < 1e-14);
    for (int j = 1; j <= 10; ++j) CHECK(std::abs(plus.coeff(j)) < 1e-12);
  }
}

TEST_CASE("involutions square to the identity") {
  const QParams P = QParams::make(0.7, 0.3);
  for (Involution s : {Involution::kTheta, Involution::kOmega, Involution::kOmegaTheta}) {
    const QParams back = apply(s, apply(s, P));
    CHECK(std::abs(back.log_q() - P.log_q()) < 1e-15);
    CHECK(std::abs(back.log_t() - P.log_t()) < 1e-15);
    const NormalOrderedVertex v = build_vertex(2, 1, P);
    const NormalOrderedVertex w = flip(s, flip(s, v));
    CHECK(vertex_data_distance(v, w, 8) < 1e-15);
  }
  CHECK(std::abs(apply(Involution::kOmega, P).q() - P.t()) < 1e-15);
  CHECK(std::abs(apply(Involution::kTheta, P).q() - 1.0 / P.q()) < 1e-14);
}

TEST_CASE("same-variable factors merge without a scalar") {
  const QParams P = QParams::make(0.7, 0.3);
  const FockSpace fock(P, 3);
  const NormalOrderedVertex a = build_vertex(1, 0, P);
  const NormalOrderedVertex b = build_lambda(Sign::kPlus, P);
  const OperatorProduct prod = normal_order({Factor{a, Var::kW}, Factor{b, Var::kW}}, fock, 6);
  REQUIRE(prod.factors.size() == 1);
  CHECK_FALSE(prod.contraction.has_value());
  CHECK(vertex_data_distance(prod.factors[0].vertex, merged(a, b), 8) < 1e-15);
}

TEST_CASE("fusion and shift identity") {
  for (auto [q, t] : {std::pair{0.7, 0.3}, std::pair{0.4, 0.9}}) {
    const QParams P = QParams::make(q, t);
    for (int ell = 1; ell <= 3; ++ell) {
      CHECK(check_fusion(ell, P, false, 1e-10).pass());
      CHECK(check_fusion(ell, P, true, 1e-10).pass());
      CHECK(check_shift_identity(ell, P, 1e-10).pass());
    }
  }
}

TEST_CASE("fused vertex differs from a wrongly spaced product") {
  const QParams P = QParams::make(0.7, 0.3);
  const NormalOrderedVertex v21 = build_vertex(1, 0, P);
  const NormalOrderedVertex wrong = merged(v21, rescaled(v21, P.log_q()));
  CHECK(vertex_data_distance(wrong, build_vertex(2, 0, P), 6) > 1e-3);
}

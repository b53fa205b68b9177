#include <doctest.h>

#include <cmath>

#include "qvir/relations.hpp"

using namespace qvir;

namespace {

RelationConfig small(int degree = 2, int window = 2) {
  RelationConfig c;
  c.degree = degree;
  c.window = window;
  return c;
}

}  // namespace

TEST_CASE("defining relation at both parameter points") {
  for (auto [q, t] : {std::pair{0.7, 0.3}, std::pair{0.4, 0.9}}) {
    const CheckReport r = check_defining_relation(QParams::make(q, t), small(3, 3));
    CHECK(r.pass());
    CHECK(r.residual < 1e-12);
  }
}

TEST_CASE("screening relation and its omega image") {
  const QParams P = QParams::make(0.7, 0.3);
  CHECK(check_screening_relation(P, Involution::kIdentity, small()).pass());
  CHECK(check_screening_relation(P, Involution::kOmega, small()).pass());
}

TEST_CASE("Lemma 2.1 and Prop 2.1 for ell = 1, 2") {
  const QParams P = QParams::make(0.4, 0.9);
  for (int ell = 1; ell <= 2; ++ell)
    for (Involution f : {Involution::kIdentity, Involution::kOmega}) {
      CHECK(check_lemma21(ell, P, f, small()).pass());
      CHECK(check_prop21(ell, P, f, small()).pass());
    }
}

TEST_CASE("Theorem 2.1 mode extraction") {
  const QParams P = QParams::make(0.7, 0.3);
  CHECK(check_theorem21(1, 2, P, Involution::kIdentity, small()).pass());
}

TEST_CASE("adjoint action distinguishes modes") {
  const QParams P = QParams::make(0.7, 0.3);
  const FockSpace fock(P, 10);
  const FockState ket{0.0, Partition({1})};
  const FockState bra{-P.sqrt_beta() / 2.0, Partition({2})};
  const cplx a1 = adjoint_action(1, 1, fock, Involution::kIdentity, bra, ket, 1.3);
  const cplx s1 = shift_operator_form(1, 1, fock, Involution::kIdentity, bra, ket, 1.3);
  const cplx s2 = shift_operator_form(2, 1, fock, Involution::kIdentity, bra, ket, 1.3);
  CHECK(std::abs(a1 - s1) < 1e-10 * std::max(1.0, std::abs(a1)));
  CHECK(std::abs(a1 - s2) > 1e-6);
}

TEST_CASE("Lemma 2.2 and Prop 2.2") {
  const QParams P = QParams::make(0.7, 0.3);
  CHECK(check_lemma22(1, P, Involution::kIdentity, small()).pass());
  CHECK(check_prop22(1, 1, P, Involution::kIdentity, small()).pass());
  CHECK(check_prop22(1, 2, P, Involution::kOmegaTheta, small()).pass());
}

TEST_CASE("report carries the parameter cell") {
  const QParams P = QParams::make(0.7, 0.3);
  const CheckReport r = check_lemma21(2, P, Involution::kIdentity, small(2, 1));
  CHECK(r.config.ell == 2);
  CHECK(r.config.degree == 2);
  CHECK(r.config.window == 1);
  CHECK(std::abs(r.config.q - 0.7) < 1e-15);
}

TEST_CASE("compared magnitude bounds the residual from above") {
  // Residuals are rounding noise on entries of size `scale`; the exchange
  // pieces before cancellation are at least as large as the result.
  const QParams P = QParams::make(0.4, 0.9);
  const CheckReport r = check_prop22(2, 1, P, Involution::kIdentity, small());
  CHECK(r.scale >= 1.0);
  CHECK(r.residual < 1e-12 * r.scale);
  CHECK(check_defining_relation(P, small()).scale > 0.0);
}

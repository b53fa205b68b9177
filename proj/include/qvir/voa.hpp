#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "qvir/fock.hpp"
#include "qvir/qspecial.hpp"
#include "qvir/series.hpp"

namespace qvir {

enum class Sign { kPlus, kMinus };

NormalOrderedVertex build_lambda(Sign sign, const QParams& params);
NormalOrderedVertex build_screening(Sign sign, const QParams& params);
// V_{ell+1,1} for k == 0, V_{1,k+1} for ell == 0, :V_{ell+1,1} V_{1,k+1}: otherwise.
NormalOrderedVertex build_vertex(int ell, int k, const QParams& params);

// T = Lambda^+ + Lambda^-, one term per summand.
std::vector<NormalOrderedVertex> build_T(const QParams& params);

// Heisenberg automorphisms.  theta: h_n -> -h_n (n != 0); omega additionally
// flips Q_h and h_0.  Composites apply right to left (kOmegaTheta = omega . theta).
enum class Involution { kIdentity, kTheta, kOmega, kOmegaTheta };

std::string involution_name(Involution s);
QParams apply(Involution s, const QParams& params);
// Action on operator data only; parameters are the caller's business.
NormalOrderedVertex flip(Involution s, const NormalOrderedVertex& v);

using VertexBuilder = std::function<NormalOrderedVertex(const QParams&)>;

// sigma . X  =  flip(X(sigma P)).  Identities are transported by building
// every operator through image() and evaluating every scalar at sigma P.
struct Frame {
  Involution involution = Involution::kIdentity;
  QParams base;

  QParams params() const { return apply(involution, base); }
  NormalOrderedVertex image(const VertexBuilder& build) const { return flip(involution, build(params())); }
};

enum class StructureFamily { kF, kG, kGTilde };

// exp(sum_{n>0} (1/n) c_n x^n).  ell and k select the vertex type; composite
// families are sums of the factor rules.
struct StructureFunctionSpec {
  StructureFamily family = StructureFamily::kF;
  int ell = 0;
  int k = 0;
  std::function<cplx(int, const QParams&)> coefficient_rule;
  std::string label;
};

StructureFunctionSpec structure_spec(StructureFamily family, int ell, int k);
LaurentSeries structure_series(const StructureFunctionSpec& spec, const QParams& params, int order);

// Scalar factor of X(u1) Y(u2) = factor * :X(u1) Y(u2):.
Contraction contract(const NormalOrderedVertex& a, Var u1, const NormalOrderedVertex& b, Var u2,
                     const FockSpace& fock, int order);

// Two factors on distinct variables give a contraction; factors on the same
// variable are merged (the fusion convention, scalar dropped).
OperatorProduct normal_order(const std::vector<Factor>& factors, const FockSpace& fock, int order);

// :prod_j V_{2,1}(q^{(ell+1-2j)/2ell} z):  (t-shifts of V_{1,2} when `omega_image`).
NormalOrderedVertex fused_vertex(int ell, const QParams& params, bool omega_image = false);

// exp(sum_n (1/n) (sum_i w_i rho_i^n) y^n) = prod_i (1 - rho_i y)^{-w_i}.
struct ExpSumForm {
  std::vector<std::pair<cplx, cplx>> terms;  // (rho_i, w_i)

  cplx log_coefficient(int n) const;
  cplx value(cplx y) const;
};

// Closed form of the contraction of V_{ell+1,k+1}(w) with Lambda^-(z) times
// g~^{(ell+1,k+1)}(z/w), a finite rational function of z/w.
ExpSumForm rminus_form(int ell, int k, const QParams& params);
// Series coefficients of the same function from the contraction engine.
LaurentSeries rsign_series(Sign sign, int ell, int k, const FockSpace& fock, int order);

}  // namespace qvir

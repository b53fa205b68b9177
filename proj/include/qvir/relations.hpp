#pragma once

#include <vector>

#include "qvir/fock.hpp"
#include "qvir/report.hpp"
#include "qvir/voa.hpp"

namespace qvir {

// Truncation of an operator-identity check.  Every bra/ket pair with
// partitions of degree <= degree and ket momentum in `momenta` is compared on
// the powers (w/z)^J, |J| <= window, after normalizing by sqrt(N_bra N_ket).
struct RelationConfig {
  int degree = 4;
  int window = 3;
  double tolerance = 1e-8;
  std::vector<cplx> momenta = {0.0, 0.37};
};

CheckReport check_defining_relation(const QParams& params, const RelationConfig& cfg);
CheckReport check_screening_relation(const QParams& params, Involution frame, const RelationConfig& cfg);
CheckReport check_lemma21(int ell, const QParams& params, Involution frame, const RelationConfig& cfg);
CheckReport check_prop21(int ell, const QParams& params, Involution frame, const RelationConfig& cfg);

// <bra| T_n^ell . V(w) |ket> at w = lambda, from the z^n mode of the
// Prop 2.1 left side (fock must cover RelationConfig-sized states).
cplx adjoint_action(int n, int ell, const FockSpace& fock, Involution frame, const FockState& bra,
                    const FockState& ket, cplx lambda);
// The same from the shift-operator closed form.
cplx shift_operator_form(int n, int ell, const FockSpace& fock, Involution frame, const FockState& bra,
                         const FockState& ket, cplx lambda);
CheckReport check_theorem21(int ell, int n_window, const QParams& params, Involution frame,
                            const RelationConfig& cfg, cplx lambda = 1.3);

CheckReport check_lemma22(int ell, const QParams& params, Involution frame, const RelationConfig& cfg);
CheckReport check_prop22(int ell, int k, const QParams& params, Involution frame, const RelationConfig& cfg);

// Vertex-data identities (no Fock truncation beyond `order` modes).
CheckReport check_fusion(int ell, const QParams& params, bool omega_image, double tol = 1e-10,
                         int order = 12);
CheckReport check_shift_identity(int ell, const QParams& params, double tol = 1e-10, int order = 12);

CheckConfig make_config(const QParams& params, int ell, int k, int degree, int window, double tol);

}  // namespace qvir

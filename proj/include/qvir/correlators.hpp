#pragma once

#include <array>
#include <vector>

#include "qvir/fock.hpp"
#include "qvir/qspecial.hpp"
#include "qvir/report.hpp"
#include "qvir/series.hpp"

namespace qvir {

struct CorrelatorParams {
  QParams q;
  int ell = 1;
  cplx L = 1.0;
  double r = 5.0;

  cplx a() const { return static_cast<double>(ell) * q.beta(); }
  cplx b() const { return 1.0 - L * q.beta(); }
  cplx base() const { return q.q_pow(1.0 / ell); }  // Q = q^{1/ell}
};

// <V_ell(z) V_ell(w)>.  For |p| < 1 the printed product; for |p| > 1 the
// same function rewritten with base p^{-2} (the printed one diverges).
cplx two_point(int ell, const QParams& params, cplx z, cplx w, const NumericConfig& cfg = {});
// Power series in w/z of the products (the z^{ell^2 beta/2} factor is the
// prefactor exponent, in z).
LaurentSeries two_point_series(int ell, const QParams& params, int order);

// Scalar factors of S_+(mu) V_ell(z) and V_ell(z) S_+(mu) as functions of
// y = z/mu; the power of mu (resp. z) is included, evaluated at mu = 1 (z = 1
// after division), i.e. only the ratio is meaningful.
cplx sv_factor(int ell, const QParams& params, cplx z, cplx mu, const NumericConfig& cfg = {});
cplx vs_factor(int ell, const QParams& params, cplx z, cplx mu, const NumericConfig& cfg = {});
CheckReport pseudo_constant_check(int ell, const QParams& params, cplx ratio_point, double tol = 1e-10);

enum class Screening { kPlus, kMinus };  // U_+ (mu to the left) or U_- (mu to the right)

cplx four_point_closed(Screening s, cplx z, cplx w, const CorrelatorParams& cp, const NumericConfig& cfg = {});
cplx four_point_jackson(Screening s, cplx z, cplx w, const CorrelatorParams& cp, const NumericConfig& cfg = {});

struct ConnectionMatrix {
  std::array<std::array<cplx, 2>, 2> entries{};
  cplx u = 0.0;
  cplx prefactor = 1.0;
};

ConnectionMatrix connection_matrix(cplx u, const CorrelatorParams& cp, const NumericConfig& cfg = {});

// w/z = x^{2u} with x = q^{1/(2 r ell)}.
cplx u_from_ratio(cplx ratio, const CorrelatorParams& cp);
cplx ratio_from_u(cplx u, const CorrelatorParams& cp);

// (U_+(z,w), U_-(z,w)) against prefactor * M(u) (U_+(w,z), U_-(w,z)) at z = 1,
// w = x^{2u}.  `swap_rows` exchanges the rows of M (negative control).
CheckReport check_connection_formula(const std::vector<cplx>& u_samples, const CorrelatorParams& cp,
                                     double tol = 1e-6, bool swap_rows = false, const NumericConfig& cfg = {});

// M(0) = I entrywise.
CheckReport check_connection_identity(const CorrelatorParams& cp, double tol = 1e-10, const NumericConfig& cfg = {});
// M(u) M(-u) = I; the two-point prefactors multiply to 1 as well.
CheckReport check_connection_inversion(const std::vector<cplx>& u_samples, const CorrelatorParams& cp,
                                       double tol = 1e-8, const NumericConfig& cfg = {});

// Empty when beta is real with ell beta and L beta in (0, 1), where the Jackson
// sums converge; otherwise the reason.  Checks outside report inconclusive.
std::string regime_violation(const CorrelatorParams& cp);

// Closed form vs Jackson sum for both signs at one (z, w).
CheckReport check_four_point(const CorrelatorParams& cp, cplx z, cplx w, double tol = 1e-8,
                             const NumericConfig& cfg = {});

}  // namespace qvir

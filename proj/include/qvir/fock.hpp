#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include <Eigen/Dense>

#include "qvir/numeric.hpp"
#include "qvir/qspecial.hpp"
#include "qvir/series.hpp"

namespace qvir {

// A partition stored as weakly decreasing parts.
class Partition {
 public:
  Partition() = default;
  explicit Partition(std::vector<int> parts);

  const std::vector<int>& parts() const { return parts_; }
  int degree() const { return degree_; }
  int multiplicity(int n) const;
  std::string str() const;

  bool operator==(const Partition& other) const { return parts_ == other.parts_; }
  bool operator<(const Partition& other) const { return parts_ < other.parts_; }

 private:
  std::vector<int> parts_;
  int degree_ = 0;
};

// All partitions of n, in reverse lexicographic order.
std::vector<Partition> partitions_of(int n);

// h_{-lambda_1} ... h_{-lambda_k} |momentum>.
struct FockState {
  cplx momentum = 0.0;
  Partition partition;

  std::string str() const;
};

// [h_n, h_m].  [h_n, Q_h] is zero_mode_commutator(n).
cplx mode_commutator(int n, int m, const QParams& params);
inline cplx zero_mode_commutator(int n) { return n == 0 ? 0.5 : 0.0; }

// Fock modules of the Heisenberg algebra up to a fixed degree.  States are
// monomials in h_{-n}; h_n acts as kappa_n d/dh_{-n}.  The pairing is the
// bilinear one with h_n^T = h_{-n} and <m|m'> = delta_{m,m'}.
class FockSpace {
 public:
  FockSpace(const QParams& params, int max_degree);

  const QParams& params() const { return params_; }
  int max_degree() const { return max_degree_; }
  // kappa_n = [h_n, h_{-n}], n >= 1.
  cplx kappa(int n) const;

  const std::vector<Partition>& basis(int degree) const;
  int index(const Partition& p) const;
  cplx norm(const Partition& p) const;
  const Eigen::VectorXcd& norms(int degree) const;

  // <lambda| exp(sum_n b_n h_{-n}) exp(sum_n a_n h_n) |mu> for all lambda of
  // degree d_bra and mu of degree d_ket.  a[n-1], b[n-1] hold the mode-n
  // coefficients; missing entries count as zero.
  Eigen::MatrixXcd exp_block(const std::vector<cplx>& a, const std::vector<cplx>& b, int d_bra,
                             int d_ket) const;

 private:
  QParams params_;
  int max_degree_;
  std::vector<cplx> kappa_;
  std::vector<std::vector<Partition>> basis_;
  std::vector<Eigen::VectorXcd> norms_;
  std::map<Partition, int> index_;
};

cplx inner_product(const FockState& bra, const FockState& ket, const FockSpace& fock);

// Gram matrix of the degree-d basis by brute force: each <0| h_{lambda} h_{-mu} |0>
// is reduced by commuting annihilators to the right one swap at a time.
// Independent of the closed-form norms; meant as an oracle.
Eigen::MatrixXcd gram_by_reordering(const QParams& params, int degree);
// Oracle vs inner_product and exp_block for all degrees <= max_degree,
// residual normalized by sqrt|N_lambda N_mu|.
CheckReport check_gram(const QParams& params, int max_degree, double tol = 1e-12);

// :exp(sum_{n != 0} A_n h_n z^{-n}): e^{charge Q_h} e^{h0_log_scale h_0} z^{h0_power h_0} * prefactor
//
// The Q_h factor sits left of every h_0 factor.  On a state of momentum m the
// zero modes give prefactor * e^{h0_log_scale m} z^{h0_power m} and move the
// momentum to m + charge / 2.
struct NormalOrderedVertex {
  std::function<cplx(int)> mode_coefficient;
  cplx charge = 0.0;
  cplx h0_power = 0.0;
  cplx h0_log_scale = 0.0;
  cplx scalar_prefactor = 1.0;
  std::string label;

  cplx mode(int n) const { return mode_coefficient ? mode_coefficient(n) : cplx(0.0); }
};

// X(xi z) with log_xi = log xi.
NormalOrderedVertex rescaled(const NormalOrderedVertex& v, cplx log_xi);
// :X(z) Y(z):  (mode coefficients, charges and h_0 data add).
NormalOrderedVertex merged(const NormalOrderedVertex& x, const NormalOrderedVertex& y);

// Largest |difference| of two vertices' data over modes 1 <= |n| <= order.
double vertex_data_distance(const NormalOrderedVertex& a, const NormalOrderedVertex& b, int order);

enum class Var { kZ, kW };

struct Factor {
  NormalOrderedVertex vertex;
  Var var = Var::kZ;
};

// Scalar left behind by normal ordering X(u1) Y(u2):
//   constant * u1^{left_exponent} * series(u2/u1).
// `series` is in x = w/z when u1 = z and in z/w when u1 = w.
struct Contraction {
  LaurentSeries series = LaurentSeries::constant(1.0, 0);
  Var left = Var::kZ;
  cplx left_exponent = 0.0;
  cplx constant = 1.0;
};

// Ordered product of at most two factors.  With `normal_ordered` set the
// product is  contraction * :factors:, as produced by normal_order().
struct OperatorProduct {
  std::vector<Factor> factors;
  bool normal_ordered = false;
  std::optional<Contraction> contraction;
};

// Evaluates <bra| product |ket> as a CoeffTable in x = w/z.  Oscillator
// blocks are cached per degree pair, so one evaluator should serve all
// bra/ket pairs of a check.
//
// For an ordinary two-factor product the table is one-sided: bounded below
// when the z factor stands left, bounded above otherwise.  Entries are exact
// for J in [-window, window] (plus the natural bound).
class ProductEvaluator {
 public:
  ProductEvaluator(const FockSpace& fock, OperatorProduct product);

  CoeffTable element(const FockState& bra, const FockState& ket, int window);
  // Fock degree needed for `window` with states up to `degree`.
  static int required_degree(int degree, int window) { return degree + window + 2; }

 private:
  using Key = std::tuple<int, int, int, int>;  // factor, kind, d_bra, d_ket
  const Eigen::MatrixXcd& block(int factor, int kind, int d_bra, int d_ket);
  CoeffTable single(const FockState& bra, const FockState& ket);
  CoeffTable ordered(const FockState& bra, const FockState& ket, int window);
  CoeffTable normal(const FockState& bra, const FockState& ket);

  const FockSpace& fock_;
  OperatorProduct product_;
  std::vector<std::vector<cplx>> modes_pos_;  // per factor, A_n for n >= 1
  std::vector<std::vector<cplx>> modes_neg_;  // per factor, A_{-n}
  std::map<Key, Eigen::MatrixXcd> cache_;
};

CoeffTable matrix_element(const OperatorProduct& product, const FockSpace& fock, const FockState& bra,
                          const FockState& ket, int window);

}  // namespace qvir

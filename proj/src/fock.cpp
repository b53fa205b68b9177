#include "qvir/fock.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qvir {

namespace {

constexpr double kMomentumTol = 1e-9;

cplx ipow(cplx base, int e) {
  cplx r = 1.0;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

void partitions_rec(int remaining, int max_part, std::vector<int>& cur, std::vector<Partition>& out) {
  if (remaining == 0) {
    out.emplace_back(cur);
    return;
  }
  for (int part = std::min(remaining, max_part); part >= 1; --part) {
    cur.push_back(part);
    partitions_rec(remaining - part, part, cur, out);
    cur.pop_back();
  }
}

std::string format_cplx(cplx z) {
  std::ostringstream os;
  os.precision(6);
  if (z.imag() == 0.0)
    os << z.real();
  else
    os << "(" << z.real() << (z.imag() < 0 ? "" : "+") << z.imag() << "i)";
  return os.str();
}

}  // namespace

Partition::Partition(std::vector<int> parts) : parts_(std::move(parts)) {
  std::sort(parts_.begin(), parts_.end(), std::greater<int>());
  for (int p : parts_) {
    if (p < 1) throw DomainError("Partition: parts must be positive");
    degree_ += p;
  }
}

int Partition::multiplicity(int n) const {
  return static_cast<int>(std::count(parts_.begin(), parts_.end(), n));
}

std::string Partition::str() const {
  std::string s = "[";
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(parts_[i]);
  }
  return s + "]";
}

std::vector<Partition> partitions_of(int n) {
  std::vector<Partition> out;
  if (n < 0) return out;
  std::vector<int> cur;
  partitions_rec(n, n, cur, out);
  return out;
}

std::string FockState::str() const { return partition.str() + "@" + format_cplx(momentum); }

cplx mode_commutator(int n, int m, const QParams& params) {
  if (n + m != 0 || n == 0) return 0.0;
  const double h = n / 2.0;
  const cplx num = (params.q_pow(h) - params.q_pow(-h)) * (params.t_pow(h) - params.t_pow(-h));
  return num / (static_cast<double>(n) * (params.p_pow(h) + params.p_pow(-h)));
}

FockSpace::FockSpace(const QParams& params, int max_degree) : params_(params), max_degree_(max_degree) {
  if (max_degree < 0) throw DomainError("FockSpace: negative degree");
  kappa_.resize(static_cast<std::size_t>(max_degree) + 1, 0.0);
  for (int n = 1; n <= max_degree; ++n) kappa_[n] = mode_commutator(n, -n, params);
  for (int d = 0; d <= max_degree; ++d) {
    basis_.push_back(partitions_of(d));
    Eigen::VectorXcd nv(static_cast<Eigen::Index>(basis_.back().size()));
    for (std::size_t i = 0; i < basis_.back().size(); ++i) {
      const Partition& p = basis_.back()[i];
      index_[p] = static_cast<int>(i);
      nv[static_cast<Eigen::Index>(i)] = norm(p);
    }
    norms_.push_back(nv);
  }
}

cplx FockSpace::kappa(int n) const {
  if (n < 1) throw DomainError("FockSpace::kappa: n must be positive");
  if (n <= max_degree_) return kappa_[n];
  return mode_commutator(n, -n, params_);
}

const std::vector<Partition>& FockSpace::basis(int degree) const {
  if (degree < 0 || degree > max_degree_)
    throw DomainError("FockSpace: degree " + std::to_string(degree) + " outside [0, " +
                      std::to_string(max_degree_) + "]");
  return basis_[degree];
}

int FockSpace::index(const Partition& p) const {
  auto it = index_.find(p);
  if (it == index_.end()) throw DomainError("FockSpace: partition " + p.str() + " not in basis");
  return it->second;
}

cplx FockSpace::norm(const Partition& p) const {
  cplx r = 1.0;
  for (int n = 1; n <= p.degree(); ++n) {
    const int m = p.multiplicity(n);
    if (m) r *= ipow(kappa(n), m) * factorial(m);
  }
  return r;
}

const Eigen::VectorXcd& FockSpace::norms(int degree) const {
  basis(degree);
  return norms_[degree];
}

Eigen::MatrixXcd FockSpace::exp_block(const std::vector<cplx>& a, const std::vector<cplx>& b, int d_bra,
                                      int d_ket) const {
  const auto& rows = basis(d_bra);
  const auto& cols = basis(d_ket);
  const int top = std::max(d_bra, d_ket);
  // Single-mode factor S_n(j, k) = kappa^j j! sum_i C(k,i) (a kappa)^{k-i} b^{j-i} / (j-i)!.
  std::vector<Eigen::MatrixXcd> single(static_cast<std::size_t>(top) + 1);
  for (int n = 1; n <= top; ++n) {
    const int jmax = d_bra / n;
    const int kmax = d_ket / n;
    const cplx kap = kappa(n);
    const cplx an = (n - 1 < static_cast<int>(a.size())) ? a[n - 1] : cplx(0.0);
    const cplx bn = (n - 1 < static_cast<int>(b.size())) ? b[n - 1] : cplx(0.0);
    Eigen::MatrixXcd s(jmax + 1, kmax + 1);
    for (int j = 0; j <= jmax; ++j) {
      for (int k = 0; k <= kmax; ++k) {
        cplx acc = 0.0;
        for (int i = 0; i <= std::min(j, k); ++i)
          acc += binomial(k, i) * ipow(an * kap, k - i) * ipow(bn, j - i) / factorial(j - i);
        s(j, k) = ipow(kap, j) * factorial(j) * acc;
      }
    }
    single[n] = std::move(s);
  }
  Eigen::MatrixXcd out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < cols.size(); ++c) {
      cplx v = 1.0;
      for (int n = 1; n <= top && v != cplx(0.0); ++n)
        v *= single[n](rows[r].multiplicity(n), cols[c].multiplicity(n));
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = v;
    }
  }
  return out;
}

cplx inner_product(const FockState& bra, const FockState& ket, const FockSpace& fock) {
  if (std::abs(bra.momentum - ket.momentum) > kMomentumTol) return 0.0;
  if (!(bra.partition == ket.partition)) return 0.0;
  return fock.norm(ket.partition);
}

namespace {

// <0| word |0> for a word of nonzero modes, left to right.
cplx vacuum_word(const std::vector<int>& word, const QParams& params, std::map<std::vector<int>, cplx>& memo) {
  if (word.empty()) return 1.0;
  if (word.back() > 0 || word.front() < 0) return 0.0;
  if (auto it = memo.find(word); it != memo.end()) return it->second;
  std::size_t i = word.size() - 1;
  while (word[i] < 0) --i;  // rightmost annihilator; word[i + 1] < 0
  std::vector<int> swapped = word;
  std::swap(swapped[i], swapped[i + 1]);
  cplx v = vacuum_word(swapped, params, memo);
  const cplx c = mode_commutator(word[i], word[i + 1], params);
  if (c != cplx(0.0)) {
    std::vector<int> rest;
    for (std::size_t j = 0; j < word.size(); ++j)
      if (j != i && j != i + 1) rest.push_back(word[j]);
    v += c * vacuum_word(rest, params, memo);
  }
  memo.emplace(word, v);
  return v;
}

}  // namespace

Eigen::MatrixXcd gram_by_reordering(const QParams& params, int degree) {
  const auto basis = partitions_of(degree);
  const auto n = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXcd g(n, n);
  std::map<std::vector<int>, cplx> memo;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      // <lambda| = <0| h_{lambda_k} ... h_{lambda_1}
      std::vector<int> word(basis[i].parts().rbegin(), basis[i].parts().rend());
      for (int part : basis[j].parts()) word.push_back(-part);
      g(i, j) = vacuum_word(word, params, memo);
    }
  }
  return g;
}

CheckReport check_gram(const QParams& params, int max_degree, double tol) {
  CheckReport rep;
  rep.identity = "gram";
  rep.config.q = params.q().real();
  rep.config.t = params.t().real();
  rep.config.degree = max_degree;
  rep.config.tolerance = tol;
  const FockSpace fock(params, std::max(max_degree, 1));
  for (int d = 0; d <= max_degree; ++d) {
    const Eigen::MatrixXcd oracle = gram_by_reordering(params, d);
    const Eigen::MatrixXcd block = fock.exp_block({}, {}, d, d);
    const auto& basis = fock.basis(d);
    for (std::size_t i = 0; i < basis.size(); ++i) {
      for (std::size_t j = 0; j < basis.size(); ++j) {
        const auto a = static_cast<Eigen::Index>(i), b = static_cast<Eigen::Index>(j);
        const double scale = std::sqrt(std::abs(fock.norm(basis[i]) * fock.norm(basis[j])));
        const cplx ip = inner_product({0.0, basis[i]}, {0.0, basis[j]}, fock);
        const double r = std::max(std::abs(oracle(a, b) - ip), std::abs(oracle(a, b) - block(a, b))) / scale;
        if (!(r <= rep.residual)) {
          rep.residual = r;
          rep.worst_location = "<" + basis[i].str() + "|" + basis[j].str() + ">";
        }
      }
    }
  }
  rep.decide();
  return rep;
}

NormalOrderedVertex rescaled(const NormalOrderedVertex& v, cplx log_xi) {
  NormalOrderedVertex out = v;
  auto base = v.mode_coefficient;
  out.mode_coefficient = [base, log_xi](int n) {
    return base ? base(n) * std::exp(-static_cast<double>(n) * log_xi) : cplx(0.0);
  };
  out.h0_log_scale += v.h0_power * log_xi;
  return out;
}

NormalOrderedVertex merged(const NormalOrderedVertex& x, const NormalOrderedVertex& y) {
  NormalOrderedVertex out;
  auto fx = x.mode_coefficient;
  auto fy = y.mode_coefficient;
  out.mode_coefficient = [fx, fy](int n) {
    return (fx ? fx(n) : cplx(0.0)) + (fy ? fy(n) : cplx(0.0));
  };
  out.charge = x.charge + y.charge;
  out.h0_power = x.h0_power + y.h0_power;
  out.h0_log_scale = x.h0_log_scale + y.h0_log_scale;
  out.scalar_prefactor = x.scalar_prefactor * y.scalar_prefactor;
  out.label = ":" + x.label + " " + y.label + ":";
  return out;
}

double vertex_data_distance(const NormalOrderedVertex& a, const NormalOrderedVertex& b, int order) {
  double d = 0.0;
  for (int n = 1; n <= order; ++n) {
    d = std::max(d, std::abs(a.mode(n) - b.mode(n)));
    d = std::max(d, std::abs(a.mode(-n) - b.mode(-n)));
  }
  d = std::max({d, std::abs(a.charge - b.charge), std::abs(a.h0_power - b.h0_power),
                std::abs(a.h0_log_scale - b.h0_log_scale),
                std::abs(a.scalar_prefactor - b.scalar_prefactor)});
  return d;
}

// ----------------------------------------------------------- ProductEvaluator

namespace {

enum BlockKind { kFull = 0, kCreation = 1, kAnnihilation = 2 };

// Adds u^e to the table's overall monomial.
void add_monomial(cplx& ez, cplx& ew, Var u, cplx e) {
  (u == Var::kZ ? ez : ew) += e;
}

}  // namespace

ProductEvaluator::ProductEvaluator(const FockSpace& fock, OperatorProduct product)
    : fock_(fock), product_(std::move(product)) {
  if (product_.factors.empty() || product_.factors.size() > 2)
    throw DomainError("ProductEvaluator: products of one or two factors only");
  if (product_.factors.size() == 2 && !product_.normal_ordered &&
      product_.factors[0].var == product_.factors[1].var)
    throw DomainError("ProductEvaluator: an unordered product needs two distinct variables");
  const int top = fock.max_degree();
  for (const auto& f : product_.factors) {
    std::vector<cplx> pos(static_cast<std::size_t>(top)), neg(static_cast<std::size_t>(top));
    for (int n = 1; n <= top; ++n) {
      pos[n - 1] = f.vertex.mode(n);
      neg[n - 1] = f.vertex.mode(-n);
    }
    modes_pos_.push_back(std::move(pos));
    modes_neg_.push_back(std::move(neg));
  }
}

const Eigen::MatrixXcd& ProductEvaluator::block(int factor, int kind, int d_bra, int d_ket) {
  const Key key{factor, kind, d_bra, d_ket};
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;
  static const std::vector<cplx> none;
  const auto& a = (kind == kCreation) ? none : modes_pos_[factor];
  const auto& b = (kind == kAnnihilation) ? none : modes_neg_[factor];
  Eigen::MatrixXcd m;
  if ((kind == kCreation && d_bra < d_ket) || (kind == kAnnihilation && d_bra > d_ket))
    m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(fock_.basis(d_bra).size()),
                               static_cast<Eigen::Index>(fock_.basis(d_ket).size()));
  else
    m = fock_.exp_block(a, b, d_bra, d_ket);
  return cache_.emplace(key, std::move(m)).first->second;
}

CoeffTable ProductEvaluator::element(const FockState& bra, const FockState& ket, int window) {
  if (window < 0) throw DomainError("matrix_element: window must be nonnegative");
  cplx total_charge = 0.0;
  for (const auto& f : product_.factors) total_charge += f.vertex.charge;
  if (std::abs(bra.momentum - (ket.momentum + total_charge / 2.0)) > kMomentumTol)
    return CoeffTable(0, -1, 0.0, 0.0, true, true);
  if (product_.factors.size() == 1) return single(bra, ket);
  if (!product_.normal_ordered) return ordered(bra, ket, window);
  CoeffTable t = normal(bra, ket);
  if (!product_.contraction) return t;
  const Contraction& c = *product_.contraction;
  CoeffTable scaled(t.lo(), t.hi(), t.z_exponent(), t.w_exponent(), true, true);
  for (int j = t.lo(); j <= t.hi(); ++j) scaled[j] = t.at(j) * c.constant;
  cplx ez = scaled.z_exponent();
  cplx ew = scaled.w_exponent();
  add_monomial(ez, ew, c.left, c.left_exponent);
  CoeffTable moved(scaled.lo(), scaled.hi(), ez, ew, true, true);
  for (int j = scaled.lo(); j <= scaled.hi(); ++j) moved[j] = scaled.at(j);
  return moved.times_series(c.series, c.left == Var::kW);
}

CoeffTable ProductEvaluator::single(const FockState& bra, const FockState& ket) {
  const Factor& f = product_.factors[0];
  const int db = bra.partition.degree();
  const int dk = ket.partition.degree();
  const auto& m = block(0, kFull, db, dk);
  const cplx osc = m(fock_.index(bra.partition), fock_.index(ket.partition));
  const cplx zero = f.vertex.scalar_prefactor * std::exp(f.vertex.h0_log_scale * ket.momentum);
  // u^{db - dk + gamma m}; canonical form w^{D} x^{J}.
  const int d = db - dk;
  cplx ez = 0.0, ew = static_cast<double>(d);
  int j = 0;
  if (f.var == Var::kZ) j = -d;  // z^d = w^d x^{-d}
  add_monomial(ez, ew, f.var, f.vertex.h0_power * ket.momentum);
  CoeffTable t(j, j, ez, ew, true, true);
  t[j] = osc * zero;
  return t;
}

CoeffTable ProductEvaluator::ordered(const FockState& bra, const FockState& ket, int window) {
  const Factor& x = product_.factors[0];
  const Factor& y = product_.factors[1];
  const int db = bra.partition.degree();
  const int dk = ket.partition.degree();
  const int ib = fock_.index(bra.partition);
  const int ik = fock_.index(ket.partition);
  const cplx m_in = ket.momentum;
  const cplx m_mid = m_in + y.vertex.charge / 2.0;
  const cplx zero = x.vertex.scalar_prefactor * y.vertex.scalar_prefactor *
                    std::exp(y.vertex.h0_log_scale * m_in + x.vertex.h0_log_scale * m_mid);
  cplx ez = 0.0, ew = static_cast<double>(db - dk);
  add_monomial(ez, ew, x.var, x.vertex.h0_power * m_mid);
  add_monomial(ez, ew, y.var, y.vertex.h0_power * m_in);

  // X(z)Y(w): J = e - db, bounded below.  X(w)Y(z): J = dk - e, bounded above.
  const bool z_left = x.var == Var::kZ;
  const int e_max = z_left ? window + db : dk + window;
  if (e_max > fock_.max_degree())
    throw DomainError("matrix_element: window " + std::to_string(window) + " needs Fock degree " +
                      std::to_string(e_max) + ", have " + std::to_string(fock_.max_degree()));
  const int lo = z_left ? -db : dk - e_max;
  const int hi = z_left ? e_max - db : dk;
  CoeffTable t(lo, hi, ez, ew, z_left, !z_left);
  for (int e = 0; e <= e_max; ++e) {
    const auto& a = block(0, kFull, db, e);
    const auto& b = block(1, kFull, e, dk);
    const auto& nv = fock_.norms(e);
    cplx acc = 0.0;
    for (Eigen::Index v = 0; v < nv.size(); ++v) acc += a(ib, v) * b(v, ik) / nv[v];
    t[z_left ? e - db : dk - e] = acc * zero;
  }
  return t;
}

CoeffTable ProductEvaluator::normal(const FockState& bra, const FockState& ket) {
  const Factor& x = product_.factors[0];
  const Factor& y = product_.factors[1];
  const int db = bra.partition.degree();
  const int dk = ket.partition.degree();
  const int ib = fock_.index(bra.partition);
  const int ik = fock_.index(ket.partition);
  const cplx m = ket.momentum;
  const cplx zero = x.vertex.scalar_prefactor * y.vertex.scalar_prefactor *
                    std::exp((x.vertex.h0_log_scale + y.vertex.h0_log_scale) * m);
  cplx ez = 0.0, ew = static_cast<double>(db - dk);
  add_monomial(ez, ew, x.var, x.vertex.h0_power * m);
  add_monomial(ez, ew, y.var, y.vertex.h0_power * m);

  // <bra| X_-(u1) Y_-(u2) Y_+(u2) X_+(u1) |ket>; u2 carries |rho| - |sigma|.
  std::map<int, cplx> by_k;
  for (int r = 0; r <= db; ++r) {
    const auto& xc = block(0, kCreation, db, r);
    const auto& nr = fock_.norms(r);
    for (int v = 0; v <= std::min(r, dk); ++v) {
      const auto& yc = block(1, kCreation, r, v);
      const auto& nvv = fock_.norms(v);
      // row vector <bra| X_- |rho> N^-1 <rho| Y_- |nu> N^-1
      Eigen::RowVectorXcd left = xc.row(ib);
      for (Eigen::Index i = 0; i < nr.size(); ++i) left[i] /= nr[i];
      Eigen::RowVectorXcd mid = left * yc;
      for (Eigen::Index i = 0; i < nvv.size(); ++i) mid[i] /= nvv[i];
      for (int s = v; s <= dk; ++s) {
        const auto& ya = block(1, kAnnihilation, v, s);
        const auto& xa = block(0, kAnnihilation, s, dk);
        const auto& ns = fock_.norms(s);
        Eigen::RowVectorXcd right = mid * ya;
        cplx acc = 0.0;
        for (Eigen::Index i = 0; i < ns.size(); ++i) acc += right[i] * xa(i, ik) / ns[i];
        by_k[r - s] += acc;
      }
    }
  }
  // u1^{D - K} u2^{K}: u1 = w gives J = -K, u1 = z gives J = K - D.
  const int d = db - dk;
  int lo = 0, hi = -1;
  for (const auto& [k, v] : by_k) {
    const int j = (x.var == Var::kW) ? -k : k - d;
    if (hi < lo) lo = hi = j;
    lo = std::min(lo, j);
    hi = std::max(hi, j);
  }
  CoeffTable t(lo, hi, ez, ew, true, true);
  for (const auto& [k, v] : by_k) t[(x.var == Var::kW) ? -k : k - d] += v * zero;
  return t;
}

CoeffTable matrix_element(const OperatorProduct& product, const FockSpace& fock, const FockState& bra,
                          const FockState& ket, int window) {
  ProductEvaluator ev(fock, product);
  return ev.element(bra, ket, window);
}

}  // namespace qvir

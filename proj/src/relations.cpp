#include "qvir/relations.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <sstream>

namespace qvir {

CheckConfig make_config(const QParams& params, int ell, int k, int degree, int window, double tol) {
  CheckConfig c;
  c.q = params.q().real();
  c.t = params.t().real();
  c.ell = ell;
  c.k = k;
  c.degree = degree;
  c.window = window;
  c.tolerance = tol;
  return c;
}

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

OperatorProduct single_product(const NormalOrderedVertex& v, Var u) {
  OperatorProduct p;
  p.factors = {Factor{v, u}};
  return p;
}

OperatorProduct ordered_product(const NormalOrderedVertex& x, Var ux, const NormalOrderedVertex& y, Var uy) {
  OperatorProduct p;
  p.factors = {Factor{x, ux}, Factor{y, uy}};
  return p;
}

// :X Y: with the scalar left out.
OperatorProduct normal_product(const NormalOrderedVertex& x, Var ux, const NormalOrderedVertex& y, Var uy) {
  OperatorProduct p = ordered_product(x, ux, y, uy);
  p.normal_ordered = true;
  return p;
}

std::string describe(const FockState& bra, const FockState& ket, int j) {
  return "<" + bra.str() + "| . |" + ket.str() + ">, J=" + std::to_string(j);
}

struct PairTables {
  CoeffTable lhs;
  CoeffTable rhs;
  // Largest summand before any cancellation inside lhs or rhs (0: use the tables).
  double pieces = 0.0;
};

double max_abs(const CoeffTable& t) {
  double m = 0.0;
  for (int j = t.lo(); j <= t.hi(); ++j) m = std::max(m, std::abs(t.at(j)));
  return m;
}

using PairFn = std::function<PairTables(const FockState&, const FockState&)>;

// Runs fn over every bra/ket pair of the truncation and compares the tables
// on |J| <= window.  `extra` is folded into the residual (consistency guards).
CheckReport run_pairs(std::string name, CheckConfig config, const FockSpace& fock, cplx charge,
                      const RelationConfig& cfg, const PairFn& fn, double extra = 0.0,
                      std::string extra_location = {}) {
  const auto start = Clock::now();
  CheckReport rep;
  rep.identity = std::move(name);
  rep.config = config;
  rep.residual = extra;
  rep.worst_location = extra_location;
  try {
    for (cplx m : cfg.momenta) {
      for (int db = 0; db <= cfg.degree; ++db) {
        for (int dk = 0; dk <= cfg.degree; ++dk) {
          for (const Partition& lam : fock.basis(db)) {
            for (const Partition& mu : fock.basis(dk)) {
              const FockState ket{m, mu};
              const FockState bra{m + charge / 2.0, lam};
              const PairTables t = fn(bra, ket);
              const double scale = 1.0 / std::sqrt(std::abs(fock.norm(lam) * fock.norm(mu)));
              const TableDiff d = compare_tables(t.lhs, t.rhs, -cfg.window, cfg.window);
              const double r = d.residual * scale;
              rep.scale = std::max(rep.scale, std::max(d.scale, t.pieces) * scale);
              if (!(r <= rep.residual)) {
                rep.residual = r;
                rep.worst_location = describe(bra, ket, d.worst);
              }
            }
          }
        }
      }
    }
  } catch (const QvirError& e) {
    CheckReport bad = inconclusive_report(rep.identity, config, e.what());
    bad.runtime_ms = elapsed_ms(start);
    return bad;
  }
  rep.decide();
  rep.runtime_ms = elapsed_ms(start);
  return rep;
}

CoeffTable zero_table(const CoeffTable& like, int window) {
  CoeffTable out(-window, window, like.z_exponent(), like.w_exponent(), true, true);
  return out;
}

int eval_window(int window, int shift) { return window + std::abs(shift) + 2; }

// g(x) X(z) Y(w) - sign x^shift g(1/x) Y(w) X(z), summed over the X terms.
class Exchange {
 public:
  Exchange(const FockSpace& fock, const std::vector<NormalOrderedVertex>& xs, const NormalOrderedVertex& y,
           LaurentSeries g, cplx sign, int shift, int window)
      : g_(std::move(g)), sign_(sign), shift_(shift), window_(window) {
    for (const auto& x : xs) {
      zw_.push_back(std::make_unique<ProductEvaluator>(fock, ordered_product(x, Var::kZ, y, Var::kW)));
      wz_.push_back(std::make_unique<ProductEvaluator>(fock, ordered_product(y, Var::kW, x, Var::kZ)));
    }
  }

  CoeffTable element(const FockState& bra, const FockState& ket) {
    CoeffTable first, second;
    for (auto& ev : zw_) first += ev->element(bra, ket, window_).times_series(g_, false);
    for (auto& ev : wz_) second += ev->element(bra, ket, window_).times_series(g_, true);
    second = second.shifted(shift_);
    second *= sign_;
    pieces_ = std::max(max_abs(first), max_abs(second));
    first -= second;
    return first;
  }

  // Largest term of the last element() before the subtraction.
  double pieces() const { return pieces_; }

 private:
  std::vector<std::unique_ptr<ProductEvaluator>> zw_, wz_;
  LaurentSeries g_;
  cplx sign_;
  int shift_;
  int window_;
  double pieces_ = 0.0;
};

// Operators and scalars of one involution frame.
struct FrameOps {
  Frame frame;
  QParams P;
  NormalOrderedVertex lplus, lminus;

  FrameOps(Involution s, const QParams& base)
      : frame{s, base},
        P(frame.params()),
        lplus(frame.image([](const QParams& p) { return build_lambda(Sign::kPlus, p); })),
        lminus(frame.image([](const QParams& p) { return build_lambda(Sign::kMinus, p); })) {}

  NormalOrderedVertex vertex(int ell, int k) const {
    return frame.image([ell, k](const QParams& p) { return build_vertex(ell, k, p); });
  }
};

std::string frame_suffix(Involution s) {
  return s == Involution::kIdentity ? "" : "[" + involution_name(s) + "]";
}

cplx ipow_sign(int e) { return (e % 2 == 0) ? 1.0 : -1.0; }

// prod_{j=0}^{ell-2} (1 - t q^{-j/ell})
cplx lemma_product(int ell, const QParams& P) {
  cplx v = 1.0;
  for (int j = 0; j <= ell - 2; ++j) v *= 1.0 - P.t() * P.q_pow(-static_cast<double>(j) / ell);
  return v;
}

// prod_{j=0}^{ell-2} (t^{-1/2} q^{j/2ell} - t^{1/2} q^{-j/2ell})
cplx prop_product(int ell, const QParams& P) {
  cplx v = 1.0;
  for (int j = 0; j <= ell - 2; ++j)
    v *= P.t_pow(-0.5) * P.q_pow(j / (2.0 * ell)) - P.t_pow(0.5) * P.q_pow(-j / (2.0 * ell));
  return v;
}

int fock_degree(const RelationConfig& cfg, int window) { return ProductEvaluator::required_degree(cfg.degree, window); }
int series_order(const RelationConfig& cfg, int window) { return window + cfg.degree + 4; }

// Value of c_{V Lambda^s}(y) g~(y) at a delta support, with the largest
// mismatch between the operator-data log coefficients and the closed form.
struct SupportFactor {
  cplx value = 1.0;
  double guard = 0.0;
};

SupportFactor support_factor(Sign s, int ell, int k, const NormalOrderedVertex& V, const NormalOrderedVertex& L,
                             const FockSpace& fock, const QParams& P, cplx y, int order) {
  const auto gt = structure_spec(StructureFamily::kGTilde, ell, k);
  const ExpSumForm form = rminus_form(ell, k, P);
  SupportFactor out;
  for (int n = 1; n <= order; ++n) {
    const cplx data = static_cast<double>(n) * V.mode(n) * L.mode(-n) * fock.kappa(n) + gt.coefficient_rule(n, P);
    const cplx closed = (s == Sign::kPlus) ? cplx(0.0) : form.log_coefficient(n);
    out.guard = std::max(out.guard, std::abs(data - closed) / std::max(1.0, std::abs(closed)));
  }
  out.value = (s == Sign::kPlus) ? cplx(1.0) : form.value(y);
  return out;
}

}  // namespace

// ------------------------------------------------------------ defining relation

CheckReport check_defining_relation(const QParams& params, const RelationConfig& cfg) {
  const int wv = eval_window(cfg.window, 0);
  const FockSpace fock(params, fock_degree(cfg, wv));
  const auto T = build_T(params);
  const LaurentSeries f = structure_series(structure_spec(StructureFamily::kF, 0, 0), params, series_order(cfg, wv));
  std::vector<std::unique_ptr<ProductEvaluator>> zw, wz;
  for (const auto& a : T) {
    for (const auto& b : T) {
      zw.push_back(std::make_unique<ProductEvaluator>(fock, ordered_product(a, Var::kZ, b, Var::kW)));
      wz.push_back(std::make_unique<ProductEvaluator>(fock, ordered_product(a, Var::kW, b, Var::kZ)));
    }
  }
  const cplx lp = params.log_p();
  const cplx central = -(params.q_pow(0.5) - params.q_pow(-0.5)) * (params.t_pow(0.5) - params.t_pow(-0.5));
  auto ratio = [&](int K) -> cplx {
    // (p^K - p^{-K}) / (p^{1/2} - p^{-1/2}), with its p -> 1 limit 2K.
    if (std::abs(lp) < 1e-6) return 2.0 * K;
    return std::sinh(static_cast<double>(K) * lp) / std::sinh(0.5 * lp);
  };
  auto fn = [&](const FockState& bra, const FockState& ket) {
    CoeffTable first, second;
    for (auto& ev : zw) first += ev->element(bra, ket, wv).times_series(f, false);
    for (auto& ev : wz) second += ev->element(bra, ket, wv).times_series(f, true);
    first -= second;
    CoeffTable rhs = zero_table(first, cfg.window);
    if (bra.partition == ket.partition) {
      rhs = CoeffTable(-cfg.window, cfg.window, 0.0, 0.0, true, true);
      const cplx norm = fock.norm(ket.partition);
      for (int K = -cfg.window; K <= cfg.window; ++K) rhs[K] = central * ratio(K) * norm;
    }
    return PairTables{first, rhs};
  };
  return run_pairs("defining-relation", make_config(params, 0, 0, cfg.degree, cfg.window, cfg.tolerance), fock,
                   0.0, cfg, fn);
}

// ------------------------------------------------------------ screening

CheckReport check_screening_relation(const QParams& params, Involution frame, const RelationConfig& cfg) {
  const int wv = eval_window(cfg.window, 0);
  const FockSpace fock(params, fock_degree(cfg, wv));
  const FrameOps ops(frame, params);
  const QParams& P = ops.P;
  const NormalOrderedVertex S =
      ops.frame.image([](const QParams& p) { return build_screening(Sign::kPlus, p); });
  std::vector<std::unique_ptr<ProductEvaluator>> ts, st;
  for (const auto& L : {ops.lplus, ops.lminus}) {
    ts.push_back(std::make_unique<ProductEvaluator>(fock, ordered_product(L, Var::kZ, S, Var::kW)));
    st.push_back(std::make_unique<ProductEvaluator>(fock, ordered_product(S, Var::kW, L, Var::kZ)));
  }
  // O(w) = :Lambda^-(q^{-1/2} w) S_+(w):
  ProductEvaluator O(fock, single_product(merged(rescaled(ops.lminus, -0.5 * P.log_q()), S), Var::kW));
  const cplx pref = -(1.0 - 1.0 / P.t());
  auto fn = [&](const FockState& bra, const FockState& ket) {
    CoeffTable lhs, second;
    for (auto& ev : ts) lhs += ev->element(bra, ket, wv);
    for (auto& ev : st) second += ev->element(bra, ket, wv);
    lhs -= second;
    // -(1 - t^{-1}) [ delta(q^{-1/2} x) O(w) - q delta(q^{1/2} x) O(q w) ]
    const CoeffTable o = O.element(bra, ket, wv);
    CoeffTable rhs = o.times_delta(P.q_pow(-0.5), -cfg.window, cfg.window);
    CoeffTable shifted = o.w_scaled(P.log_q()).times_delta(P.q_pow(0.5), -cfg.window, cfg.window);
    shifted *= P.q();
    rhs -= shifted;
    rhs *= pref;
    return PairTables{lhs, rhs};
  };
  return run_pairs("screening-relation" + frame_suffix(frame),
                   make_config(params, 0, 0, cfg.degree, cfg.window, cfg.tolerance), fock, S.charge, cfg, fn);
}

// ------------------------------------------------------------ Lemma 2.1 / Prop 2.1

CheckReport check_lemma21(int ell, const QParams& params, Involution frame, const RelationConfig& cfg) {
  if (ell < 1) throw DomainError("check_lemma21: ell must be positive");
  const int shift = ell - 2;
  const int wv = eval_window(cfg.window, shift);
  const FockSpace fock(params, fock_degree(cfg, wv));
  const FrameOps ops(frame, params);
  const QParams& P = ops.P;
  const NormalOrderedVertex V = ops.vertex(ell, 0);
  const LaurentSeries g = structure_series(structure_spec(StructureFamily::kG, ell, 0), P, series_order(cfg, wv));
  Exchange lhs(fock, {ops.lplus}, V, g, ipow_sign(ell), shift, wv);
  ProductEvaluator shifted(fock, single_product(rescaled(V, -P.log_q() / static_cast<double>(ell)), Var::kW));
  const cplx c = P.p_pow(0.5) * P.t_pow(-ell / 2.0) * lemma_product(ell, P);
  const cplx alpha = P.p_pow(0.5) * P.q_pow(-1.0 / (2.0 * ell));
  auto fn = [&](const FockState& bra, const FockState& ket) {
    CoeffTable rhs = shifted.element(bra, ket, wv).times_delta(alpha, -cfg.window, cfg.window);
    rhs *= c;
    return PairTables{lhs.element(bra, ket), rhs, lhs.pieces()};
  };
  return run_pairs("lemma-2.1" + frame_suffix(frame),
                   make_config(params, ell, 0, cfg.degree, cfg.window, cfg.tolerance), fock, V.charge, cfg, fn);
}

namespace {

// Right side of Prop 2.1 as a table.
struct Prop21Rhs {
  cplx c_minus, c_plus, alpha;
  std::unique_ptr<ProductEvaluator> v_down, v_up;

  Prop21Rhs(int ell, const FockSpace& fock, const NormalOrderedVertex& V, const QParams& P) {
    const cplx pre = prop_product(ell, P);
    const double e = (ell - 1.0) * (ell - 2.0) / (4.0 * ell);
    c_minus = pre * P.p_pow(0.5) * P.t_pow(-0.5) * P.q_pow(-e);
    c_plus = -pre * ipow_sign(ell) * P.p_pow(-0.5) * P.t_pow(0.5) * P.q_pow(e);
    alpha = P.p_pow(0.5) * P.q_pow(-1.0 / (2.0 * ell));
    v_down = std::make_unique<ProductEvaluator>(
        fock, single_product(rescaled(V, -P.log_q() / static_cast<double>(ell)), Var::kW));
    v_up = std::make_unique<ProductEvaluator>(
        fock, single_product(rescaled(V, P.log_q() / static_cast<double>(ell)), Var::kW));
  }

  CoeffTable element(const FockState& bra, const FockState& ket, int wv, int window) {
    CoeffTable a = v_down->element(bra, ket, wv).times_delta(alpha, -window, window);
    a *= c_minus;
    CoeffTable b = v_up->element(bra, ket, wv).times_delta(1.0 / alpha, -window, window);
    b *= c_plus;
    a += b;
    return a;
  }
};

}  // namespace

CheckReport check_prop21(int ell, const QParams& params, Involution frame, const RelationConfig& cfg) {
  if (ell < 1) throw DomainError("check_prop21: ell must be positive");
  const int shift = ell - 2;
  const int wv = eval_window(cfg.window, shift);
  const FockSpace fock(params, fock_degree(cfg, wv));
  const FrameOps ops(frame, params);
  const NormalOrderedVertex V = ops.vertex(ell, 0);
  const LaurentSeries g =
      structure_series(structure_spec(StructureFamily::kG, ell, 0), ops.P, series_order(cfg, wv));
  Exchange lhs(fock, {ops.lplus, ops.lminus}, V, g, ipow_sign(ell), shift, wv);
  Prop21Rhs rhs(ell, fock, V, ops.P);
  auto fn = [&](const FockState& bra, const FockState& ket) {
    return PairTables{lhs.element(bra, ket), rhs.element(bra, ket, wv, cfg.window), lhs.pieces()};
  };
  return run_pairs("prop-2.1" + frame_suffix(frame),
                   make_config(params, ell, 0, cfg.degree, cfg.window, cfg.tolerance), fock, V.charge, cfg, fn);
}

// ------------------------------------------------------------ Theorem 2.1

namespace {

class AdjointContext {
 public:
  AdjointContext(int ell, const FockSpace& fock, Involution frame, int window)
      : ell_(ell),
        window_(window),
        ops_(frame, fock.params()),
        V_(ops_.vertex(ell, 0)),
        lhs_(fock, {ops_.lplus, ops_.lminus}, V_,
             structure_series(structure_spec(StructureFamily::kG, ell, 0), ops_.P, window + fock.max_degree() + 4),
             ipow_sign(ell), ell - 2, window),
        single_(fock, single_product(V_, Var::kW)) {}

  // z^n mode of the exchange combination, at w = lambda.
  cplx mode(int n, const FockState& bra, const FockState& ket, cplx lambda) {
    const CoeffTable t = lhs_.element(bra, ket).canonical();
    // z^{ez - J} w^{ew + J}; the contour picks the total z power -n.
    const double jz = t.z_exponent().real() + n;
    const int j = static_cast<int>(std::lround(jz));
    if (std::abs(jz - j) > 1e-9 || std::abs(t.z_exponent().imag()) > 1e-12) return 0.0;
    return t.at(j) * std::exp((t.w_exponent() + static_cast<double>(j)) * std::log(lambda));
  }

  cplx closed(int n, const FockState& bra, const FockState& ket, cplx lambda) {
    const QParams& P = ops_.P;
    const CoeffTable v = single_.element(bra, ket, window_);
    if (v.is_zero()) return 0.0;
    const cplx base = v.at(v.lo());
    const cplx ew = v.w_exponent() + static_cast<double>(v.lo());
    // Theta_xi V(w) at w = lambda.
    auto shifted = [&](cplx log_xi) { return base * std::exp(ew * (log_xi + std::log(lambda))); };
    const double e = ((ell_ - 1.0) * (ell_ - 2.0) + 2.0 * n) / (4.0 * ell_);
    const cplx wn = std::pow(lambda, n);
    const cplx down = P.p_pow((n + 1) / 2.0) * P.t_pow(-0.5) * P.q_pow(-e) * wn *
                      shifted(-P.log_q() / static_cast<double>(ell_));
    const cplx up = ipow_sign(ell_) * P.p_pow(-(n + 1) / 2.0) * P.t_pow(0.5) * P.q_pow(e) * wn *
                    shifted(P.log_q() / static_cast<double>(ell_));
    return prop_product(ell_, P) * (down - up);
  }

  cplx charge() const { return V_.charge; }

 private:
  int ell_;
  int window_;
  FrameOps ops_;
  NormalOrderedVertex V_;
  Exchange lhs_;
  ProductEvaluator single_;
};

}  // namespace

cplx adjoint_action(int n, int ell, const FockSpace& fock, Involution frame, const FockState& bra,
                    const FockState& ket, cplx lambda) {
  const int window = fock.max_degree() - std::max(bra.partition.degree(), ket.partition.degree()) - 2;
  if (window < std::abs(n) + std::abs(ell - 2)) throw DomainError("adjoint_action: Fock degree too small for mode n");
  AdjointContext ctx(ell, fock, frame, window);
  return ctx.mode(n, bra, ket, lambda);
}

cplx shift_operator_form(int n, int ell, const FockSpace& fock, Involution frame, const FockState& bra,
                         const FockState& ket, cplx lambda) {
  AdjointContext ctx(ell, fock, frame, 0);
  return ctx.closed(n, bra, ket, lambda);
}

CheckReport check_theorem21(int ell, int n_window, const QParams& params, Involution frame,
                            const RelationConfig& cfg, cplx lambda) {
  if (ell < 1) throw DomainError("check_theorem21: ell must be positive");
  const auto start = Clock::now();
  const int wv = eval_window(n_window, ell - 2);
  const FockSpace fock(params, fock_degree(cfg, wv));
  CheckReport rep;
  rep.identity = "theorem-2.1" + frame_suffix(frame);
  rep.config = make_config(params, ell, 0, cfg.degree, n_window, cfg.tolerance);
  try {
    AdjointContext ctx(ell, fock, frame, wv);
    for (cplx m : cfg.momenta) {
      for (int db = 0; db <= cfg.degree; ++db) {
        for (int dk = 0; dk <= cfg.degree; ++dk) {
          for (const Partition& lam : fock.basis(db)) {
            for (const Partition& mu : fock.basis(dk)) {
              const FockState ket{m, mu};
              const FockState bra{m + ctx.charge() / 2.0, lam};
              const double scale = 1.0 / std::sqrt(std::abs(fock.norm(lam) * fock.norm(mu)));
              for (int n = -n_window; n <= n_window; ++n) {
                const double r =
                    std::abs(ctx.mode(n, bra, ket, lambda) - ctx.closed(n, bra, ket, lambda)) * scale;
                if (!(r <= rep.residual)) {
                  rep.residual = r;
                  rep.worst_location = "<" + bra.str() + "| . |" + ket.str() + ">, n=" + std::to_string(n);
                }
              }
            }
          }
        }
      }
    }
  } catch (const QvirError& e) {
    CheckReport bad = inconclusive_report(rep.identity, rep.config, e.what());
    bad.runtime_ms = elapsed_ms(start);
    return bad;
  }
  rep.decide();
  rep.runtime_ms = elapsed_ms(start);
  return rep;
}

// ------------------------------------------------------------ Lemma 2.2 / Prop 2.2

namespace {

// sum_s :V(w) Lambda^s(z): R_s(alpha) delta(alpha w/z), one support.
class SupportTerm {
 public:
  SupportTerm(const FockSpace& fock, const FrameOps& ops, const NormalOrderedVertex& V, int ell, int k,
              cplx alpha, int order)
      : alpha_(alpha) {
    const std::pair<Sign, const NormalOrderedVertex*> parts[] = {{Sign::kPlus, &ops.lplus},
                                                                 {Sign::kMinus, &ops.lminus}};
    for (const auto& [s, L] : parts) {
      const SupportFactor f = support_factor(s, ell, k, V, *L, fock, ops.P, alpha, order);
      guard = std::max(guard, f.guard);
      factors_.push_back(f.value);
      evals_.push_back(std::make_unique<ProductEvaluator>(fock, normal_product(V, Var::kW, *L, Var::kZ)));
    }
  }

  CoeffTable element(const FockState& bra, const FockState& ket, int wv, int window) {
    CoeffTable out;
    for (std::size_t i = 0; i < evals_.size(); ++i) {
      CoeffTable t = evals_[i]->element(bra, ket, wv).times_delta(alpha_, -window, window);
      t *= factors_[i];
      out += t;
    }
    return out;
  }

  double guard = 0.0;

 private:
  cplx alpha_;
  std::vector<cplx> factors_;
  std::vector<std::unique_ptr<ProductEvaluator>> evals_;
};

}  // namespace

CheckReport check_lemma22(int ell, const QParams& params, Involution frame, const RelationConfig& cfg) {
  if (ell < 1) throw DomainError("check_lemma22: ell must be positive");
  const int shift = ell - 2;
  const int wv = eval_window(cfg.window, shift);
  const FockSpace fock(params, fock_degree(cfg, wv));
  const FrameOps ops(frame, params);
  const QParams& P = ops.P;
  const NormalOrderedVertex V = ops.vertex(ell, 0);
  const int order = series_order(cfg, wv);
  const LaurentSeries g = structure_series(structure_spec(StructureFamily::kG, ell, 0), P, order);
  Exchange lhs(fock, {ops.lplus}, V, g, ipow_sign(ell), shift, wv);
  const cplx alpha = P.p_pow(0.5) * P.q_pow(-1.0 / (2.0 * ell));
  SupportTerm support(fock, ops, V, ell, 0, alpha, order);
  const cplx c = P.t_pow(-ell / 2.0) * lemma_product(ell, P);
  auto fn = [&](const FockState& bra, const FockState& ket) {
    CoeffTable rhs = support.element(bra, ket, wv, cfg.window);
    rhs *= c;
    return PairTables{lhs.element(bra, ket), rhs, lhs.pieces()};
  };
  return run_pairs("lemma-2.2" + frame_suffix(frame),
                   make_config(params, ell, 0, cfg.degree, cfg.window, cfg.tolerance), fock, V.charge, cfg, fn,
                   support.guard, support.guard > 0.0 ? "support factor closed form" : "");
}

CheckReport check_prop22(int ell, int k, const QParams& params, Involution frame, const RelationConfig& cfg) {
  if (ell < 1 || k < 1) throw DomainError("check_prop22: ell and k must be positive");
  const int shift = ell + k - 4;
  const int wv = eval_window(cfg.window, shift);
  const FockSpace fock(params, fock_degree(cfg, wv));
  const FrameOps ops(frame, params);
  const QParams& P = ops.P;
  const NormalOrderedVertex V = ops.vertex(ell, k);
  const int order = series_order(cfg, wv);
  const LaurentSeries g = structure_series(structure_spec(StructureFamily::kG, ell, k), P, order);
  Exchange lhs(fock, {ops.lplus}, V, g, ipow_sign(ell + k), shift, wv);

  const double a = 1.0 / (2.0 * ell);
  const double b = 1.0 / (2.0 * k);
  const cplx alpha1 = P.p_pow(0.5) * P.q_pow(-a);
  const cplx alpha2 = P.p_pow(0.5) * P.t_pow(b);
  cplx c1 = 1.0 / (1.0 - P.q_pow(a) * P.t_pow(b));
  for (int i = 0; i <= ell - 2; ++i) c1 *= 1.0 - P.t() * P.q_pow(-static_cast<double>(i) / ell);
  for (int j = 0; j <= k - 2; ++j) c1 *= 1.0 - P.q_pow(a - 1.0) * P.t_pow(b + static_cast<double>(j) / k);
  cplx c2 = 1.0 / (1.0 - P.q_pow(-a) * P.t_pow(-b));
  for (int j = 0; j <= k - 2; ++j) c2 *= 1.0 - P.q_pow(-1.0) * P.t_pow(static_cast<double>(j) / k);
  for (int i = 0; i <= ell - 2; ++i) c2 *= 1.0 - P.t_pow(1.0 - b) * P.q_pow(-a - static_cast<double>(i) / ell);
  const cplx pre = P.q_pow(k / 2.0) * P.t_pow(-ell / 2.0);

  SupportTerm s1(fock, ops, V, ell, k, alpha1, order);
  SupportTerm s2(fock, ops, V, ell, k, alpha2, order);
  const double guard = std::max(s1.guard, s2.guard);
  auto fn = [&](const FockState& bra, const FockState& ket) {
    CoeffTable rhs = s1.element(bra, ket, wv, cfg.window);
    rhs *= pre * c1;
    CoeffTable second = s2.element(bra, ket, wv, cfg.window);
    second *= pre * c2;
    rhs += second;
    return PairTables{lhs.element(bra, ket), rhs, lhs.pieces()};
  };
  return run_pairs("prop-2.2" + frame_suffix(frame),
                   make_config(params, ell, k, cfg.degree, cfg.window, cfg.tolerance), fock, V.charge, cfg, fn,
                   guard, guard > 0.0 ? "support factor closed form" : "");
}

// ------------------------------------------------------------ vertex data

CheckReport check_fusion(int ell, const QParams& params, bool omega_image, double tol, int order) {
  const auto start = Clock::now();
  CheckReport rep;
  rep.identity = omega_image ? "fusion[omega]" : "fusion";
  rep.config = make_config(params, omega_image ? 0 : ell, omega_image ? ell : 0, 0, order, tol);
  const NormalOrderedVertex target = omega_image ? build_vertex(0, ell, params) : build_vertex(ell, 0, params);
  rep.residual = vertex_data_distance(fused_vertex(ell, params, omega_image), target, order);
  rep.worst_location = "vertex data, modes |n| <= " + std::to_string(order);
  rep.decide();
  rep.runtime_ms = elapsed_ms(start);
  return rep;
}

CheckReport check_shift_identity(int ell, const QParams& params, double tol, int order) {
  const auto start = Clock::now();
  CheckReport rep;
  rep.identity = "shift-identity";
  rep.config = make_config(params, ell, 0, 0, order, tol);
  const NormalOrderedVertex V = build_vertex(ell, 0, params);
  const NormalOrderedVertex lhs = rescaled(V, -params.log_q() / static_cast<double>(ell));
  const cplx log_alpha = 0.5 * params.log_p() - params.log_q() / (2.0 * ell);
  NormalOrderedVertex rhs = merged(V, rescaled(build_lambda(Sign::kPlus, params), log_alpha));
  rhs.scalar_prefactor *= params.p_pow(-0.5);
  rep.residual = vertex_data_distance(lhs, rhs, order);
  rep.worst_location = "vertex data, modes |n| <= " + std::to_string(order);
  rep.decide();
  rep.runtime_ms = elapsed_ms(start);
  return rep;
}

}  // namespace qvir

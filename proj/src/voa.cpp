#include "qvir/voa.hpp"

namespace qvir {

namespace {

// x^e - x^{-e} and x^e + x^{-e} with x = exp(log_base).
cplx sh(cplx log_base, double e) {
  return std::exp(e * log_base) - std::exp(-e * log_base);
}

cplx ch(cplx log_base, double e) { return std::exp(e * log_base) + std::exp(-e * log_base); }

NormalOrderedVertex vertex_l1(int ell, const QParams& P) {
  NormalOrderedVertex v;
  const cplx lq = P.log_q();
  v.mode_coefficient = [lq, ell](int n) {
    const double e = n / (2.0 * ell);
    return 1.0 / (std::exp(e * lq) - std::exp(-e * lq));
  };
  v.charge = -static_cast<double>(ell) * P.sqrt_beta();
  v.h0_power = v.charge;
  v.label = "V(" + std::to_string(ell + 1) + ",1)";
  return v;
}

}  // namespace

NormalOrderedVertex build_lambda(Sign sign, const QParams& params) {
  if (sign == Sign::kMinus) {
    NormalOrderedVertex v = flip(Involution::kTheta, build_lambda(Sign::kPlus, params.theta()));
    v.label = "L-";
    return v;
  }
  NormalOrderedVertex v;
  const cplx lp = params.log_p();
  v.mode_coefficient = [lp](int n) { return std::exp(n / 2.0 * lp); };
  v.h0_log_scale = params.sqrt_beta() * params.log_q();
  v.scalar_prefactor = params.p_pow(0.5);
  v.label = "L+";
  return v;
}

std::vector<NormalOrderedVertex> build_T(const QParams& params) {
  return {build_lambda(Sign::kPlus, params), build_lambda(Sign::kMinus, params)};
}

NormalOrderedVertex build_screening(Sign sign, const QParams& params) {
  if (sign == Sign::kMinus) {
    NormalOrderedVertex v = flip(Involution::kOmega, build_screening(Sign::kPlus, params.omega()));
    v.label = "S-";
    return v;
  }
  NormalOrderedVertex v;
  const cplx lp = params.log_p();
  const cplx lq = params.log_q();
  v.mode_coefficient = [lp, lq](int n) { return -ch(lp, n / 2.0) / sh(lq, n / 2.0); };
  v.charge = 2.0 * params.sqrt_beta();
  v.h0_power = v.charge;
  v.label = "S+";
  return v;
}

NormalOrderedVertex build_vertex(int ell, int k, const QParams& params) {
  if (ell < 0 || k < 0) throw DomainError("build_vertex: negative type");
  if (ell == 0 && k == 0) throw DomainError("build_vertex: (1,1) is the identity operator");
  if (k == 0) return vertex_l1(ell, params);
  NormalOrderedVertex right = flip(Involution::kOmega, vertex_l1(k, params.omega()));
  right.label = "V(1," + std::to_string(k + 1) + ")";
  if (ell == 0) return right;
  NormalOrderedVertex v = merged(vertex_l1(ell, params), right);
  v.label = "V(" + std::to_string(ell + 1) + "," + std::to_string(k + 1) + ")";
  return v;
}

std::string involution_name(Involution s) {
  switch (s) {
    case Involution::kIdentity: return "id";
    case Involution::kTheta: return "theta";
    case Involution::kOmega: return "omega";
    case Involution::kOmegaTheta: return "omega.theta";
  }
  return "?";
}

QParams apply(Involution s, const QParams& params) {
  switch (s) {
    case Involution::kIdentity: return params;
    case Involution::kTheta: return params.theta();
    case Involution::kOmega: return params.omega();
    case Involution::kOmegaTheta: return params.theta().omega();
  }
  return params;
}

NormalOrderedVertex flip(Involution s, const NormalOrderedVertex& v) {
  if (s == Involution::kIdentity) return v;
  NormalOrderedVertex out = v;
  auto base = v.mode_coefficient;
  out.mode_coefficient = [base](int n) { return base ? -base(n) : cplx(0.0); };
  // theta fixes the zero modes; omega (alone or after theta) flips them.
  if (s != Involution::kTheta) {
    out.charge = -v.charge;
    out.h0_power = -v.h0_power;
    out.h0_log_scale = -v.h0_log_scale;
  }
  if (s == Involution::kOmegaTheta) out.mode_coefficient = base;
  return out;
}

// ------------------------------------------------------------ structure functions

namespace {

cplx f_rule(int n, const QParams& P) {
  return -sh(P.log_q(), n / 2.0) * sh(P.log_t(), n / 2.0) / ch(P.log_p(), n / 2.0);
}

cplx g_rule(int ell, int n, const QParams& P) {
  const cplx d = sh(P.log_q(), n / (2.0 * ell));
  const cplx first = -sh(P.log_t(), static_cast<double>(n)) / d / ch(P.log_p(), n / 2.0);
  const cplx second = (P.p_pow(-n / 2.0) * P.q_pow(static_cast<double>(n) / ell) -
                       P.p_pow(n / 2.0) * P.q_pow(-static_cast<double>(n) / ell)) /
                      d;
  return first + second;
}

cplx gtilde_rule(int ell, int n, const QParams& P) {
  return -P.p_pow(-n / 2.0) * sh(P.log_q(), n / 2.0) * sh(P.log_t(), n / 2.0) /
         (sh(P.log_q(), n / (2.0 * ell)) * ch(P.log_p(), n / 2.0));
}

}  // namespace

StructureFunctionSpec structure_spec(StructureFamily family, int ell, int k) {
  StructureFunctionSpec s;
  s.family = family;
  s.ell = ell;
  s.k = k;
  const std::string type = "(" + std::to_string(ell + 1) + "," + std::to_string(k + 1) + ")";
  switch (family) {
    case StructureFamily::kF:
      s.coefficient_rule = f_rule;
      s.label = "f";
      break;
    case StructureFamily::kG:
      if (ell == 0 && k == 0) throw DomainError("structure_spec: g needs ell or k positive");
      s.coefficient_rule = [ell, k](int n, const QParams& P) {
        cplx c = 0.0;
        if (ell > 0) c += g_rule(ell, n, P);
        if (k > 0) c += g_rule(k, n, P.omega());
        return c;
      };
      s.label = "g" + type;
      break;
    case StructureFamily::kGTilde:
      if (ell == 0 && k == 0) throw DomainError("structure_spec: g~ needs ell or k positive");
      s.coefficient_rule = [ell, k](int n, const QParams& P) {
        cplx c = 0.0;
        if (ell > 0) c += gtilde_rule(ell, n, P);
        if (k > 0) c += gtilde_rule(k, n, P.theta().omega());
        return c;
      };
      s.label = "g~" + type;
      break;
  }
  return s;
}

LaurentSeries structure_series(const StructureFunctionSpec& spec, const QParams& params, int order) {
  if (order < 0) throw DomainError("structure_series: negative order");
  auto rule = spec.coefficient_rule;
  return series_exp([&](int n) { return rule(n, params) / static_cast<double>(n); }, order);
}

// ------------------------------------------------------------ contraction

Contraction contract(const NormalOrderedVertex& a, Var u1, const NormalOrderedVertex& b, Var u2,
                     const FockSpace& fock, int order) {
  if (u1 == u2) throw DomainError("contract: factors must sit at distinct variables");
  Contraction c;
  c.series = series_exp([&](int n) { return a.mode(n) * b.mode(-n) * fock.kappa(n); }, order);
  c.left = u1;
  c.left_exponent = a.h0_power * b.charge / 2.0;
  c.constant = std::exp(a.h0_log_scale * b.charge / 2.0);
  return c;
}

OperatorProduct normal_order(const std::vector<Factor>& factors, const FockSpace& fock, int order) {
  if (factors.empty()) throw DomainError("normal_order: empty product");
  OperatorProduct out;
  if (factors.size() == 1) {
    out.factors = factors;
    return out;
  }
  if (factors.size() != 2) {
    // Same-variable runs only; fold them into one vertex.
    NormalOrderedVertex acc = factors[0].vertex;
    for (std::size_t i = 1; i < factors.size(); ++i) {
      if (factors[i].var != factors[0].var)
        throw DomainError("normal_order: more than two factors must share one variable");
      acc = merged(acc, factors[i].vertex);
    }
    out.factors = {Factor{acc, factors[0].var}};
    return out;
  }
  if (factors[0].var == factors[1].var) {
    out.factors = {Factor{merged(factors[0].vertex, factors[1].vertex), factors[0].var}};
    return out;
  }
  out.factors = factors;
  out.normal_ordered = true;
  out.contraction = contract(factors[0].vertex, factors[0].var, factors[1].vertex, factors[1].var, fock, order);
  return out;
}

NormalOrderedVertex fused_vertex(int ell, const QParams& params, bool omega_image) {
  if (ell < 1) throw DomainError("fused_vertex: ell must be positive");
  const QParams base = omega_image ? params.omega() : params;
  const NormalOrderedVertex v21 = vertex_l1(1, base);
  NormalOrderedVertex acc;
  for (int j = 1; j <= ell; ++j) {
    NormalOrderedVertex part = rescaled(v21, (ell + 1.0 - 2.0 * j) / (2.0 * ell) * base.log_q());
    acc = (j == 1) ? part : merged(acc, part);
  }
  if (omega_image) acc = flip(Involution::kOmega, acc);
  acc.label = omega_image ? "fused V(1," + std::to_string(ell + 1) + ")"
                          : "fused V(" + std::to_string(ell + 1) + ",1)";
  return acc;
}

// ------------------------------------------------------------ closed forms

cplx ExpSumForm::log_coefficient(int n) const {
  cplx c = 0.0;
  for (const auto& [rho, w] : terms) c += w * std::pow(rho, n);
  return c;
}

cplx ExpSumForm::value(cplx y) const {
  cplx v = 1.0;
  for (const auto& [rho, w] : terms) v *= std::pow(1.0 - rho * y, -w);
  return v;
}

ExpSumForm rminus_form(int ell, int k, const QParams& params) {
  // -(t^{n/2} - t^{-n/2}) sum_j q^{n(ell-1-2j)/2ell} + (q^{n/2} - q^{-n/2}) sum_j t^{n(k-1-2j)/2k}
  ExpSumForm f;
  for (int j = 0; j < ell; ++j) {
    const cplx s = params.q_pow((ell - 1.0 - 2.0 * j) / (2.0 * ell));
    f.terms.emplace_back(params.t_pow(0.5) * s, -1.0);
    f.terms.emplace_back(params.t_pow(-0.5) * s, 1.0);
  }
  for (int j = 0; j < k; ++j) {
    const cplx s = params.t_pow((k - 1.0 - 2.0 * j) / (2.0 * k));
    f.terms.emplace_back(params.q_pow(0.5) * s, 1.0);
    f.terms.emplace_back(params.q_pow(-0.5) * s, -1.0);
  }
  return f;
}

LaurentSeries rsign_series(Sign sign, int ell, int k, const FockSpace& fock, int order) {
  const QParams& P = fock.params();
  const Contraction c =
      contract(build_vertex(ell, k, P), Var::kW, build_lambda(sign, P), Var::kZ, fock, order);
  return series_mul(c.series, structure_series(structure_spec(StructureFamily::kGTilde, ell, k), P, order));
}

}  // namespace qvir

#include "qvir/suite.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "qvir/correlators.hpp"
#include "qvir/fock.hpp"
#include "qvir/qspecial.hpp"
#include "qvir/relations.hpp"
#include "qvir/series.hpp"

namespace qvir {

namespace {

using json = nlohmann::json;

const std::vector<std::string> kSuites = {
    "all",     "gram",    "defining-relation", "screening", "lemma21",        "prop21",
    "theorem21", "lemma22", "prop22",          "fusion",    "shift-identity", "delta-identity",
    "qspecial", "four-point", "connection",    "pseudo-constant", "stability"};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError("config: " + key + " expects a number, got '" + v + "'");
  }
}

long long to_int(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const long long i = std::stoll(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return i;
  } catch (const std::exception&) {
    throw ConfigError("config: " + key + " expects an integer, got '" + v + "'");
  }
}

std::string valid_suite_list() {
  std::string s;
  for (const auto& n : kSuites) s += (s.empty() ? "" : ", ") + n;
  return s;
}

double relative(cplx a, cplx b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

// Tracks the worst relative mismatch of a list of sample comparisons.
struct Worst {
  double residual = 0.0;
  std::string where;
  void note(double r, const std::string& w) {
    if (!(r <= residual)) {
      residual = r;
      where = w;
    }
  }
};

CheckReport scalar_report(const std::string& identity, double q, double tol, const Worst& w) {
  CheckReport rep;
  rep.identity = identity;
  rep.config.q = q;
  rep.config.tolerance = tol;
  rep.residual = w.residual;
  rep.worst_location = w.where;
  rep.decide();
  return rep;
}

// Guards a checker so library errors become inconclusive records.
std::function<CheckReport()> guarded(std::string identity, CheckConfig config, std::function<CheckReport()> f) {
  return [identity = std::move(identity), config, f = std::move(f)]() {
    try {
      return f();
    } catch (const QvirError& e) {
      return inconclusive_report(identity, config, e.what());
    }
  };
}

RelationConfig relation_config(const SuiteConfig& cfg, int degree) {
  RelationConfig rc;
  rc.degree = degree;
  rc.window = cfg.window;
  rc.tolerance = cfg.tolerance;
  return rc;
}

CorrelatorParams correlator_params(const SuiteConfig& cfg, const QParams& P) {
  CorrelatorParams cp{P, cfg.ell, cfg.L, cfg.r};
  if (cfg.r == 0.0) {
    const double beta = P.beta().real();
    if (beta >= 1.0) throw DomainError("connection: r = 1/(1 - beta) needs beta < 1; pass --r");
    cp.r = 1.0 / (1.0 - beta);
  }
  return cp;
}

// Relation checkers compared across a degree step.
std::vector<std::function<CheckReport(int)>> stability_checkers(const SuiteConfig& cfg, const QParams& P) {
  std::vector<std::function<CheckReport(int)>> out;
  auto rc = [cfg](int d) { return relation_config(cfg, d); };
  out.push_back([=](int d) { return check_defining_relation(P, rc(d)); });
  for (Involution f : {Involution::kIdentity, Involution::kOmega}) {
    out.push_back([=](int d) { return check_screening_relation(P, f, rc(d)); });
    out.push_back([=](int d) { return check_lemma21(cfg.ell, P, f, rc(d)); });
    out.push_back([=](int d) { return check_prop21(cfg.ell, P, f, rc(d)); });
  }
  out.push_back([=](int d) { return check_lemma22(cfg.ell, P, Involution::kIdentity, rc(d)); });
  out.push_back([=](int d) { return check_prop22(cfg.ell, cfg.k, P, Involution::kIdentity, rc(d)); });
  return out;
}

// Rounding floor of a residual: 128 ulp of the largest compared magnitude.
double rounding_floor(const CheckReport& r) { return 128.0 * std::numeric_limits<double>::epsilon() * r.scale; }

}  // namespace

void SuiteConfig::validate() const {
  if (!(q > 0.0 && q < 1.0) || !(t > 0.0 && t < 1.0))
    throw ConfigError("config: need 0 < q, t < 1 (got q = " + fmt(q) + ", t = " + fmt(t) + ")");
  if (q == t) throw ConfigError("config: q = t gives p = 1, excluded by the default regime");
  if (ell < 1 || k < 1) throw ConfigError("config: ell and k must be >= 1");
  if (degree < 0 || window < 0) throw ConfigError("config: degree and window must be >= 0");
  if (degree < window) throw ConfigError("config: degree must be >= window");
  if (!(tolerance > 0.0)) throw ConfigError("config: tol must be positive");
  if (r < 0.0) throw ConfigError("config: r must be positive (0 derives it from beta)");
  if (threads < 0) throw ConfigError("config: threads must be >= 0");
  if (suites.empty()) throw ConfigError("config: no suite selected; valid: " + valid_suite_list());
  for (const auto& s : suites)
    if (std::find(kSuites.begin(), kSuites.end(), s) == kSuites.end())
      throw ConfigError("config: unknown suite '" + s + "'; valid: " + valid_suite_list());
}

const std::vector<std::string>& suite_names() { return kSuites; }

void apply_setting(SuiteConfig& cfg, const std::string& key, const std::string& raw) {
  const std::string v = trim(raw);
  if (key == "q") cfg.q = to_double(key, v);
  else if (key == "t") cfg.t = to_double(key, v);
  else if (key == "ell") cfg.ell = static_cast<int>(to_int(key, v));
  else if (key == "k") cfg.k = static_cast<int>(to_int(key, v));
  else if (key == "L") cfg.L = to_double(key, v);
  else if (key == "r") cfg.r = to_double(key, v);
  else if (key == "degree") cfg.degree = static_cast<int>(to_int(key, v));
  else if (key == "window") cfg.window = static_cast<int>(to_int(key, v));
  else if (key == "tol") cfg.tolerance = to_double(key, v);
  else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(to_int(key, v));
  else if (key == "threads") cfg.threads = static_cast<int>(to_int(key, v));
  else if (key == "suite") {
    cfg.suites.clear();
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      if (!item.empty()) cfg.suites.push_back(item);
    }
  } else if (key == "format") {
    if (v == "json") cfg.format = OutputFormat::kJson;
    else if (v == "csv") cfg.format = OutputFormat::kCsv;
    else if (v == "text") cfg.format = OutputFormat::kText;
    else throw ConfigError("config: format must be json, csv or text");
  } else {
    throw ConfigError("config: unknown key '" + key + "'");
  }
}

void apply_config_file(SuiteConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot read " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config: " + path + ":" + std::to_string(lineno) + ": expected key = value");
    apply_setting(cfg, trim(line.substr(0, eq)), line.substr(eq + 1));
  }
}

void apply_environment(SuiteConfig& cfg, const std::string& prefix) {
  for (const char* key : {"q", "t", "ell", "k", "L", "r", "degree", "window", "tol", "suite", "format", "seed",
                          "threads"}) {
    std::string name = prefix;
    for (const char* c = key; *c; ++c) name += static_cast<char>(std::toupper(static_cast<unsigned char>(*c)));
    if (const char* v = std::getenv(name.c_str())) apply_setting(cfg, key, v);
  }
}

std::vector<CheckReport> run_parallel(const std::vector<std::function<CheckReport()>>& tasks, int threads) {
  std::vector<CheckReport> out(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < tasks.size(); i = next++) out[i] = tasks[i]();
  };
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t n = std::min<std::size_t>(threads > 0 ? threads : hw, std::max<std::size_t>(tasks.size(), 1));
  std::vector<std::jthread> pool;
  for (std::size_t i = 1; i < n; ++i) pool.emplace_back(worker);
  worker();
  return out;
}

std::vector<CheckReport> run_suites(const SuiteConfig& cfg) {
  cfg.validate();
  const QParams P = QParams::make(cfg.q, cfg.t);
  auto selected = [&](const std::string& name) {
    return std::find(cfg.suites.begin(), cfg.suites.end(), name) != cfg.suites.end() ||
           std::find(cfg.suites.begin(), cfg.suites.end(), "all") != cfg.suites.end();
  };
  CheckConfig cell = make_config(P, cfg.ell, cfg.k, cfg.degree, cfg.window, cfg.tolerance);
  cell.L = cfg.L;
  cell.r = cfg.r;

  std::vector<std::function<CheckReport()>> tasks;
  auto add = [&](const std::string& id, std::function<CheckReport()> f) {
    tasks.push_back(guarded(id, cell, std::move(f)));
  };
  const RelationConfig rc = relation_config(cfg, cfg.degree);
  const int ell = cfg.ell, k = cfg.k;
  const double tol = cfg.tolerance;

  if (selected("gram")) add("gram", [=] { return check_gram(P, cfg.degree, tol); });
  if (selected("defining-relation")) add("defining-relation", [=] { return check_defining_relation(P, rc); });
  for (Involution f : {Involution::kIdentity, Involution::kOmega}) {
    if (selected("screening")) add("screening-relation", [=] { return check_screening_relation(P, f, rc); });
    if (selected("lemma21")) add("lemma-2.1", [=] { return check_lemma21(ell, P, f, rc); });
    if (selected("prop21")) add("prop-2.1", [=] { return check_prop21(ell, P, f, rc); });
  }
  if (selected("theorem21"))
    add("theorem-2.1", [=] { return check_theorem21(ell, cfg.window, P, Involution::kIdentity, rc); });
  if (selected("lemma22")) add("lemma-2.2", [=] { return check_lemma22(ell, P, Involution::kIdentity, rc); });
  if (selected("prop22")) {
    add("prop-2.2", [=] { return check_prop22(ell, k, P, Involution::kIdentity, rc); });
    add("prop-2.2", [=] { return check_prop22(ell, k, P, Involution::kOmegaTheta, rc); });
  }
  if (selected("fusion")) {
    add("fusion", [=] { return check_fusion(ell, P, false, tol); });
    add("fusion", [=] { return check_fusion(ell, P, true, tol); });
  }
  if (selected("shift-identity")) add("shift-identity", [=] { return check_shift_identity(ell, P, tol); });
  if (selected("delta-identity")) {
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int m = 1; m <= 3; ++m) {
      std::vector<cplx> r;
      for (int i = 0; i < m; ++i) r.emplace_back(unit(rng));
      add("delta-identity", [=] {
        CheckReport rep = check_delta_identity(r, cfg.window, tol);
        rep.config.q = cfg.q;
        rep.config.t = cfg.t;
        rep.config.k = m;
        return rep;
      });
    }
  }
  if (selected("qspecial")) {
    add("qbinomial", [=] { return check_qbinomial(cfg.q, tol); });
    add("gamma-functional", [=] { return check_gamma_functional(cfg.q, tol); });
    add("theta-quasi-periodicity", [=] { return check_theta_quasi_periodicity(cfg.q, tol); });
    add("jackson-unit", [=] { return check_jackson_unit(cfg.q); });
  }
  if (selected("four-point")) {
    add("four-point", [=] {
      const CorrelatorParams cp = correlator_params(cfg, P);
      return merge_reports("four-point", {check_four_point(cp, 1.0, 0.5, tol), check_four_point(cp, 1.0, 0.2, tol)});
    });
  }
  if (selected("connection")) {
    const std::vector<cplx> samples = {1.9, 3.3, 6.37, 9.13};
    add("connection-formula", [=] { return check_connection_formula(samples, correlator_params(cfg, P), tol); });
    add("connection-identity", [=] { return check_connection_identity(correlator_params(cfg, P), tol); });
    add("connection-inversion",
        [=] { return check_connection_inversion({0.6, 2.3, 4.1}, correlator_params(cfg, P), tol); });
  }
  if (selected("pseudo-constant")) {
    add("pseudo-constant", [=] {
      return merge_reports("pseudo-constant",
                           {pseudo_constant_check(ell, P, 0.35, tol), pseudo_constant_check(ell, P, 0.5, tol)});
    });
  }
  if (selected("stability")) {
    add("truncation-stability", [=] {
      CheckReport rep;
      rep.identity = "truncation-stability";
      rep.config = cell;
      rep.config.degree = cfg.degree + 2;
      // Residual: growth from degree D to D + 2 beyond both the degree-D
      // residual and the degree-(D+2) rounding floor; must be exactly zero.
      rep.config.tolerance = 0.0;
      for (const auto& check : stability_checkers(cfg, P)) {
        const CheckReport lo = check(cfg.degree);
        const CheckReport hi = check(cfg.degree + 2);
        if (lo.status == CheckStatus::kInconclusive || hi.status == CheckStatus::kInconclusive)
          return inconclusive_report(rep.identity, rep.config, lo.identity + " inconclusive");
        const double excess = std::max(0.0, hi.residual - std::max(lo.residual, rounding_floor(hi)));
        if (!(excess <= rep.residual) || rep.worst_location.empty()) {
          rep.residual = excess;
          rep.worst_location = hi.identity + ": " + fmt(lo.residual) + " -> " + fmt(hi.residual) +
                               " (floor " + fmt(rounding_floor(hi)) + ")";
        }
      }
      rep.status = rep.residual == 0.0 ? CheckStatus::kPass : CheckStatus::kFail;
      return rep;
    });
  }
  return run_parallel(tasks, cfg.threads);
}

int exit_status(const std::vector<CheckReport>& reports) {
  bool inconclusive = false;
  for (const auto& r : reports) {
    if (r.status == CheckStatus::kFail) return 1;
    if (r.status == CheckStatus::kInconclusive) inconclusive = true;
  }
  return inconclusive ? 2 : 0;
}

// ------------------------------------------------------------ emitters

namespace {

json to_json(const CheckReport& r) {
  json j;
  j["identity"] = r.identity;
  j["pass"] = r.pass();
  if (r.status == CheckStatus::kInconclusive) j["residual"] = nullptr;
  else j["residual"] = r.residual;
  j["tolerance"] = r.config.tolerance;
  j["worst_location"] = r.worst_location;
  j["params"] = {{"q", r.config.q}, {"t", r.config.t}, {"ell", r.config.ell},
                 {"k", r.config.k}, {"L", r.config.L}, {"r", r.config.r}};
  j["truncation"] = {{"degree", r.config.degree}, {"window", r.config.window}};
  j["runtime_ms"] = r.runtime_ms;
  return j;
}

// Shortest scientific form that round-trips.
std::string sci(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::scientific);
  return std::string(buf, res.ptr);
}

std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) out += (c == '"') ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

const char* status_word(CheckStatus s) {
  switch (s) {
    case CheckStatus::kPass: return "PASS";
    case CheckStatus::kFail: return "FAIL";
    case CheckStatus::kInconclusive: return "INCONCLUSIVE";
  }
  return "?";
}

}  // namespace

std::string emit_json(const std::vector<CheckReport>& reports) {
  json arr = json::array();
  for (const auto& r : reports) arr.push_back(to_json(r));
  return arr.dump(2) + "\n";
}

std::vector<CheckReport> parse_json(const std::string& text) {
  std::vector<CheckReport> out;
  const json arr = json::parse(text);
  for (const auto& j : arr) {
    CheckReport r;
    r.identity = j.at("identity").get<std::string>();
    r.config.tolerance = j.at("tolerance").get<double>();
    r.worst_location = j.at("worst_location").get<std::string>();
    const auto& p = j.at("params");
    r.config.q = p.at("q").get<double>();
    r.config.t = p.at("t").get<double>();
    r.config.ell = p.at("ell").get<int>();
    r.config.k = p.at("k").get<int>();
    r.config.L = p.at("L").get<double>();
    r.config.r = p.at("r").get<double>();
    r.config.degree = j.at("truncation").at("degree").get<int>();
    r.config.window = j.at("truncation").at("window").get<int>();
    r.runtime_ms = j.at("runtime_ms").get<double>();
    if (j.at("residual").is_null()) {
      r.status = CheckStatus::kInconclusive;
      r.residual = std::nan("");
    } else {
      r.residual = j.at("residual").get<double>();
      r.status = j.at("pass").get<bool>() ? CheckStatus::kPass : CheckStatus::kFail;
    }
    out.push_back(r);
  }
  return out;
}

std::string emit_csv(const std::vector<CheckReport>& reports) {
  std::ostringstream os;
  os << "identity,pass,residual,tolerance,worst_location,q,t,ell,k,L,r,degree,window,runtime_ms\n";
  for (const auto& r : reports) {
    const auto& c = r.config;
    os << csv_quote(r.identity) << ',' << (r.pass() ? "true" : "false") << ','
       << (r.status == CheckStatus::kInconclusive ? "" : sci(r.residual)) << ',' << sci(c.tolerance) << ','
       << csv_quote(r.worst_location) << ',' << sci(c.q) << ',' << sci(c.t) << ',' << c.ell << ',' << c.k << ','
       << sci(c.L) << ',' << sci(c.r) << ',' << c.degree << ',' << c.window << ',' << r.runtime_ms << '\n';
  }
  return os.str();
}

std::string emit_text(const std::vector<CheckReport>& reports) {
  std::ostringstream os;
  char line[256];
  std::snprintf(line, sizeof line, "%-26s %-13s %-24s %-9s %s\n", "identity", "status", "residual", "tol",
                "worst location");
  os << line;
  for (const auto& r : reports) {
    std::snprintf(line, sizeof line, "%-26s %-13s %-24s %-9.1e ", r.identity.c_str(), status_word(r.status),
                  sci(r.residual).c_str(), r.config.tolerance);
    os << line << r.worst_location << '\n';
  }
  int pass = 0, fail = 0, inc = 0;
  for (const auto& r : reports) {
    if (r.status == CheckStatus::kPass) ++pass;
    else if (r.status == CheckStatus::kFail) ++fail;
    else ++inc;
  }
  os << pass << " passed, " << fail << " failed, " << inc << " inconclusive\n";
  return os.str();
}

std::string emit(const std::vector<CheckReport>& reports, OutputFormat format) {
  switch (format) {
    case OutputFormat::kJson: return emit_json(reports);
    case OutputFormat::kCsv: return emit_csv(reports);
    case OutputFormat::kText: return emit_text(reports);
  }
  return {};
}

// ------------------------------------------------------------ q-special checks

CheckReport check_qbinomial(double q, double tol) {
  Worst w;
  const cplx Q = q;
  // 2phi1(a, b; b; q, z) = (az; q)_inf / (z; q)_inf
  for (cplx a : {cplx(0.3), cplx(-0.8), cplx(2.5), cplx(0.4, 0.7)})
    for (cplx z : {cplx(0.1), cplx(-0.6), cplx(0.5, 0.3), cplx(0.8)}) {
      const cplx lhs = phi21(a, 0.37, 0.37, Q, z);
      const cplx rhs = pochhammer(a * z, Q, kInfiniteOrder) / pochhammer(z, Q, kInfiniteOrder);
      w.note(relative(lhs, rhs), "binomial a=" + fmt(a.real()) + " z=" + fmt(z.real()));
    }
  // q-Gauss: 2phi1(a, b; c; q, c/ab) = (c/a, c/b; q)_inf / (c, c/ab; q)_inf
  for (auto [a, b, c] : {std::tuple{0.2, 0.3, 0.05}, std::tuple{-0.5, 0.4, 0.1}, std::tuple{1.5, 2.0, 0.9}}) {
    const cplx z = c / (a * b);
    const cplx lhs = phi21(a, b, c, Q, z);
    const cplx rhs = pochhammer(c / a, Q, kInfiniteOrder) * pochhammer(c / b, Q, kInfiniteOrder) /
                     (pochhammer(c, Q, kInfiniteOrder) * pochhammer(z, Q, kInfiniteOrder));
    w.note(relative(lhs, rhs), "gauss a=" + fmt(a) + " b=" + fmt(b) + " c=" + fmt(c));
  }
  return scalar_report("qbinomial", q, tol, w);
}

CheckReport check_gamma_functional(double q, double tol) {
  Worst w;
  const cplx Q = q;
  for (double x : {-2.7, -1.4, -0.4, 0.3, 0.7, 1.0, 1.5, 2.2, 3.1, 4.6})
    for (double y : {0.0, 0.45}) {
      const cplx z(x, y);
      const cplx lhs = gamma_q(z + 1.0, Q);
      const cplx rhs = (1.0 - std::pow(Q, z)) / (1.0 - Q) * gamma_q(z, Q);
      w.note(relative(lhs, rhs), "z=" + fmt(x) + (y != 0.0 ? "+" + fmt(y) + "i" : ""));
    }
  return scalar_report("gamma-functional", q, tol, w);
}

CheckReport check_theta_quasi_periodicity(double q, double tol) {
  Worst w;
  const cplx Q = q;
  const cplx zs[] = {0.3, 0.55, 1.7, -0.4, 2.9, cplx(0.2, 0.6), cplx(-1.1, 0.3), cplx(0.8, -0.5), 5.3, 0.11};
  for (cplx z : zs) {
    // theta(q z) = -z^{-1} theta(z)
    w.note(relative(theta_q(Q * z, Q), -theta_q(z, Q) / z), "z=" + fmt(z.real()) + "," + fmt(z.imag()));
  }
  return scalar_report("theta-quasi-periodicity", q, tol, w);
}

CheckReport check_jackson_unit(double q, double tol) {
  Worst w;
  const cplx v = jackson_integral([](cplx) { return cplx(1.0); }, JacksonKind::kZeroToA, 1.0, 0.0, q);
  w.note(std::abs(v - 1.0), "int_0^1 1 d_q z = " + sci(v.real()));
  return scalar_report("jackson-unit", q, tol, w);
}

}  // namespace qvir

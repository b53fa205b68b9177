// qvir verify | eval

#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "qvir/correlators.hpp"
#include "qvir/qspecial.hpp"
#include "qvir/suite.hpp"

using namespace qvir;

namespace {

std::string show(cplx v) {
  char buf[96];
  if (v.imag() == 0.0) std::snprintf(buf, sizeof buf, "%.17g", v.real());
  else std::snprintf(buf, sizeof buf, "%.17g%+.17gi", v.real(), v.imag());
  return buf;
}

struct EvalArgs {
  std::string function;
  double a = 0, b = 0, c = 0, q = 0.7, t = 0.3, z = 0, w = 0, u = 0, L = 1.0, r = 5.0;
  int ell = 1;
  std::optional<long long> n;
  std::string screening = "plus";
  std::string method = "closed";
};

QParams checked_params(double q, double t) {
  if (q == t) throw ConfigError("q = t gives p = 1, excluded by the default regime");
  return QParams::make(q, t);
}

int run_eval(const EvalArgs& e) {
  if (e.function == "phi21") {
    std::cout << show(phi21(e.a, e.b, e.c, e.q, e.z)) << "\n";
  } else if (e.function == "poch") {
    const std::size_t n = e.n ? static_cast<std::size_t>(*e.n) : kInfiniteOrder;
    if (e.n && *e.n < 0) throw ConfigError("poch: n must be >= 0");
    std::cout << show(pochhammer(e.a, e.q, n)) << "\n";
  } else if (e.function == "gamma") {
    std::cout << show(gamma_q(e.z, e.q)) << "\n";
  } else if (e.function == "theta") {
    std::cout << show(theta_q(e.z, e.q)) << "\n";
  } else if (e.function == "bracket") {
    std::cout << show(bracket(e.u, BracketParams::make(e.q, e.r, e.ell))) << "\n";
  } else if (e.function == "two-point") {
    std::cout << show(two_point(e.ell, checked_params(e.q, e.t), e.z, e.w)) << "\n";
  } else if (e.function == "four-point") {
    const CorrelatorParams cp{checked_params(e.q, e.t), e.ell, e.L, e.r};
    const Screening s = e.screening == "minus" ? Screening::kMinus : Screening::kPlus;
    if (e.screening != "plus" && e.screening != "minus") throw ConfigError("--screening must be plus or minus");
    if (e.method != "closed" && e.method != "jackson") throw ConfigError("--method must be closed or jackson");
    std::cout << show(e.method == "closed" ? four_point_closed(s, e.z, e.w, cp) : four_point_jackson(s, e.z, e.w, cp))
              << "\n";
  } else if (e.function == "connection") {
    const CorrelatorParams cp{checked_params(e.q, e.t), e.ell, e.L, e.r};
    const ConnectionMatrix m = connection_matrix(e.u, cp);
    for (const auto& row : m.entries) std::cout << show(row[0]) << " " << show(row[1]) << "\n";
    std::cout << "prefactor " << show(m.prefactor) << "\n";
  } else {
    throw ConfigError("eval: unknown function '" + e.function +
                      "'; valid: phi21, poch, gamma, theta, bracket, two-point, four-point, connection");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"q-Virasoro free-field identity checker"};
  app.require_subcommand(1);

  // verify: every flag is kept as text and applied after the config file and
  // the environment, so flags always win.
  auto* verify = app.add_subcommand("verify", "run verification suites");
  std::map<std::string, std::string> given;
  std::string config_path;
  bool as_json = false, as_csv = false;
  for (const char* key : {"q", "t", "ell", "k", "L", "r", "degree", "window", "tol", "suite", "seed", "threads"}) {
    verify->add_option_function<std::string>(
        std::string("--") + key, [&given, key](const std::string& v) { given[key] = v; }, key);
  }
  verify->add_option("--config", config_path, "flat key = value file");
  verify->add_flag("--json", as_json, "JSON records");
  verify->add_flag("--csv", as_csv, "CSV records");

  auto* eval = app.add_subcommand("eval", "evaluate one function");
  EvalArgs e;
  eval->add_option("function", e.function, "phi21 | poch | gamma | theta | bracket | two-point | four-point | connection")
      ->required();
  eval->add_option("--a", e.a);
  eval->add_option("--b", e.b);
  eval->add_option("--c", e.c);
  eval->add_option("--q", e.q);
  eval->add_option("--t", e.t);
  eval->add_option("--z", e.z);
  eval->add_option("--w", e.w);
  eval->add_option("--u", e.u);
  eval->add_option("--n", e.n);
  eval->add_option("--ell", e.ell);
  eval->add_option("--L", e.L);
  eval->add_option("--r", e.r);
  eval->add_option("--screening", e.screening, "plus | minus");
  eval->add_option("--method", e.method, "closed | jackson");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int rc = app.exit(err);
    return rc == 0 ? 0 : kExitConfigError;
  }

  if (*eval) {
    try {
      return run_eval(e);
    } catch (const ConfigError& err) {
      std::cerr << "error: " << err.what() << "\n";
      return kExitConfigError;
    } catch (const QvirError& err) {
      std::cerr << "error: " << err.what() << "\n";
      return 1;
    }
  }

  SuiteConfig cfg;
  std::vector<CheckReport> reports;
  try {
    if (!config_path.empty()) apply_config_file(cfg, config_path);
    apply_environment(cfg);
    for (const auto& [key, value] : given) apply_setting(cfg, key, value);
    if (as_json && as_csv) throw ConfigError("--json and --csv are exclusive");
    if (as_json) cfg.format = OutputFormat::kJson;
    if (as_csv) cfg.format = OutputFormat::kCsv;
    cfg.validate();
    reports = run_suites(cfg);
  } catch (const ConfigError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitConfigError;
  } catch (const DomainError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitConfigError;
  }
  std::cout << emit(reports, cfg.format);
  return exit_status(reports);
}

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "qvir/report.hpp"

namespace qvir {

enum class OutputFormat { kText, kJson, kCsv };

struct SuiteConfig {
  double q = 0.7;
  double t = 0.3;
  int ell = 1;
  int k = 1;
  double L = 1.0;
  double r = 0.0;  // 0: derived as 1 / (1 - beta)
  int degree = 4;
  int window = 3;
  double tolerance = 1e-8;
  std::vector<std::string> suites = {"all"};
  OutputFormat format = OutputFormat::kText;
  std::uint64_t seed = 1;
  int threads = 0;  // 0: hardware concurrency

  // Throws ConfigError.
  void validate() const;
};

// Valid --suite values, "all" first.
const std::vector<std::string>& suite_names();

// key = flag name without dashes (q, t, ell, k, L, r, degree, window, tol,
// suite, format, seed, threads).  Throws ConfigError on unknown keys or bad values.
void apply_setting(SuiteConfig& cfg, const std::string& key, const std::string& value);
// Flat "key = value" lines; '#' starts a comment.
void apply_config_file(SuiteConfig& cfg, const std::string& path);
// QVIR_Q, QVIR_T, ..., QVIR_SUITE (prefix + upper-cased key).
void apply_environment(SuiteConfig& cfg, const std::string& prefix = "QVIR_");

// Runs `tasks` on a worker pool; results keep task order.
std::vector<CheckReport> run_parallel(const std::vector<std::function<CheckReport()>>& tasks, int threads);

// One record per (identity, parameter cell), in a fixed order.
std::vector<CheckReport> run_suites(const SuiteConfig& cfg);

// 0 all pass, 1 any fail, 2 any inconclusive (and no fail).
int exit_status(const std::vector<CheckReport>& reports);
inline constexpr int kExitConfigError = 3;

std::string emit_json(const std::vector<CheckReport>& reports);
std::string emit_csv(const std::vector<CheckReport>& reports);
std::string emit_text(const std::vector<CheckReport>& reports);
std::string emit(const std::vector<CheckReport>& reports, OutputFormat format);
// Inverse of emit_json (runtime and status included).
std::vector<CheckReport> parse_json(const std::string& text);

// Individual suites, also used by the acceptance runner.
CheckReport check_qbinomial(double q, double tol = 1e-12);
CheckReport check_gamma_functional(double q, double tol = 1e-12);
CheckReport check_theta_quasi_periodicity(double q, double tol = 1e-12);
// int_0^1 d_q z = 1 to a few ulp.
CheckReport check_jackson_unit(double q, double tol = 1e-15);

}  // namespace qvir

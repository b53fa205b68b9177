#include <doctest.h>

#include <cstdlib>
#include <fstream>

#include "qvir/suite.hpp"

using namespace qvir;

namespace {

CheckReport sample(double residual, CheckStatus status) {
  CheckReport r;
  r.identity = "defining-relation";
  r.residual = residual;
  r.status = status;
  r.worst_location = "<[2,1]@0| . |[3]@0>, J=-1";
  r.config = {0.7, 0.3, 1, 1, 1.0, 5.0, 5, 3, 1e-8};
  r.runtime_ms = 12.5;
  return r;
}

}  // namespace

TEST_CASE("config validation") {
  SuiteConfig c;
  CHECK_NOTHROW(c.validate());
  c.t = c.q;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = SuiteConfig{};
  c.degree = 2;
  c.window = 3;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = SuiteConfig{};
  apply_setting(c, "suite", "nonsense");
  try {
    c.validate();
    FAIL("expected a config error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("valid: all, gram") != std::string::npos);
  }
  CHECK_THROWS_AS(apply_setting(c, "colour", "red"), ConfigError);
  CHECK_THROWS_AS(apply_setting(c, "q", "0.7x"), ConfigError);
}

TEST_CASE("file, environment and flags apply in that order") {
  const std::string path = "qvir_test_config.txt";
  {
    std::ofstream out(path);
    out << "# comment\nq = 0.6\nt=0.2\ndegree = 5   # trailing\nsuite = gram, fusion\n";
  }
  SuiteConfig c;
  apply_config_file(c, path);
  CHECK(c.q == 0.6);
  CHECK(c.degree == 5);
  CHECK(c.suites == std::vector<std::string>{"gram", "fusion"});
  setenv("QVIRTEST_T", "0.25", 1);
  setenv("QVIRTEST_DEGREE", "6", 1);
  apply_environment(c, "QVIRTEST_");
  CHECK(c.t == 0.25);
  CHECK(c.degree == 6);
  apply_setting(c, "degree", "4");
  CHECK(c.degree == 4);
  unsetenv("QVIRTEST_T");
  unsetenv("QVIRTEST_DEGREE");
  std::remove(path.c_str());
  CHECK_THROWS_AS(apply_config_file(c, "does-not-exist.cfg"), ConfigError);
}

TEST_CASE("exit status precedence") {
  CHECK(exit_status({}) == 0);
  CHECK(exit_status({sample(1e-12, CheckStatus::kPass)}) == 0);
  CHECK(exit_status({sample(1e-12, CheckStatus::kPass), inconclusive_report("x", {}, "why")}) == 2);
  CHECK(exit_status({inconclusive_report("x", {}, "why"), sample(1.0, CheckStatus::kFail)}) == 1);
}

TEST_CASE("empty report lists") {
  CHECK(emit_json({}) == "[]\n");
  CHECK(emit_csv({}) == "identity,pass,residual,tolerance,worst_location,q,t,ell,k,L,r,degree,window,runtime_ms\n");
}

TEST_CASE("JSON round trip") {
  const std::vector<CheckReport> in = {sample(3.0000000000000001e-16, CheckStatus::kPass),
                                       inconclusive_report("four-point", {}, "L*beta = 1.2 outside (0,1)")};
  const std::string text = emit_json(in);
  const std::vector<CheckReport> out = parse_json(text);
  REQUIRE(out.size() == 2);
  CHECK(out[0].residual == in[0].residual);
  CHECK(out[0].pass());
  CHECK(out[1].status == CheckStatus::kInconclusive);
  CHECK(emit_json(out) == text);
  CHECK(text.find("\"residual\": null") != std::string::npos);
  for (const char* field : {"identity", "pass", "residual", "tolerance", "worst_location", "params", "truncation",
                            "runtime_ms", "\"ell\"", "\"L\"", "\"degree\"", "\"window\""})
    CHECK(text.find(field) != std::string::npos);
}

TEST_CASE("CSV keeps full precision and quotes locations") {
  const std::string csv = emit_csv({sample(1.2345678901234567e-17, CheckStatus::kPass)});
  CHECK(csv.find(",1.2345678901234567") != std::string::npos);
  CHECK(csv.find("e-17,") != std::string::npos);
  CHECK(csv.find("\"<[2,1]@0| . |[3]@0>, J=-1\"") != std::string::npos);
}

TEST_CASE("runs are deterministic apart from runtime") {
  SuiteConfig c;
  c.suites = {"delta-identity", "qspecial", "fusion"};
  c.window = 3;
  c.seed = 42;
  auto strip = [](std::vector<CheckReport> v) {
    for (auto& r : v) r.runtime_ms = 0.0;
    return emit_json(v);
  };
  const auto a = run_suites(c);
  c.threads = 1;
  const auto b = run_suites(c);
  CHECK(strip(a) == strip(b));
  CHECK(exit_status(a) == 0);
  c.seed = 43;
  CHECK(strip(run_suites(c)) != strip(a));
}

TEST_CASE("run_parallel keeps task order") {
  std::vector<std::function<CheckReport()>> tasks;
  for (int i = 0; i < 20; ++i)
    tasks.push_back([i] {
      CheckReport r;
      r.identity = std::to_string(i);
      return r;
    });
  const auto out = run_parallel(tasks, 4);
  for (int i = 0; i < 20; ++i) CHECK(out[i].identity == std::to_string(i));
}

TEST_CASE("truncation stability at the default cell") {
  SuiteConfig c;
  c.suites = {"stability"};
  c.degree = 2;
  c.window = 2;
  const auto reps = run_suites(c);
  REQUIRE(reps.size() == 1);
  CHECK(reps[0].identity == "truncation-stability");
  CHECK(reps[0].pass());
  CHECK(reps[0].residual == 0.0);
}

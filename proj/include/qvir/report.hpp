#pragma once

#include <string>
#include <vector>

#include "qvir/numeric.hpp"

namespace qvir {

enum class CheckStatus { kPass, kFail, kInconclusive };

// Parameter cell a check ran at.  Unused fields stay at their defaults.
struct CheckConfig {
  double q = 0.0;
  double t = 0.0;
  int ell = 0;
  int k = 0;
  double L = 0.0;
  double r = 0.0;
  int degree = 0;
  int window = 0;
  double tolerance = 1e-8;
};

struct CheckReport {
  std::string identity;
  double residual = 0.0;
  std::string worst_location;
  CheckConfig config;
  CheckStatus status = CheckStatus::kFail;
  double runtime_ms = 0.0;
  // Largest magnitude among the compared entries (same normalization as the
  // residual); sets the rounding floor.  Zero when not tracked.
  double scale = 0.0;

  bool pass() const { return status == CheckStatus::kPass; }
  // Sets status from residual < tolerance.
  void decide();
};

CheckReport inconclusive_report(std::string identity, const CheckConfig& config, std::string reason);

// Worst-of merge: max residual, the location that produced it, and any
// failure or inconclusive status carried through.
CheckReport merge_reports(std::string identity, const std::vector<CheckReport>& parts);

}  // namespace qvir

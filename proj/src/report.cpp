#include "qvir/report.hpp"

#include <algorithm>
#include <cmath>

namespace qvir {

void CheckReport::decide() {
  if (status == CheckStatus::kInconclusive) return;
  status = (std::isfinite(residual) && residual < config.tolerance) ? CheckStatus::kPass
                                                                    : CheckStatus::kFail;
}

CheckReport inconclusive_report(std::string identity, const CheckConfig& config, std::string reason) {
  CheckReport rep;
  rep.identity = std::move(identity);
  rep.config = config;
  rep.status = CheckStatus::kInconclusive;
  rep.residual = std::nan("");
  rep.worst_location = std::move(reason);
  return rep;
}

CheckReport merge_reports(std::string identity, const std::vector<CheckReport>& parts) {
  CheckReport out;
  out.identity = std::move(identity);
  out.status = CheckStatus::kPass;
  if (!parts.empty()) out.config = parts.front().config;
  bool have_residual = false;
  for (const auto& p : parts) {
    out.runtime_ms += p.runtime_ms;
    out.scale = std::max(out.scale, p.scale);
    if (out.status == CheckStatus::kInconclusive) continue;
    if (p.status == CheckStatus::kInconclusive) {
      out.status = CheckStatus::kInconclusive;
      out.residual = std::nan("");
      out.worst_location = p.identity + ": " + p.worst_location;
      out.config = p.config;
      continue;
    }
    const bool worse = !have_residual || !(p.residual <= out.residual);
    if (worse) {
      out.residual = p.residual;
      out.worst_location = p.identity + ": " + p.worst_location;
      out.config = p.config;
      have_residual = true;
    }
    if (p.status == CheckStatus::kFail) out.status = CheckStatus::kFail;
  }
  return out;
}

}  // namespace qvir

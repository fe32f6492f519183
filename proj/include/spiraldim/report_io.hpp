#pragma once

#include "spiraldim/boxdim.hpp"
#include "spiraldim/theorems.hpp"

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace spiraldim {

/// JSON object with the DimensionReport fields; analysis_start_phi and
/// curve_ref are recorded when known.
std::string dimension_report_json(const DimensionReport& report, const std::string& curve_ref = {},
                                  std::optional<double> analysis_start_phi = std::nullopt);

/// {criterion, hypotheses: [{name, status, witness}], conclusion}.
std::string criterion_report_json(const CriterionReport& report);

/// JSON array of criterion reports.
std::string criterion_reports_json(std::span<const CriterionReport> reports);

/// {"reports": [...], "checks": {name: value, ...}} for verify-criteria.
std::string verification_json(std::span<const CriterionReport> reports,
                              const std::vector<std::pair<std::string, double>>& checks);

} // namespace spiraldim

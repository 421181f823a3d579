#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "rftrap/cli/config.hpp"
#include "rftrap/fluid.hpp"

namespace rftrap::cli {

using Json = nlohmann::ordered_json;

struct ReportOptions {
  double eta_lim = 0.3;
  fluid::ProfileOptions profile{};
  bool solve_cloud = true;  // when the config has a cloud section
  bool scale = false;       // add the cold-limit / adiabatic fit section
};

/// A machine-readable report. Every number is {value, unit}; values are
/// rounded to 12 significant digits and non-finite values become null.
struct Report {
  Json doc;
  std::vector<std::string> warnings;
  bool unstable = false;                     // operating point outside stability
  std::optional<fluid::ScaledCloud> cloud;   // when solved
};

Json quantity(double value, const std::string& unit);

Report build_report(const std::string& command, const Config& cfg,
                    const ReportOptions& options);

// "section.key [unit]" -> value, in document order, over the numeric
// fields of the derived, cloud and scale sections.
std::vector<std::pair<std::string, std::optional<double>>> report_scalars(const Json& doc);

// Aligned "name  value unit" lines.
std::string report_table(const Json& doc);

}  // namespace rftrap::cli

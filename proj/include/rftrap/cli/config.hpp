#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>
#include <yaml-cpp/yaml.h>

#include "rftrap/cli/quantity.hpp"
#include "rftrap/dynamics.hpp"
#include "rftrap/spectrum.hpp"
#include "rftrap/types.hpp"

namespace rftrap::cli {

/// Invalid configuration, located by file, line and field path.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(const std::string& where, const std::string& path,
              const std::string& what);
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

struct CloudSpec {
  double temperature;                // K
  double linear_density;             // ions per metre (N/2L)
  std::optional<double> omega_x;     // rad/s, quadrupole scaling override
};

struct TrajectorySpec {
  dynamics::Model model = dynamics::Model::FullRf;
  double duration = 0.0;             // s
  dynamics::PhaseState init;
  double samples_per_period = 32.0;  // per RF period
  dynamics::Axis axis = dynamics::Axis::X;
};

struct SweepSpec {
  std::string field;                 // "section.key"
  std::vector<YAML::Node> values;    // substituted verbatim into the config
};

/// Validated configuration. `inputs` echoes every field as written, with
/// dimensioned values as {value, unit}; it parses back to the same config.
struct Config {
  IonSpecies ion;
  LinearTrap trap;
  std::optional<CloudSpec> cloud;
  std::optional<TrajectorySpec> trajectory;
  std::optional<SweepSpec> sweep;
  nlohmann::ordered_json inputs;
  YAML::Node root;
  std::string origin;
};

// Reads a config document; a report is unwrapped to its `inputs` member.
YAML::Node load_document(const std::string& path);
YAML::Node parse_document(const std::string& text, const std::string& origin);

// Accepts a config document or a report whose `inputs` member holds one.
Config load_config(const std::string& path);
Config parse_config(const std::string& text, const std::string& origin = "<string>");
Config parse_config(const YAML::Node& root, const std::string& origin);

// Copy of `root` with `field` ("section.key") set to `value`; throws
// ConfigError for fields that are not scalar config fields.
YAML::Node with_field(const YAML::Node& root, const std::string& field,
                      const YAML::Node& value);

// Scalar config fields a sweep may vary, as "section.key".
std::vector<std::string> sweepable_fields();

}  // namespace rftrap::cli

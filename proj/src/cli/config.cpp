#include "rftrap/cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "rftrap/constants.hpp"

namespace rftrap::cli {

namespace {

enum class Kind { Quantity, Integer, Number, Choice };

struct FieldDef {
  std::string_view section;
  std::string_view key;
  Kind kind;
  Dimension dim = Dimension::Dimensionless;
  bool required = true;
  // Returns an error message for an out-of-range SI value, or empty.
  std::function<std::string(double)> check = {};
  std::vector<std::string_view> choices = {};
};

std::string positive(double v) { return v > 0 ? "" : "must be positive"; }
std::string non_negative(double v) { return v >= 0 ? "" : "must be >= 0"; }
std::string nonzero(double v) { return v != 0 ? "" : "must be nonzero"; }

const std::vector<FieldDef>& registry() {
  static const std::vector<FieldDef> defs = {
      {"ion", "charge", Kind::Quantity, Dimension::Charge, true, nonzero},
      {"ion", "mass", Kind::Quantity, Dimension::Mass, true, positive},
      {"trap", "order", Kind::Integer, Dimension::Dimensionless, true,
       [](double v) { return v >= 2 ? "" : "must be >= 2 (k = 2 is the quadrupole)"; }},
      {"trap", "r0", Kind::Quantity, Dimension::Length, true, positive},
      {"trap", "rf_amplitude", Kind::Quantity, Dimension::Voltage, true, non_negative},
      {"trap", "rf_frequency", Kind::Quantity, Dimension::Frequency, true, positive},
      {"trap", "static_offset", Kind::Quantity, Dimension::Voltage, false},
      {"axial", "end_voltage", Kind::Quantity, Dimension::Voltage, true, non_negative},
      {"axial", "kappa", Kind::Number, Dimension::Dimensionless, true,
       [](double v) { return v > 0 && v <= 1 ? "" : "must be in (0, 1]"; }},
      {"axial", "z0", Kind::Quantity, Dimension::Length, true, positive},
      {"cloud", "temperature", Kind::Quantity, Dimension::Temperature, true, positive},
      {"cloud", "linear_density", Kind::Quantity, Dimension::LinearDensity, true, positive},
      {"cloud", "secular_frequency", Kind::Quantity, Dimension::Frequency, false, positive},
      {"trajectory", "model", Kind::Choice, Dimension::Dimensionless, false, {},
       {"rf", "secular"}},
      {"trajectory", "duration", Kind::Quantity, Dimension::Time, true, nonzero},
      {"trajectory", "x", Kind::Quantity, Dimension::Length, false},
      {"trajectory", "y", Kind::Quantity, Dimension::Length, false},
      {"trajectory", "z", Kind::Quantity, Dimension::Length, false},
      {"trajectory", "vx", Kind::Quantity, Dimension::Velocity, false},
      {"trajectory", "vy", Kind::Quantity, Dimension::Velocity, false},
      {"trajectory", "vz", Kind::Quantity, Dimension::Velocity, false},
      {"trajectory", "samples_per_period", Kind::Number, Dimension::Dimensionless, false,
       [](double v) { return v >= 2 ? "" : "must be >= 2"; }},
      {"trajectory", "axis", Kind::Choice, Dimension::Dimensionless, false, {},
       {"x", "y", "z"}},
  };
  return defs;
}

constexpr std::array<std::string_view, 5> kOptionalSections{"axial", "cloud",
                                                             "trajectory", "sweep",
                                                             "label"};

const FieldDef* find_field(std::string_view section, std::string_view key) {
  for (const auto& f : registry())
    if (f.section == section && f.key == key) return &f;
  return nullptr;
}

std::string where(const std::string& origin, const YAML::Node& node) {
  const YAML::Mark m = node.Mark();
  if (m.is_null() || m.line < 0) return origin;
  return origin + ":" + std::to_string(m.line + 1) + ":" + std::to_string(m.column + 1);
}

double parse_number(const std::string& text) {
  double v = 0.0;
  const char* b = text.data();
  const char* e = b + text.size();
  if (b != e && *b == '+') ++b;
  const auto [ptr, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || ptr != e || !std::isfinite(v))
    throw std::invalid_argument("expected a number, got '" + text + "'");
  return v;
}

struct Parsed {
  double si = 0.0;
  Quantity written;
  std::string text;  // choices
};

class Parser {
 public:
  explicit Parser(std::string origin) : origin_(std::move(origin)) {}

  [[noreturn]] void fail(const YAML::Node& node, const std::string& path,
                         const std::string& msg) const {
    throw ConfigError(where(origin_, node), path, msg);
  }

  Parsed field(const FieldDef& def, const YAML::Node& node) const {
    const std::string path = std::string(def.section) + "." + std::string(def.key);
    Parsed out;
    try {
      if (def.kind == Kind::Choice) {
        if (!node.IsScalar()) fail(node, path, "expected one of the listed choices");
        out.text = node.Scalar();
        if (std::find(def.choices.begin(), def.choices.end(), out.text) == def.choices.end()) {
          std::string list;
          for (auto c : def.choices) list += (list.empty() ? "" : ", ") + std::string(c);
          fail(node, path, "'" + out.text + "' is not one of: " + list);
        }
        return out;
      }
      if (node.IsMap()) {
        if (!node["value"] || !node["unit"] || node.size() != 2)
          fail(node, path, "expected {value, unit}");
        out.written = {parse_number(node["value"].Scalar()), node["unit"].Scalar()};
      } else if (node.IsScalar()) {
        if (def.kind == Kind::Quantity)
          out.written = split_quantity(node.Scalar());
        else
          out.written = {parse_number(node.Scalar()), ""};
      } else {
        fail(node, path, "expected a scalar value");
      }
      if (def.kind != Kind::Quantity && out.written.unit == "1") out.written.unit.clear();
      out.si = out.written.value * unit_factor(def.dim, out.written.unit);
      if (def.kind == Kind::Integer && out.si != std::floor(out.si))
        fail(node, path, "must be an integer");
    } catch (const std::invalid_argument& e) {
      if (dynamic_cast<const ConfigError*>(&e)) throw;
      fail(node, path, e.what());
    }
    if (def.check) {
      const std::string msg = def.check(out.si);
      if (!msg.empty()) fail(node, path, msg);
    }
    return out;
  }

  // Parses every field of `section`, rejecting unknown keys.
  std::map<std::string, Parsed> section(const YAML::Node& root, std::string_view name) const {
    std::map<std::string, Parsed> out;
    const YAML::Node sec = root[std::string(name)];
    if (!sec.IsMap()) fail(sec, std::string(name), "expected a table of fields");
    for (const auto& kv : sec) {
      const std::string key = kv.first.Scalar();
      const FieldDef* def = find_field(name, key);
      if (!def) {
        std::string list;
        for (const auto& f : registry())
          if (f.section == name) list += (list.empty() ? "" : ", ") + std::string(f.key);
        fail(kv.first, std::string(name) + "." + key,
             "unknown field (known: " + list + ")");
      }
      out[key] = field(*def, kv.second);
    }
    for (const auto& f : registry())
      if (f.section == name && f.required && !out.count(std::string(f.key)))
        fail(sec, std::string(name) + "." + std::string(f.key), "missing required field");
    return out;
  }

  const std::string& origin() const { return origin_; }

 private:
  std::string origin_;
};

// Echo of one section in registry order.
nlohmann::ordered_json echo(std::string_view name, const std::map<std::string, Parsed>& values) {
  nlohmann::ordered_json out = nlohmann::ordered_json::object();
  for (const auto& f : registry()) {
    if (f.section != name) continue;
    const auto it = values.find(std::string(f.key));
    if (it == values.end()) continue;
    if (f.kind == Kind::Choice) {
      out[std::string(f.key)] = it->second.text;
    } else {
      const std::string unit =
          f.kind == Kind::Quantity ? it->second.written.unit : std::string("1");
      out[std::string(f.key)] = {{"value", it->second.written.value}, {"unit", unit}};
    }
  }
  return out;
}

double get(const std::map<std::string, Parsed>& m, const std::string& key, double fallback) {
  const auto it = m.find(key);
  return it == m.end() ? fallback : it->second.si;
}

SweepSpec parse_sweep(const Parser& p, const YAML::Node& sec) {
  if (!sec.IsMap()) p.fail(sec, "sweep", "expected a table of fields");
  for (const auto& kv : sec) {
    const std::string k = kv.first.Scalar();
    if (k != "field" && k != "values" && k != "from" && k != "to" && k != "points" &&
        k != "spacing")
      p.fail(kv.first, "sweep." + k,
             "unknown field (known: field, values, from, to, points, spacing)");
  }
  if (!sec["field"]) p.fail(sec, "sweep.field", "missing required field");
  SweepSpec out;
  out.field = sec["field"].Scalar();
  const auto dot = out.field.find('.');
  const FieldDef* def = dot == std::string::npos
                            ? nullptr
                            : find_field(out.field.substr(0, dot), out.field.substr(dot + 1));
  if (!def || def->kind == Kind::Choice) {
    std::string list;
    for (const auto& f : sweepable_fields()) list += (list.empty() ? "" : ", ") + f;
    p.fail(sec["field"], "sweep.field",
           "'" + out.field + "' is not a scalar config field (sweepable: " + list + ")");
  }
  if (sec["values"]) {
    if (sec["from"] || sec["to"] || sec["points"] || sec["spacing"])
      p.fail(sec, "sweep", "give either values or from/to/points, not both");
    if (!sec["values"].IsSequence())
      p.fail(sec["values"], "sweep.values", "expected a list");
    for (const auto& v : sec["values"]) {
      p.field(*def, v);  // validate every point up front
      out.values.push_back(YAML::Clone(v));
    }
    return out;
  }
  for (const char* k : {"from", "to", "points"})
    if (!sec[k]) p.fail(sec, std::string("sweep.") + k, "missing required field");
  const Parsed from = p.field(*def, sec["from"]);
  const Parsed to = p.field(*def, sec["to"]);
  double n = 0.0;
  try {
    n = parse_number(sec["points"].Scalar());
  } catch (const std::invalid_argument& e) {
    p.fail(sec["points"], "sweep.points", e.what());
  }
  if (n < 0 || n != std::floor(n) || n > 1e6)
    p.fail(sec["points"], "sweep.points", "must be an integer in [0, 1e6]");
  const std::string spacing = sec["spacing"] ? sec["spacing"].Scalar() : "linear";
  if (spacing != "linear" && spacing != "log")
    p.fail(sec["spacing"], "sweep.spacing", "must be linear or log");
  const std::string& unit = from.written.unit;
  const double a = from.written.value;
  const double b = to.si / unit_factor(def->dim, unit);
  if (spacing == "log" && (a <= 0 || b <= 0))
    p.fail(sec, "sweep", "log spacing needs positive from and to");
  const auto count = static_cast<std::size_t>(n);
  for (std::size_t i = 0; i < count; ++i) {
    const double f = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
    double v = spacing == "log" ? a * std::pow(b / a, f) : a + (b - a) * f;
    if (i + 1 == count && count > 1) v = b;
    if (def->kind == Kind::Integer) v = std::round(v);
    std::string text = format_exact(v);
    if (def->kind == Kind::Quantity) text += " " + unit;
    out.values.emplace_back(text);
  }
  return out;
}

}  // namespace

ConfigError::ConfigError(const std::string& where, const std::string& path,
                         const std::string& what)
    : std::invalid_argument(where + ": " + path + ": " + what), path_(path) {}

std::vector<std::string> sweepable_fields() {
  std::vector<std::string> out;
  for (const auto& f : registry())
    if (f.kind != Kind::Choice) out.push_back(std::string(f.section) + "." + std::string(f.key));
  return out;
}

Config parse_config(const YAML::Node& document, const std::string& origin) {
  const Parser p(origin);
  YAML::Node root = document;
  if (root.IsMap() && root["inputs"]) root = root["inputs"];
  if (!root.IsMap()) p.fail(root, "<root>", "expected a table with ion and trap sections");
  for (const auto& kv : root) {
    const std::string name = kv.first.Scalar();
    const bool known = name == "ion" || name == "trap" ||
                       std::find(kOptionalSections.begin(), kOptionalSections.end(), name) !=
                           kOptionalSections.end();
    if (!known)
      p.fail(kv.first, name,
             "unknown section (known: ion, trap, axial, cloud, trajectory, sweep, label)");
  }
  for (const char* s : {"ion", "trap"})
    if (!root[s]) p.fail(root, s, "missing required section");

  const auto ion_f = p.section(root, "ion");
  const auto trap_f = p.section(root, "trap");
  std::string label;
  if (root["label"]) {
    if (!root["label"].IsScalar()) p.fail(root["label"], "label", "expected text");
    label = root["label"].Scalar();
  }

  const IonSpecies ion = IonSpecies::from_units(
      ion_f.at("charge").si / constants::elementary_charge,
      ion_f.at("mass").si / constants::atomic_mass_unit);

  std::optional<AxialConfinement> axial;
  std::map<std::string, Parsed> axial_f;
  if (root["axial"]) {
    axial_f = p.section(root, "axial");
    axial.emplace(axial_f.at("end_voltage").si, axial_f.at("kappa").si, axial_f.at("z0").si);
  }
  const int k = static_cast<int>(trap_f.at("order").si);
  const LinearTrap trap(k, trap_f.at("r0").si, trap_f.at("rf_amplitude").si,
                        2.0 * constants::pi * trap_f.at("rf_frequency").si,
                        get(trap_f, "static_offset", 0.0), axial);

  Config cfg{ion, trap, std::nullopt, std::nullopt, std::nullopt,
             nlohmann::ordered_json::object(), root, origin};
  if (!label.empty()) cfg.inputs["label"] = label;
  cfg.inputs["ion"] = echo("ion", ion_f);
  cfg.inputs["trap"] = echo("trap", trap_f);
  if (axial) cfg.inputs["axial"] = echo("axial", axial_f);

  if (root["cloud"]) {
    const auto f = p.section(root, "cloud");
    CloudSpec c{f.at("temperature").si, f.at("linear_density").si, std::nullopt};
    if (f.count("secular_frequency")) {
      if (k != 2)
        p.fail(root["cloud"]["secular_frequency"], "cloud.secular_frequency",
               "only meaningful for a quadrupole (trap.order = 2)");
      c.omega_x = 2.0 * constants::pi * f.at("secular_frequency").si;
    }
    cfg.cloud = c;
    cfg.inputs["cloud"] = echo("cloud", f);
  }
  if (root["trajectory"]) {
    const auto f = p.section(root, "trajectory");
    TrajectorySpec t;
    if (f.count("model") && f.at("model").text == "secular")
      t.model = dynamics::Model::Pseudopotential;
    t.duration = f.at("duration").si;
    t.init = {0.0, get(f, "x", 0.0), get(f, "y", 0.0), get(f, "z", 0.0),
              get(f, "vx", 0.0), get(f, "vy", 0.0), get(f, "vz", 0.0)};
    t.samples_per_period = get(f, "samples_per_period", 32.0);
    if (f.count("axis"))
      t.axis = f.at("axis").text == "y"   ? dynamics::Axis::Y
               : f.at("axis").text == "z" ? dynamics::Axis::Z
                                          : dynamics::Axis::X;
    cfg.trajectory = t;
    cfg.inputs["trajectory"] = echo("trajectory", f);
  }
  if (root["sweep"]) cfg.sweep = parse_sweep(p, root["sweep"]);
  return cfg;
}

YAML::Node parse_document(const std::string& text, const std::string& origin) {
  YAML::Node doc;
  try {
    doc = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(origin + ":" + std::to_string(e.mark.line + 1) + ":" +
                          std::to_string(e.mark.column + 1),
                      "<syntax>", e.msg);
  }
  if (doc.IsMap() && doc["inputs"]) return doc["inputs"];
  return doc;
}

YAML::Node load_document(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, "<file>", "cannot open config file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_document(ss.str(), path);
}

Config parse_config(const std::string& text, const std::string& origin) {
  return parse_config(parse_document(text, origin), origin);
}

Config load_config(const std::string& path) { return parse_config(load_document(path), path); }

YAML::Node with_field(const YAML::Node& root, const std::string& field,
                      const YAML::Node& value) {
  const auto dot = field.find('.');
  if (dot == std::string::npos || !find_field(field.substr(0, dot), field.substr(dot + 1)))
    throw ConfigError("<sweep>", field, "not a scalar config field");
  YAML::Node copy = YAML::Clone(root);
  copy[field.substr(0, dot)][field.substr(dot + 1)] = YAML::Clone(value);
  return copy;
}

}  // namespace rftrap::cli

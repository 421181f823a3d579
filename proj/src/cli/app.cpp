#include "rftrap/cli/app.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "rftrap/cli/config.hpp"
#include "rftrap/cli/output.hpp"
#include "rftrap/cli/report.hpp"
#include "rftrap/error.hpp"

namespace rftrap::cli {

namespace fs = std::filesystem;

namespace {

struct Options {
  std::string config;
  std::string out;
  std::string format;  // "", "csv" or "json"
  std::string name;
  double eta_lim = 0.3;
  double edge_threshold = 1e-3;
  bool strict = false;
  std::vector<std::string> sets;
  std::string temperature;
  std::string linear_density;
};

// A runtime failure carrying its exit code.
struct Exit {
  int code;
  std::string message;
};

ReportOptions report_options(const Options& o) {
  ReportOptions r;
  r.eta_lim = o.eta_lim;
  r.profile.edge_threshold = o.edge_threshold;
  return r;
}

Config load(const Options& o) {
  if (o.config.empty()) throw ConfigError("<command line>", "--config", "a config file is required");
  YAML::Node root = load_document(o.config);
  auto set = [&](const std::string& field, const std::string& text) {
    root = with_field(root, field, YAML::Node(text));
  };
  for (const auto& s : o.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos)
      throw ConfigError("<command line>", "--set", "expected section.key=value, got '" + s + "'");
    set(s.substr(0, eq), s.substr(eq + 1));
  }
  if (!o.temperature.empty()) set("cloud.temperature", o.temperature);
  if (!o.linear_density.empty()) set("cloud.linear_density", o.linear_density);
  return parse_config(root, o.config);
}

void emit_report(const std::string& command, const Report& rep, const Options& o,
                 std::ostream& out) {
  const std::string json = json_text(rep.doc);
  const std::string csv = report_csv(rep.doc);
  if (!o.out.empty()) {
    const bool as_csv = o.format == "csv";
    write_file(fs::path(o.out) / (command + (as_csv ? ".csv" : ".json")), as_csv ? csv : json);
    out << report_table(rep.doc);
    return;
  }
  if (o.format == "json")
    out << json;
  else if (o.format == "csv")
    out << csv;
  else
    out << report_table(rep.doc);
}

int check_strict(const Report& rep, const Options& o, std::ostream& err) {
  if (o.strict && rep.unstable) {
    err << "error: unstable operating point (--strict)\n";
    return kUnstable;
  }
  return kSuccess;
}

int cmd_params(const Options& o, std::ostream& out, std::ostream& err) {
  const Config cfg = load(o);
  ReportOptions ro = report_options(o);
  ro.scale = cfg.cloud.has_value();
  const Report rep = build_report("params", cfg, ro);
  emit_report("params", rep, o, out);
  return check_strict(rep, o, err);
}

int cmd_scale(const Options& o, std::ostream& out, std::ostream& err) {
  const Config cfg = load(o);
  ReportOptions ro = report_options(o);
  ro.solve_cloud = false;
  ro.scale = true;
  const Report rep = build_report("scale", cfg, ro);
  emit_report("scale", rep, o, out);
  return check_strict(rep, o, err);
}

void write_profile(const fs::path& dir, const std::string& name, const fluid::ScaledCloud& c,
                   const Json& inputs, const std::vector<std::string>& warnings) {
  write_file(dir / (name + ".csv"), profile_csv(c.profile));
  write_file(dir / (name + ".json"), json_text(profile_sidecar(c, inputs, name + ".csv", warnings)));
}

int cmd_profile(const Options& o, std::ostream& out, std::ostream& err) {
  const Config cfg = load(o);
  if (!cfg.cloud)
    throw ConfigError(cfg.origin, "cloud", "profile needs a cloud section (temperature, linear_density)");
  ReportOptions ro = report_options(o);
  ro.scale = true;
  const Report rep = build_report("profile", cfg, ro);
  const std::string name = o.name.empty() ? "profile" : o.name;
  write_profile(o.out.empty() ? fs::path(".") : fs::path(o.out), name, *rep.cloud, cfg.inputs,
                rep.warnings);
  if (o.format == "json")
    out << json_text(rep.doc);
  else
    out << report_table(rep.doc);
  return check_strict(rep, o, err);
}

std::string status_name(dynamics::TrajectoryStatus s) {
  switch (s) {
    case dynamics::TrajectoryStatus::Completed: return "completed";
    case dynamics::TrajectoryStatus::Escaped: return "escaped";
    case dynamics::TrajectoryStatus::StepUnderflow: return "step underflow";
    case dynamics::TrajectoryStatus::MaxSteps: return "step limit";
  }
  return "unknown";
}

int cmd_trajectory(const Options& o, std::ostream& out, std::ostream& err) {
  Config cfg = load(o);
  if (!cfg.trajectory)
    throw ConfigError(cfg.origin, "trajectory", "trajectory needs a trajectory section (duration, x, ...)");
  const TrajectorySpec& spec = *cfg.trajectory;
  ReportOptions ro = report_options(o);
  ro.solve_cloud = false;
  Report rep = build_report("trajectory", cfg, ro);

  dynamics::IntegratorSettings s;
  s.samples_per_rf_period = spec.samples_per_period;
  const auto tr = spec.model == dynamics::Model::FullRf
                      ? dynamics::integrate_rf(cfg.trap, cfg.ion, spec.init, spec.duration, s)
                      : dynamics::integrate_secular(cfg.trap, cfg.ion, spec.init, spec.duration, s);

  const std::string name = o.name.empty() ? "trajectory" : o.name;
  const fs::path dir = o.out.empty() ? fs::path(".") : fs::path(o.out);
  std::vector<std::string> warnings = rep.warnings;
  Json peaks = Json::array();
  std::optional<std::string> spectrum_name;
  if (tr.status == dynamics::TrajectoryStatus::Completed && spec.duration > 0) {
    try {
      const auto sp = dynamics::motional_spectrum(tr, spec.axis);
      for (const auto& p : dynamics::find_peaks(sp, 5))
        peaks.push_back({{"freq_hz", quantity(p.freq_hz, "Hz")},
                         {"amplitude", quantity(p.amplitude, "m")}});
      spectrum_name = name + "_spectrum.csv";
      write_file(dir / *spectrum_name, spectrum_csv(sp));
    } catch (const TooShort& e) {
      warnings.push_back(std::string("no spectrum: ") + e.what());
    }
  }
  write_file(dir / (name + ".csv"), trajectory_csv(tr));

  Json side;
  side["format"] = "rftrap-trajectory";
  side["version"] = 1;
  side["csv"] = name + ".csv";
  side["columns"] = {"t", "x", "y", "z", "vx", "vy", "vz"};
  side["spectrum_csv"] = spectrum_name ? Json(*spectrum_name) : Json(nullptr);
  side["model"] = spec.model == dynamics::Model::FullRf ? "rf" : "secular";
  side["status"] = status_name(tr.status);
  side["t_stop"] = quantity(tr.t_stop, "s");
  side["max_radius"] = quantity(tr.max_radius, "m");
  side["samples"] = tr.samples.size();
  side["dt_sample"] = quantity(tr.dt_sample, "s");
  side["peaks"] = peaks;
  side["inputs"] = cfg.inputs;
  side["derived"] = rep.doc["derived"];
  side["warnings"] = warnings;
  write_file(dir / (name + ".json"), json_text(side));

  if (o.format == "json")
    out << json_text(side);
  else
    out << "status " << status_name(tr.status) << ", " << tr.samples.size() << " samples\n";
  for (const auto& w : warnings) err << "warning: " << w << "\n";

  if (tr.status == dynamics::TrajectoryStatus::Escaped) {
    std::ostringstream os;
    os << "escaped at t=" << format_number(tr.t_stop) << " s (r reached r0 = "
       << format_number(cfg.trap.r0()) << " m)";
    throw Exit{kSolverFailure, os.str()};
  }
  if (tr.status != dynamics::TrajectoryStatus::Completed)
    throw Exit{kSolverFailure, status_name(tr.status) + " at t=" + format_number(tr.t_stop) + " s"};
  return check_strict(rep, o, err);
}

enum class RowStatus { Ok, Unstable, Validation, Solver };

const char* row_status_name(RowStatus s) {
  switch (s) {
    case RowStatus::Ok: return "ok";
    case RowStatus::Unstable: return "unstable";
    case RowStatus::Validation: return "validation";
    case RowStatus::Solver: return "solver";
  }
  return "?";
}

struct Row {
  std::string value;
  RowStatus status = RowStatus::Ok;
  std::string error;
  std::optional<Config> cfg;
  std::optional<Json> doc;
};

int cmd_sweep(const Options& o, std::ostream& out, std::ostream& err) {
  const Config base = load(o);
  if (!base.sweep)
    throw ConfigError(base.origin, "sweep", "sweep needs a sweep section (field, values or from/to/points)");
  const SweepSpec& sw = *base.sweep;
  YAML::Node root = YAML::Clone(base.root);
  root.remove("sweep");

  // Config handling stays serial; only the solves run in parallel.
  std::vector<Row> rows(sw.values.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const YAML::Node& v = sw.values[i];
    rows[i].value = v.IsScalar() ? v.Scalar() : YAML::Dump(v);
    try {
      rows[i].cfg = parse_config(with_field(root, sw.field, v), base.origin);
    } catch (const std::invalid_argument& e) {
      rows[i].status = RowStatus::Validation;
      rows[i].error = e.what();
    }
  }
  const ReportOptions ro = report_options(o);
  const auto n = static_cast<long>(rows.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (long i = 0; i < n; ++i) {
    Row& r = rows[i];
    if (!r.cfg) continue;
    ReportOptions opt = ro;
    opt.scale = r.cfg->cloud.has_value();
    try {
      Report rep = build_report("sweep", *r.cfg, opt);
      if (rep.unstable) r.status = RowStatus::Unstable;
      r.doc = std::move(rep.doc);
    } catch (const std::invalid_argument& e) {
      r.status = RowStatus::Validation;
      r.error = e.what();
    } catch (const Deconfined& e) {
      r.status = RowStatus::Validation;
      r.error = e.what();
    } catch (const UnstablePoint& e) {
      r.status = RowStatus::Unstable;
      r.error = e.what();
    } catch (const std::exception& e) {
      r.status = RowStatus::Solver;
      r.error = e.what();
    }
  }

  std::vector<std::string> columns;
  std::vector<std::map<std::string, std::optional<double>>> values(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i].doc) continue;
    for (auto& [key, v] : report_scalars(*rows[i].doc)) {
      if (std::find(columns.begin(), columns.end(), key) == columns.end()) columns.push_back(key);
      values[i][key] = v;
    }
  }

  std::string csv = "point,value,status";
  for (const auto& c : columns) csv += "," + csv_cell(c);
  csv += ",error\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    csv += std::to_string(i) + "," + csv_cell(rows[i].value) + "," + row_status_name(rows[i].status);
    for (const auto& c : columns) {
      csv += ',';
      const auto it = values[i].find(c);
      if (it != values[i].end() && it->second) csv += format_number(*it->second);
    }
    csv += "," + csv_cell(rows[i].error) + "\n";
  }

  Json doc;
  doc["format"] = "rftrap-sweep";
  doc["version"] = 1;
  doc["field"] = sw.field;
  doc["points"] = Json::array();
  for (const auto& r : rows)
    doc["points"].push_back({{"value", r.value},
                             {"status", row_status_name(r.status)},
                             {"error", r.error.empty() ? Json(nullptr) : Json(r.error)},
                             {"report", r.doc ? *r.doc : Json(nullptr)}});

  if (!o.out.empty()) {
    write_file(fs::path(o.out) / "sweep.csv", csv);
    write_file(fs::path(o.out) / "sweep.json", json_text(doc));
  }
  out << (o.format == "json" ? json_text(doc) : csv);

  int code = kSuccess;
  for (const auto& r : rows) {
    if (r.status == RowStatus::Validation) code = std::max(code, static_cast<int>(kValidation));
    if (r.status == RowStatus::Solver) code = std::max(code, static_cast<int>(kSolverFailure));
    if (r.status == RowStatus::Unstable && o.strict) code = std::max(code, static_cast<int>(kUnstable));
    if (!r.error.empty()) err << "point " << r.value << ": " << r.error << "\n";
  }
  return code;
}

struct FigureCase {
  std::string name;
  std::string series;
  std::string yaml;
};

std::vector<FigureCase> figure_cases() {
  const std::string ion = "ion: {charge: 1 e, mass: 40 u}\n";
  // The quadrupole profiles are scaled with omega_x / 2 pi = 1 MHz.
  const std::string quad =
      ion + "trap: {order: 2, r0: 3 mm, rf_amplitude: 2000 V, rf_frequency: 10 MHz}\n";
  const std::string oct = ion + "trap: {order: 4, r0: 1 cm, rf_amplitude: 800 V, rf_frequency: 10 MHz}\n";
  const std::string dodeca =
      ion + "trap: {order: 6, r0: 1 cm, rf_amplitude: 800 V, rf_frequency: 10 MHz}\n";
  auto cloud = [](const std::string& t, const std::string& lin, bool quadrupole) {
    return "cloud: {temperature: " + t + ", linear_density: " + lin +
           (quadrupole ? ", secular_frequency: 1 MHz" : "") + "}\n";
  };
  std::vector<FigureCase> cases;
  for (const char* t : {"10000", "300", "5"}) {
    cases.push_back({std::string("quadrupole_T") + t + "K", "quadrupole-temperature",
                     quad + cloud(std::string(t) + " K", "1e5 /mm", true)});
  }
  for (const char* t : {"10000", "300", "5"}) {
    cases.push_back({std::string("octopole_T") + t + "K", "octopole-temperature",
                     oct + cloud(std::string(t) + " K", "1.6e4 /mm", false)});
  }
  cases.push_back({"order_k4", "multipole-order", oct + cloud("5 K", "1.6e4 /mm", false)});
  cases.push_back({"order_k6", "multipole-order", dodeca + cloud("5 K", "1.6e4 /mm", false)});
  return cases;
}

int cmd_figures(const Options& o, std::ostream& out, std::ostream& err) {
  const fs::path dir = o.out.empty() ? fs::path("figures") : fs::path(o.out);
  const auto cases = figure_cases();
  std::vector<Config> cfgs;
  std::vector<fluid::CloudRequest> reqs;
  for (const auto& c : cases) {
    cfgs.push_back(parse_config(c.yaml, c.name));
    const Config& cfg = cfgs.back();
    fluid::ProfileOptions po;
    po.edge_threshold = o.edge_threshold;
    reqs.push_back({cfg.trap, cfg.ion, cfg.cloud->temperature, cfg.cloud->linear_density,
                    cfg.cloud->omega_x, po});
  }
  const auto outcomes = fluid::solve_clouds(reqs);

  Json index;
  index["format"] = "rftrap-figures";
  index["version"] = 1;
  index["datasets"] = Json::array();
  std::string csv = "name,series,k,temperature_K,linear_density_per_m,shape,rho_max,lambda_D_m,n0_m3,R_m,peak_density_ratio,status\n";
  int code = kSuccess;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const auto& oc = outcomes[i];
    Json entry = {{"name", cases[i].name}, {"series", cases[i].series}};
    csv += cases[i].name + "," + cases[i].series + "," + std::to_string(cfgs[i].trap.k()) + "," +
           format_number(cfgs[i].cloud->temperature) + "," +
           format_number(cfgs[i].cloud->linear_density) + ",";
    if (oc.cloud) {
      const auto& c = *oc.cloud;
      write_profile(dir, cases[i].name, c, cfgs[i].inputs, c.warnings);
      entry["csv"] = cases[i].name + ".csv";
      entry["sidecar"] = cases[i].name + ".json";
      entry["status"] = "ok";
      entry["error"] = nullptr;
      for (double v : {c.profile.shape, c.profile.rho_max, c.lambda_D, c.n0, c.radius,
                       c.profile.peak_density})
        csv += format_number(v) + ",";
      csv += "ok\n";
    } else {
      entry["csv"] = nullptr;
      entry["sidecar"] = nullptr;
      entry["status"] = oc.failure == fluid::FailureKind::Validation ? "validation" : "solver";
      entry["error"] = oc.error;
      csv += ",,,,,," + entry["status"].get<std::string>() + "\n";
      err << cases[i].name << ": " << oc.error << "\n";
      code = std::max(code, static_cast<int>(oc.failure == fluid::FailureKind::Validation
                                                 ? kValidation
                                                 : kSolverFailure));
    }
    index["datasets"].push_back(entry);
  }
  write_file(dir / "figures.json", json_text(index));
  write_file(dir / "figures.csv", csv);
  out << csv;
  return code;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Ion clouds in linear multipole RF traps: trap parameters, density "
               "profiles, trajectories and sweeps.",
               "rftrap"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--config", o.config, "Trap configuration (YAML) or a report JSON");
  app.add_option("--out", o.out, "Output directory");
  app.add_option("--format", o.format, "Report format on stdout or in --out")
      ->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--eta-lim", o.eta_lim, "Adiabaticity limit")->capture_default_str()
      ->check(CLI::PositiveNumber);
  app.add_option("--edge-threshold", o.edge_threshold, "Profile edge: n / n_peak")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0).description("in (0, 1)"));
  app.add_flag("--strict", o.strict, "Exit with status 4 on an unstable operating point");
  app.add_option("--set", o.sets, "Override a config field: section.key=value");
  app.add_option("--temperature", o.temperature, "Override cloud.temperature, e.g. '300 K'");
  app.add_option("--linear-density", o.linear_density,
                 "Override cloud.linear_density, e.g. '1e5 /mm'");
  app.add_option("--name", o.name, "Base name of written files");

  using Handler = int (*)(const Options&, std::ostream&, std::ostream&);
  std::map<std::string, Handler> handlers;
  auto sub = [&](const char* name, const char* help, Handler h) {
    app.add_subcommand(name, help)->fallthrough();
    handlers[name] = h;
  };
  sub("params", "Derived trap quantities (and the cloud when configured)", cmd_params);
  sub("profile", "Match, integrate and scale a density profile; writes CSV + JSON", cmd_profile);
  sub("trajectory", "Integrate one ion; writes trajectory and spectrum CSV + JSON", cmd_trajectory);
  sub("scale", "Cold-limit radius against the adiabatic radius", cmd_scale);
  sub("sweep", "Vary one config field; one report row per point", cmd_sweep);
  sub("figures", "Regenerate the reference profile datasets", cmd_figures);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  }
  if (o.edge_threshold <= 0.0 || o.edge_threshold >= 1.0) {
    err << "error: --edge-threshold must be in (0, 1)\n";
    return kValidation;
  }

  const std::string cmd = app.get_subcommands().front()->get_name();
  try {
    return handlers.at(cmd)(o, out, err);
  } catch (const Exit& e) {
    err << "error: " << e.message << "\n";
    return e.code;
  } catch (const UnstablePoint& e) {
    err << "error: unstable operating point: " << e.what() << "\n";
    return o.strict ? kUnstable : kValidation;
  } catch (const Deconfined& e) {
    err << "error: axially deconfined: " << e.what() << "\n";
    return kValidation;
  } catch (const QuadrupoleOnly& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const OutOfBracket& e) {
    err << "error: " << e.what()
        << " (change the temperature or linear density, or check the trap)\n";
    return kSolverFailure;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kSolverFailure;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternal;
  }
}

}  // namespace rftrap::cli

#include "rftrap/cli/report.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rftrap/constants.hpp"
#include "rftrap/core_model.hpp"
#include "rftrap/error.hpp"

namespace rftrap::cli {

namespace {

constexpr double kTwoPi = 2.0 * constants::pi;

Json derived_section(const Config& cfg, const ReportOptions& opt, Report& rep) {
  const LinearTrap& trap = cfg.trap;
  const IonSpecies& ion = cfg.ion;
  const int k = trap.k();
  Json d = Json::object();

  if (trap.rf_amplitude() == 0.0)
    rep.warnings.push_back("zero RF drive: no radial confinement, trap-strength quantities are zero");

  const double ek = characteristic_energy(trap, ion).joules;
  d["characteristic_energy"] = quantity(ek, "J");
  d["characteristic_energy_eV"] = quantity(ek / constants::elementary_charge, "eV");
  d["rf_angular_frequency"] = quantity(trap.rf_omega(), "rad/s");

  if (k == 2) {
    MathieuPoint mp = mathieu_parameters(trap, ion);
    d["a_x"] = quantity(mp.a_x, "1");
    d["q_x"] = quantity(mp.q_x, "1");
    d["adiabaticity"] = quantity(adiabaticity(trap, ion, trap.r0()), "1");
    d["pseudopotential_frequency"] = quantity(pseudopotential_frequency(trap, ion), "rad/s");
    double wx = cfg.cloud && cfg.cloud->omega_x ? *cfg.cloud->omega_x : 0.0;
    try {
      mp = with_betas(mp);
      d["beta_x"] = quantity(*mp.beta_x, "1");
      d["beta_y"] = quantity(*mp.beta_y, "1");
      const SecularFrequencies s = secular_frequencies(trap, ion);
      d["omega_x"] = quantity(s.omega_x, "rad/s");
      d["secular_frequency_x"] = quantity(s.omega_x / kTwoPi, "Hz");
      d["omega_r"] = quantity(s.omega_r, "rad/s");
      d["omega_z"] = quantity(s.omega_z, "rad/s");
      if (wx == 0.0) wx = s.omega_x;
    } catch (const UnstablePoint& e) {
      rep.unstable = true;
      rep.warnings.push_back("unstable operating point: " + std::string(e.what()));
    } catch (const Deconfined& e) {
      rep.unstable = true;
      rep.warnings.push_back("axially deconfined: " + std::string(e.what()));
    }
    if (!rep.unstable || wx > 0.0) {
      d["scaling_omega_x"] = quantity(wx, "rad/s");
      d["limit_density"] = quantity(limit_density(ion, wx), "m^-3");
      if (cfg.cloud)
        d["coupling_limit"] = quantity(coupling_limit(ion, wx, cfg.cloud->temperature), "1");
    }
  } else {
    const auto ad = fluid::adiabatic_radius(trap, ion, opt.eta_lim);
    d["eta_ad_at_r0"] = quantity(adiabaticity(trap, ion, trap.r0()), "1");
    d["adiabatic_radius"] = quantity(ad.radius, "m");
    if (std::isfinite(ad.radius))
      d["cold_density_at_adiabatic_radius"] =
          quantity(fluid::cold_limit_density(trap, ion, ad.radius), "m^-3");
    if (trap.axial() && trap.rf_amplitude() > 0.0) {
      const RfMinimum m = rf_minimum_radius(trap, ion);
      d["rf_minimum_radius"] = quantity(m.radius, "m");
    }
  }

  Json map = Json::array();
  for (double f : {0.1, 0.25, 0.5, 0.75, 1.0}) {
    const double r = f * trap.r0();
    map.push_back({{"r", quantity(r, "m")},
                   {"eta_ad", quantity(adiabaticity(trap, ion, r), "1")}});
  }
  d["eta_ad_map"] = map;
  return d;
}

Json cloud_section(const Config& cfg, const ReportOptions& opt, Report& rep) {
  const CloudSpec& spec = *cfg.cloud;
  fluid::ScaledCloud c = fluid::solve_cloud(cfg.trap, cfg.ion, spec.temperature,
                                            spec.linear_density, opt.profile, spec.omega_x);
  const bool quad = c.profile.kind == fluid::ProfileKind::Quadrupole;
  Json j = Json::object();
  j["kind"] = quad ? "quadrupole" : "multipole";
  j[quad ? "gamma" : "alpha"] = quantity(c.profile.shape, "1");
  j["rho_max"] = quantity(c.profile.rho_max, "1");
  j["temperature"] = quantity(c.temperature, "K");
  j["linear_density"] = quantity(c.linear_density, "1/m");
  j["n0"] = quantity(c.n0, "m^-3");
  j["lambda_D"] = quantity(c.lambda_D, "m");
  j["radius"] = quantity(c.radius, "m");
  j["coupling"] = quantity(c.coupling, "1");
  j["peak_density_ratio"] = quantity(c.profile.peak_density, "1");
  j["peak_radius"] = quantity(c.profile.peak_rho * c.lambda_D, "m");
  if (c.omega_x) j["omega_x"] = quantity(*c.omega_x, "rad/s");
  for (const auto& w : c.warnings) rep.warnings.push_back(w);
  rep.cloud = std::move(c);
  return j;
}

Json scale_section(const Config& cfg, const ReportOptions& opt, Report& rep) {
  if (!cfg.cloud)
    throw ConfigError(cfg.origin, "cloud.linear_density",
                      "scaling needs a linear density (cloud section or --linear-density)");
  const double lin = cfg.cloud->linear_density;
  const double rm = fluid::cold_limit_radius(cfg.trap, cfg.ion, lin, cfg.cloud->omega_x);
  const auto ad = fluid::adiabatic_radius(cfg.trap, cfg.ion, opt.eta_lim);
  double ratio = 0.0;
  if (cfg.trap.k() > 2)
    ratio = fluid::fit_ratio(cfg.trap, cfg.ion, lin, opt.eta_lim);
  else
    ratio = std::isinf(ad.radius) ? 0.0 : HUGE_VAL;
  Json s = Json::object();
  s["linear_density"] = quantity(lin, "1/m");
  s["eta_lim"] = quantity(opt.eta_lim, "1");
  s["cold_limit_radius"] = quantity(rm, "m");
  s["adiabatic_radius"] = quantity(ad.radius, "m");
  s["fit_ratio"] = quantity(ratio, "1");
  if (cfg.trap.k() > 2)
    s["cold_edge_density"] = quantity(fluid::cold_limit_density(cfg.trap, cfg.ion, rm), "m^-3");
  const bool fits = ratio <= 1.0;
  s["verdict"] = fits ? "fits" : "exceeds adiabatic volume";
  if (!fits) {
    std::ostringstream os;
    os << "exceeds adiabatic volume: cold-limit radius " << format_number(rm)
       << " m is beyond the adiabatic radius " << format_number(ad.radius)
       << " m at eta_lim " << format_number(opt.eta_lim);
    rep.warnings.push_back(os.str());
  }
  return s;
}

}  // namespace

Json quantity(double value, const std::string& unit) {
  Json q = Json::object();
  if (std::isfinite(value))
    q["value"] = round12(value);
  else
    q["value"] = nullptr;
  q["unit"] = unit;
  return q;
}

Report build_report(const std::string& command, const Config& cfg,
                    const ReportOptions& options) {
  Report rep;
  Json& doc = rep.doc;
  doc["format"] = "rftrap-report";
  doc["version"] = 1;
  doc["command"] = command;
  doc["inputs"] = cfg.inputs;
  doc["options"] = {{"eta_lim", quantity(options.eta_lim, "1")},
                    {"edge_threshold", quantity(options.profile.edge_threshold, "1")}};
  doc["derived"] = derived_section(cfg, options, rep);
  if (cfg.cloud && options.solve_cloud) doc["cloud"] = cloud_section(cfg, options, rep);
  if (options.scale) doc["scale"] = scale_section(cfg, options, rep);
  doc["warnings"] = rep.warnings;
  return rep;
}

std::vector<std::pair<std::string, std::optional<double>>> report_scalars(const Json& doc) {
  std::vector<std::pair<std::string, std::optional<double>>> out;
  for (const char* section : {"derived", "cloud", "scale"}) {
    if (!doc.contains(section)) continue;
    for (const auto& [key, v] : doc[section].items()) {
      if (!v.is_object() || !v.contains("value")) continue;
      std::optional<double> value;
      if (!v["value"].is_null()) value = v["value"].get<double>();
      out.emplace_back(std::string(section) + "." + key + " [" +
                           v["unit"].get<std::string>() + "]",
                       value);
    }
  }
  return out;
}

std::string report_table(const Json& doc) {
  std::ostringstream os;
  for (const char* section : {"derived", "cloud", "scale"}) {
    if (!doc.contains(section)) continue;
    os << "[" << section << "]\n";
    std::size_t width = 0;
    for (const auto& [key, v] : doc[section].items()) width = std::max(width, key.size());
    for (const auto& [key, v] : doc[section].items()) {
      if (v.is_array()) continue;
      os << "  " << key << std::string(width - key.size() + 2, ' ');
      if (v.is_string()) {
        os << v.get<std::string>() << "\n";
      } else if (v["value"].is_null()) {
        os << "n/a " << v["unit"].get<std::string>() << "\n";
      } else {
        os << format_number(v["value"].get<double>()) << " " << v["unit"].get<std::string>()
           << "\n";
      }
    }
  }
  for (const auto& w : doc["warnings"]) os << "warning: " << w.get<std::string>() << "\n";
  return os.str();
}

}  // namespace rftrap::cli

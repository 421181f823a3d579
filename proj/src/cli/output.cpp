#include "rftrap/cli/output.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace rftrap::cli {

void write_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

std::string csv_cell(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string json_text(const Json& doc) { return doc.dump(2) + "\n"; }

std::string profile_csv(const fluid::ReducedProfile& p) {
  std::string out = "rho,psi,n_over_n0\n";
  out.reserve(p.rho.size() * 48);
  for (std::size_t i = 0; i < p.rho.size(); ++i) {
    out += format_number(p.rho[i]);
    out += ',';
    out += format_number(p.psi[i]);
    out += ',';
    out += format_number(std::exp(p.psi[i]));
    out += '\n';
  }
  return out;
}

Json profile_sidecar(const fluid::ScaledCloud& c, const Json& inputs,
                     const std::string& csv_name, const std::vector<std::string>& warnings) {
  const bool quad = c.profile.kind == fluid::ProfileKind::Quadrupole;
  Json j;
  j["format"] = "rftrap-profile";
  j["version"] = 1;
  j["csv"] = csv_name;
  j["columns"] = {"rho", "psi", "n_over_n0"};
  j["kind"] = quad ? "quadrupole" : "multipole";
  j["k"] = c.profile.k;
  j[quad ? "gamma" : "alpha"] = quantity(c.profile.shape, "1");
  j["rho_max"] = quantity(c.profile.rho_max, "1");
  j["edge_threshold"] = quantity(c.profile.edge_threshold, "1");
  j["T"] = quantity(c.temperature, "K");
  j["n0"] = quantity(c.n0, "m^-3");
  j["lambda_D_m"] = quantity(c.lambda_D, "m");
  j["R_m"] = quantity(c.radius, "m");
  j["linear_density_per_m"] = quantity(c.linear_density, "1/m");
  j["coupling"] = quantity(c.coupling, "1");
  j["peak_density_ratio"] = quantity(c.profile.peak_density, "1");
  if (c.omega_x) j["omega_x"] = quantity(*c.omega_x, "rad/s");
  j["trap"] = inputs.contains("trap") ? inputs["trap"] : Json::object();
  if (inputs.contains("axial")) j["axial"] = inputs["axial"];
  j["ion"] = inputs.contains("ion") ? inputs["ion"] : Json::object();
  j["warnings"] = warnings;
  return j;
}

std::string trajectory_csv(const dynamics::Trajectory& tr) {
  std::string out = "t,x,y,z,vx,vy,vz\n";
  for (const auto& s : tr.samples) {
    for (double v : {s.t, s.x, s.y, s.z, s.vx, s.vy}) {
      out += format_number(v);
      out += ',';
    }
    out += format_number(s.vz);
    out += '\n';
  }
  return out;
}

std::string spectrum_csv(const dynamics::Spectrum& sp) {
  std::string out = "freq_hz,power\n";
  for (std::size_t i = 0; i < sp.freq_hz.size(); ++i)
    out += format_number(sp.freq_hz[i]) + "," + format_number(sp.power[i]) + "\n";
  return out;
}

std::string report_csv(const Json& doc) {
  const auto scalars = report_scalars(doc);
  std::string head, row;
  for (std::size_t i = 0; i < scalars.size(); ++i) {
    if (i) {
      head += ',';
      row += ',';
    }
    head += csv_cell(scalars[i].first);
    if (scalars[i].second) row += format_number(*scalars[i].second);
  }
  return head + "\n" + row + "\n";
}

}  // namespace rftrap::cli

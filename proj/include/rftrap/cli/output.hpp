#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "rftrap/cli/report.hpp"
#include "rftrap/dynamics.hpp"
#include "rftrap/fluid.hpp"
#include "rftrap/spectrum.hpp"

namespace rftrap::cli {

// Writes bytes verbatim ("\n" line endings). Throws std::runtime_error.
void write_file(const std::filesystem::path& path, const std::string& text);

// Quotes a CSV cell when it contains a comma, quote or newline.
std::string csv_cell(const std::string& text);

std::string json_text(const Json& doc);  // two-space indent, trailing newline

// Header `rho,psi,n_over_n0`.
std::string profile_csv(const fluid::ReducedProfile& profile);

// Sidecar describing a profile CSV: shape parameter, scaling and echo of the
// trap and ion inputs.
Json profile_sidecar(const fluid::ScaledCloud& cloud, const Json& inputs,
                     const std::string& csv_name, const std::vector<std::string>& warnings);

// Header `t,x,y,z,vx,vy,vz`, SI.
std::string trajectory_csv(const dynamics::Trajectory& trajectory);

// Header `freq_hz,power`.
std::string spectrum_csv(const dynamics::Spectrum& spectrum);

// Header then one row per report scalar set.
std::string report_csv(const Json& doc);

}  // namespace rftrap::cli

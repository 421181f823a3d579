#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "rftrap/constants.hpp"
#include "rftrap/core_model.hpp"
#include "rftrap/error.hpp"
#include "rftrap/fluid.hpp"

namespace rftrap::fluid {
namespace {

using constants::boltzmann;
using constants::pi;
using constants::vacuum_permittivity;

void add_common_warnings(ScaledCloud& c) {
  if (c.coupling < 1.0) {
    std::ostringstream msg;
    msg << "indicative: coupling parameter " << c.coupling
        << " < 1, mean-field model only indicative for a warm dilute sample";
    c.warnings.push_back(msg.str());
  }
  if (const auto& ax = c.trap.axial(); ax && c.radius > ax->z0 / 10.0) {
    std::ostringstream msg;
    msg << "prolate assumption questionable: R = " << c.radius
        << " m exceeds z0/10 = " << ax->z0 / 10.0 << " m";
    c.warnings.push_back(msg.str());
  }
  if (!c.profile.complete())
    c.warnings.push_back("profile incomplete: radius is a lower bound");
}

ScaledCloud make_cloud(const ReducedProfile& profile, const LinearTrap& trap,
                       const IonSpecies& ion, double temperature,
                       double lambda_d) {
  ScaledCloud c{profile, temperature, 0.0, lambda_d, 0.0, 0.0, 0.0,
                std::nullopt, trap, ion, {}};
  c.n0 = boltzmann * temperature * vacuum_permittivity /
         (ion.charge() * ion.charge() * lambda_d * lambda_d);
  c.radius = lambda_d * profile.rho_max;
  c.linear_density =
      linear_density_scale(ion, temperature) * profile.reduced_linear_density;
  c.coupling = coupling_parameter(ion, temperature, c.n0);
  return c;
}

}  // namespace

ScaledCloud scale_quadrupole(const ReducedProfile& profile,
                             const LinearTrap& trap, const IonSpecies& ion,
                             double temperature,
                             std::optional<double> omega_x) {
  if (!trap.is_quadrupole())
    throw std::invalid_argument("scale_quadrupole needs a k = 2 trap");
  if (profile.kind != ProfileKind::Quadrupole)
    throw std::invalid_argument("scale_quadrupole needs a quadrupole profile");
  if (!(temperature > 0.0)) throw std::invalid_argument("temperature must be > 0");
  const double wx = omega_x ? *omega_x : secular_frequencies(trap, ion).omega_x;
  if (!(wx > 0.0)) throw std::invalid_argument("omega_x must be > 0");

  const double gamma = profile.shape;
  const double n0 = limit_density(ion, wx) / (gamma + 1.0);
  const double lambda_d = debye_length(ion, temperature, n0);
  const double expected = boltzmann * temperature / (2.0 * ion.mass() * wx * wx);
  const double identity = lambda_d * lambda_d / (gamma + 1.0);
  if (std::abs(identity / expected - 1.0) > 1e-10)
    throw SolverFailure("solver failure: Debye length scaling identity violated");

  ScaledCloud c = make_cloud(profile, trap, ion, temperature, lambda_d);
  c.n0 = n0;
  c.omega_x = wx;
  add_common_warnings(c);
  return c;
}

ScaledCloud scale_multipole(const ReducedProfile& profile,
                            const LinearTrap& trap, const IonSpecies& ion,
                            double temperature) {
  const int k = trap.k();
  if (k < 3) throw std::invalid_argument("scale_multipole needs k >= 3");
  if (profile.kind != ProfileKind::Multipole || profile.k != k)
    throw std::invalid_argument("profile order does not match the trap");
  if (!(temperature > 0.0)) throw std::invalid_argument("temperature must be > 0");
  const double v0 = trap.rf_amplitude();
  if (!(v0 > 0.0)) throw std::invalid_argument("scale_multipole needs V0 > 0");

  const double ek = characteristic_energy(trap, ion).joules;
  const double q = ion.charge();
  const double km = 2.0 * k - 2.0;
  const double inner = 32.0 * boltzmann * temperature * ek *
                       std::pow(trap.r0(), km) / (km * km * q * q * v0 * v0);
  const double lambda_d =
      std::sqrt(std::pow(profile.shape * inner, 1.0 / (k - 1.0)));

  ScaledCloud c = make_cloud(profile, trap, ion, temperature, lambda_d);
  add_common_warnings(c);
  return c;
}

ScaledCloud solve_cloud(const LinearTrap& trap, const IonSpecies& ion,
                        double temperature, double linear_density,
                        const ProfileOptions& profile,
                        std::optional<double> omega_x) {
  if (trap.is_quadrupole()) {
    MatchOptions o = gamma_match_options();
    o.profile = profile;
    MatchResult m = match_gamma(linear_density, temperature, ion, o);
    ScaledCloud c = scale_quadrupole(m.profile, trap, ion, temperature, omega_x);
    c.warnings.insert(c.warnings.begin(), m.warnings.begin(), m.warnings.end());
    return c;
  }
  MatchOptions o = alpha_match_options();
  o.profile = profile;
  MatchResult m = match_alpha(linear_density, temperature, ion, trap.k(), o);
  ScaledCloud c = scale_multipole(m.profile, trap, ion, temperature);
  c.warnings.insert(c.warnings.begin(), m.warnings.begin(), m.warnings.end());
  return c;
}

double cold_limit_radius(const LinearTrap& trap, const IonSpecies& ion,
                         double linear_density, std::optional<double> omega_x) {
  if (!(linear_density >= 0.0))
    throw std::invalid_argument("linear density must be >= 0");
  const double q = ion.charge();
  if (trap.is_quadrupole()) {
    const double wx = omega_x ? *omega_x : secular_frequencies(trap, ion).omega_x;
    if (!(wx > 0.0)) throw std::invalid_argument("omega_x must be > 0");
    return std::sqrt(linear_density) / (std::sqrt(ion.mass()) * wx) *
           std::sqrt(q * q / (2.0 * pi * vacuum_permittivity));
  }
  const int k = trap.k();
  const double v0 = trap.rf_amplitude();
  if (!(v0 > 0.0)) throw std::invalid_argument("cold_limit_radius needs V0 > 0");
  const double ek = characteristic_energy(trap, ion).joules;
  const double base =
      linear_density * 8.0 * ek / (pi * vacuum_permittivity * (k - 1.0) * v0 * v0);
  return trap.r0() * std::pow(base, 1.0 / (2.0 * (k - 1.0)));
}

AdiabaticRadius adiabatic_radius(const LinearTrap& trap, const IonSpecies& ion,
                                 double eta_lim) {
  if (!(eta_lim > 0.0)) throw std::invalid_argument("eta_lim must be > 0");
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (trap.is_quadrupole()) {
    const double eta = adiabaticity(trap, ion, 0.0);
    return {eta < eta_lim ? inf : 0.0, true};
  }
  const int k = trap.k();
  const double v0 = trap.rf_amplitude();
  if (v0 == 0.0) return {inf, false};
  const double ek = characteristic_energy(trap, ion).joules;
  const double base =
      eta_lim * 2.0 * k * ek / ((k - 1.0) * std::abs(ion.charge()) * v0);
  return {trap.r0() * std::pow(base, 1.0 / (k - 2.0)), false};
}

double fit_ratio(const LinearTrap& trap, const IonSpecies& ion,
                 double linear_density, double eta_lim) {
  if (trap.k() < 3) throw std::invalid_argument("fit_ratio needs k >= 3");
  return cold_limit_radius(trap, ion, linear_density) /
         adiabatic_radius(trap, ion, eta_lim).radius;
}

double cold_limit_density(const LinearTrap& trap, const IonSpecies& ion,
                          double r) {
  if (!(r >= 0.0)) throw std::invalid_argument("radius must be >= 0");
  const int k = trap.k();
  const double v0 = trap.rf_amplitude();
  const double r0 = trap.r0();
  const double ek = characteristic_energy(trap, ion).joules;
  return vacuum_permittivity * (k - 1.0) * (k - 1.0) * v0 * v0 /
         (8.0 * ek * r0 * r0) * std::pow(r / r0, 2 * k - 4);
}

}  // namespace rftrap::fluid

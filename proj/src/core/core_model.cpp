#include "rftrap/core_model.hpp"

#include <cmath>
#include <complex>
#include <sstream>
#include <stdexcept>

#include "rftrap/constants.hpp"
#include "rftrap/error.hpp"
#include "rftrap/mathieu.hpp"

namespace rftrap {

using constants::boltzmann;
using constants::pi;
using constants::vacuum_permittivity;

CharacteristicEnergy characteristic_energy(const LinearTrap& trap,
                                           const IonSpecies& ion) {
  const double k = trap.k();
  const double w = trap.rf_omega();
  return {ion.mass() * w * w * trap.r0() * trap.r0() / (2.0 * k * k)};
}

MathieuPoint mathieu_parameters(const LinearTrap& trap, const IonSpecies& ion) {
  if (!trap.is_quadrupole()) throw QuadrupoleOnly("mathieu_parameters");
  const double scale = ion.mass() * trap.rf_omega() * trap.rf_omega() *
                       trap.r0() * trap.r0();
  const double q = 2.0 * ion.charge() * trap.rf_amplitude() / scale;
  const double a = -4.0 * ion.charge() * trap.static_offset() / scale;
  return {a, q, -a, -q, std::nullopt, std::nullopt};
}

MathieuPoint with_betas(MathieuPoint point) {
  point.beta_x = beta_from_aq(point.a_x, point.q_x);
  point.beta_y = beta_from_aq(point.a_y, point.q_y);
  return point;
}

SecularFrequencies secular_frequencies(const LinearTrap& trap,
                                       const IonSpecies& ion) {
  const MathieuPoint p = mathieu_parameters(trap, ion);
  const double omega_x = beta_from_aq(p.a_x, p.q_x) * trap.rf_omega() / 2.0;
  double omega_z = 0.0;
  if (const auto& ax = trap.axial()) {
    omega_z = std::sqrt(2.0 * ion.charge() * ax->kappa * ax->end_voltage /
                        (ion.mass() * ax->z0 * ax->z0));
  }
  const double wr2 = omega_x * omega_x - 0.5 * omega_z * omega_z;
  if (!(wr2 > 0.0)) {
    std::ostringstream msg;
    msg << "deconfined: omega_x^2 - omega_z^2/2 = " << wr2 << " rad^2/s^2";
    throw Deconfined(msg.str());
  }
  return {omega_x, std::sqrt(wr2), omega_z};
}

double pseudopotential_frequency(const LinearTrap& trap,
                                 const IonSpecies& ion) {
  if (!trap.is_quadrupole()) throw QuadrupoleOnly("pseudopotential_frequency");
  return std::abs(ion.charge()) * trap.rf_amplitude() /
         (std::sqrt(2.0) * ion.mass() * trap.rf_omega() * trap.r0() *
          trap.r0());
}

namespace {

double rf_prefactor(const LinearTrap& trap, const IonSpecies& ion) {
  const double q = ion.charge();
  const double v0 = trap.rf_amplitude();
  return q * q * v0 * v0 / (32.0 * characteristic_energy(trap, ion).joules);
}

}  // namespace

double pseudopotential(const LinearTrap& trap, const IonSpecies& ion, double r,
                       double theta, double z) {
  if (r < 0.0) throw std::invalid_argument("pseudopotential: r must be >= 0");
  const int k = trap.k();
  const double s = r / trap.r0();
  double v = rf_prefactor(trap, ion) * std::pow(s, 2 * k - 2);
  if (trap.static_offset() != 0.0) {
    v -= 0.5 * ion.charge() * trap.static_offset() * std::pow(s, k) *
         std::cos(k * theta);
  }
  if (const auto& ax = trap.axial()) {
    v += ion.charge() * ax->kappa * ax->end_voltage * (2.0 * z * z - r * r) /
         (2.0 * ax->z0 * ax->z0);
  }
  return v;
}

Vec3 pseudopotential_gradient(const LinearTrap& trap, const IonSpecies& ion,
                              const Vec3& p) {
  const int k = trap.k();
  const double r0 = trap.r0();
  const double s2 = (p.x * p.x + p.y * p.y) / (r0 * r0);
  // d/dx C s2^(k-1) = C (k-1) s2^(k-2) 2x / r0^2
  const double radial = rf_prefactor(trap, ion) * (k - 1) *
                        std::pow(s2, k - 2) * 2.0 / (r0 * r0);
  Vec3 g{radial * p.x, radial * p.y, 0.0};
  if (trap.static_offset() != 0.0) {
    const std::complex<double> w(p.x / r0, p.y / r0);
    const std::complex<double> wk1 = std::pow(w, k - 1);
    const double c = 0.5 * ion.charge() * trap.static_offset() * k / r0;
    g.x -= c * wk1.real();
    g.y += c * wk1.imag();
  }
  if (const auto& ax = trap.axial()) {
    const double c =
        ion.charge() * ax->kappa * ax->end_voltage / (ax->z0 * ax->z0);
    g.x -= c * p.x;
    g.y -= c * p.y;
    g.z += 2.0 * c * p.z;
  }
  return g;
}

RfMinimum rf_minimum_radius(const LinearTrap& trap, const IonSpecies& ion) {
  const int k = trap.k();
  const auto& ax = trap.axial();
  if (k == 2 || !ax || ax->end_voltage == 0.0) return {0.0, false};
  if (trap.rf_amplitude() == 0.0)
    throw std::invalid_argument("rf_minimum_radius: V0 = 0 gives no minimum");
  const double r0 = trap.r0();
  const double ek = characteristic_energy(trap, ion).joules;
  const double v0 = trap.rf_amplitude();
  const double rhs = std::pow(r0, 2 * k - 2) / (ax->z0 * ax->z0) * 16.0 * ek *
                     ax->kappa * ax->end_voltage /
                     ((k - 1) * std::abs(ion.charge()) * v0 * v0);
  return {std::pow(rhs, 1.0 / (2 * k - 4)), true};
}

double adiabaticity(const LinearTrap& trap, const IonSpecies& ion, double r) {
  if (r < 0.0) throw std::invalid_argument("adiabaticity: r must be >= 0");
  const int k = trap.k();
  const double w = trap.rf_omega();
  return k * (k - 1) * std::abs(ion.charge()) * trap.rf_amplitude() *
         std::pow(r, k - 2) / (ion.mass() * w * w * std::pow(trap.r0(), k));
}

double limit_density(const IonSpecies& ion, double omega_x) {
  if (!(omega_x > 0.0))
    throw std::invalid_argument("limit_density: omega_x must be positive");
  const double q = ion.charge();
  return 2.0 * ion.mass() * vacuum_permittivity * omega_x * omega_x / (q * q);
}

double debye_length(const IonSpecies& ion, double temperature, double density) {
  if (!(temperature > 0.0) || !(density > 0.0))
    throw std::invalid_argument("debye_length: T and n must be positive");
  const double q = ion.charge();
  return std::sqrt(boltzmann * temperature * vacuum_permittivity /
                   (q * q * density));
}

double coupling_parameter(const IonSpecies& ion, double temperature,
                          double density) {
  if (!(temperature > 0.0) || !(density > 0.0))
    throw std::invalid_argument("coupling_parameter: T and n must be positive");
  const double q = ion.charge();
  const double wigner_seitz = std::cbrt(3.0 / (4.0 * pi * density));
  return q * q /
         (4.0 * pi * vacuum_permittivity * wigner_seitz * boltzmann *
          temperature);
}

double coupling_limit(const IonSpecies& ion, double omega_x,
                      double temperature) {
  if (!(temperature > 0.0) || !(omega_x > 0.0))
    throw std::invalid_argument("coupling_limit: T and omega_x must be positive");
  const double q = ion.charge();
  const double coulomb = q * q / (4.0 * pi * vacuum_permittivity);
  return std::cbrt(coulomb * coulomb) *
         std::cbrt(2.0 * ion.mass() * omega_x * omega_x) /
         (boltzmann * temperature);
}

}  // namespace rftrap

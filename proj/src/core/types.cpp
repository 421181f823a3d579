#include "rftrap/types.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "rftrap/constants.hpp"

namespace rftrap {

IonSpecies::IonSpecies(double charge, double mass, std::string label)
    : charge_(charge), mass_(mass), label_(std::move(label)) {
  if (!std::isfinite(charge_) || charge_ == 0.0)
    throw std::invalid_argument("IonSpecies: charge must be nonzero");
  if (!std::isfinite(mass_) || mass_ <= 0.0)
    throw std::invalid_argument("IonSpecies: mass must be positive");
}

IonSpecies IonSpecies::from_units(double charge_e, double mass_u,
                                  std::string label) {
  return IonSpecies(charge_e * constants::elementary_charge,
                    mass_u * constants::atomic_mass_unit, std::move(label));
}

IonSpecies IonSpecies::calcium40() { return from_units(1.0, 40.0, "Ca+"); }

double IonSpecies::charge_e() const {
  return charge_ / constants::elementary_charge;
}

double IonSpecies::mass_u() const { return mass_ / constants::atomic_mass_unit; }

AxialConfinement::AxialConfinement(double end_voltage_, double kappa_,
                                   double z0_)
    : end_voltage(end_voltage_), kappa(kappa_), z0(z0_) {
  if (!std::isfinite(end_voltage) || end_voltage < 0.0)
    throw std::invalid_argument("AxialConfinement: Vend must be >= 0");
  if (!(kappa > 0.0 && kappa <= 1.0))
    throw std::invalid_argument("AxialConfinement: kappa must be in (0, 1]");
  if (!std::isfinite(z0) || z0 <= 0.0)
    throw std::invalid_argument("AxialConfinement: z0 must be positive");
}

LinearTrap::LinearTrap(int k, double r0, double rf_amplitude, double rf_omega,
                       double static_offset,
                       std::optional<AxialConfinement> axial)
    : k_(k),
      r0_(r0),
      v0_(rf_amplitude),
      omega_(rf_omega),
      us_(static_offset),
      axial_(std::move(axial)) {
  if (k_ < 2) throw std::invalid_argument("LinearTrap: k must be >= 2");
  if (!std::isfinite(r0_) || r0_ <= 0.0)
    throw std::invalid_argument("LinearTrap: r0 must be positive");
  if (!std::isfinite(v0_) || v0_ < 0.0)
    throw std::invalid_argument("LinearTrap: V0 must be >= 0");
  if (!std::isfinite(omega_) || omega_ <= 0.0)
    throw std::invalid_argument("LinearTrap: Omega must be positive");
  if (!std::isfinite(us_))
    throw std::invalid_argument("LinearTrap: Us must be finite");
}

LinearTrap LinearTrap::with_rf(double rf_amplitude, double rf_omega) const {
  return LinearTrap(k_, r0_, rf_amplitude, rf_omega, us_, axial_);
}

LinearTrap LinearTrap::with_static_offset(double static_offset) const {
  return LinearTrap(k_, r0_, v0_, omega_, static_offset, axial_);
}

LinearTrap LinearTrap::with_order(int k) const {
  return LinearTrap(k, r0_, v0_, omega_, us_, axial_);
}

LinearTrap LinearTrap::with_axial(std::optional<AxialConfinement> axial) const {
  return LinearTrap(k_, r0_, v0_, omega_, us_, std::move(axial));
}

}  // namespace rftrap

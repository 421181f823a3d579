#pragma once

#include <optional>
#include <string>

namespace rftrap {

/// A trapped particle species. Stored in SI; build it from elementary
/// charges and atomic mass units with `from_units`.
class IonSpecies {
 public:
  static IonSpecies from_units(double charge_e, double mass_u,
                               std::string label = {});
  /// Singly charged 40Ca+ (mass 40 u).
  static IonSpecies calcium40();

  double charge() const { return charge_; }  // C
  double mass() const { return mass_; }      // kg
  double charge_e() const;
  double mass_u() const;
  const std::string& label() const { return label_; }

 private:
  IonSpecies(double charge, double mass, std::string label);
  double charge_;
  double mass_;
  std::string label_;
};

/// Static end-cap confinement along the trap axis.
struct AxialConfinement {
  AxialConfinement(double end_voltage, double kappa, double z0);

  double end_voltage;  // V
  double kappa;        // loss factor, (0, 1]
  double z0;           // m
};

/// Ideal linear 2k-pole RF trap. Voltages +-V(t)/2 with
/// V(t) = Us - V0 cos(Omega t) on alternate rods.
class LinearTrap {
 public:
  LinearTrap(int k, double r0, double rf_amplitude, double rf_omega,
             double static_offset = 0.0,
             std::optional<AxialConfinement> axial = std::nullopt);

  int k() const { return k_; }
  double r0() const { return r0_; }
  double rf_amplitude() const { return v0_; }  // V0, volts
  double rf_omega() const { return omega_; }   // rad/s
  double static_offset() const { return us_; } // Us, volts
  const std::optional<AxialConfinement>& axial() const { return axial_; }
  bool is_quadrupole() const { return k_ == 2; }

  // Copies with one field replaced; validation reruns.
  LinearTrap with_rf(double rf_amplitude, double rf_omega) const;
  LinearTrap with_static_offset(double static_offset) const;
  LinearTrap with_order(int k) const;
  LinearTrap with_axial(std::optional<AxialConfinement> axial) const;

 private:
  int k_;
  double r0_;
  double v0_;
  double omega_;
  double us_;
  std::optional<AxialConfinement> axial_;
};

struct CharacteristicEnergy {
  double joules;
};

struct SecularFrequencies {
  double omega_x;  // rad/s, without axial deconfinement
  double omega_r;  // rad/s, with deconfinement
  double omega_z;  // rad/s
};

struct MathieuPoint {
  double a_x;
  double q_x;
  double a_y;
  double q_y;
  std::optional<double> beta_x;
  std::optional<double> beta_y;
};

}  // namespace rftrap

#pragma once

#include "rftrap/types.hpp"

namespace rftrap {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

// E_k = m Omega^2 r0^2 / (2 k^2).
CharacteristicEnergy characteristic_energy(const LinearTrap& trap,
                                           const IonSpecies& ion);

// q_x = 2 q V0 / (m Omega^2 r0^2), a_x = -4 q Us / (m Omega^2 r0^2);
// y values are sign-flipped. Throws QuadrupoleOnly for k != 2.
// beta_x / beta_y are left empty; see `with_betas`.
MathieuPoint mathieu_parameters(const LinearTrap& trap, const IonSpecies& ion);

// Fills beta_x and beta_y from the continued fraction. Throws UnstablePoint.
MathieuPoint with_betas(MathieuPoint point);

// omega_x = beta_x Omega / 2, omega_z^2 = 2 q kappa Vend / (m z0^2),
// omega_r^2 = omega_x^2 - omega_z^2 / 2. Quadrupole only.
// Throws Deconfined when omega_r^2 <= 0, UnstablePoint when beta_x fails.
SecularFrequencies secular_frequencies(const LinearTrap& trap,
                                       const IonSpecies& ion);

// Lowest-order (pseudopotential) secular frequency of a quadrupole,
// q V0 / (sqrt(2) m Omega r0^2).
double pseudopotential_frequency(const LinearTrap& trap, const IonSpecies& ion);

// Effective potential energy in joules at cylindrical (r, theta, z):
//   q^2 V0^2 / (32 E_k) (r/r0)^(2k-2) - (q Us / 2) (r/r0)^k cos(k theta)
//   + q kappa Vend (2 z^2 - r^2) / (2 z0^2).
// The static rod term carries the sign that matches the equations of motion
// used by the RF integrator (a_x = -4 q Us / ...).
double pseudopotential(const LinearTrap& trap, const IonSpecies& ion, double r,
                       double theta, double z);

// Cartesian gradient of `pseudopotential` in J/m.
Vec3 pseudopotential_gradient(const LinearTrap& trap, const IonSpecies& ion,
                              const Vec3& position);

struct RfMinimum {
  double radius;  // m
  bool shifted;   // false for k = 2 or no axial deconfinement
};

// Radius of the shifted pseudopotential minimum in a multipole with axial
// confinement: r^(2k-4) = (r0^(2k-2)/z0^2) 16 E_k kappa Vend / ((k-1) q V0^2).
RfMinimum rf_minimum_radius(const LinearTrap& trap, const IonSpecies& ion);

// eta_ad = k (k-1) q V0 r^(k-2) / (m Omega^2 r0^k). For k = 2 this is |q_x|.
double adiabaticity(const LinearTrap& trap, const IonSpecies& ion, double r);

// n_c = 2 m eps0 omega_x^2 / q^2.
double limit_density(const IonSpecies& ion, double omega_x);

// lambda_D = sqrt(kB T eps0 / (q^2 n)).
double debye_length(const IonSpecies& ion, double temperature, double density);

// Gamma = q^2 / (4 pi eps0 a kB T), a = (3 / (4 pi n))^(1/3).
double coupling_parameter(const IonSpecies& ion, double temperature,
                          double density);

// Gamma_c = (q^2 / 4 pi eps0)^(2/3) (2 m omega_x^2)^(1/3) / (kB T).
// Note: this closed form equals 3^(1/3) coupling_parameter(n_c).
double coupling_limit(const IonSpecies& ion, double omega_x,
                      double temperature);

}  // namespace rftrap

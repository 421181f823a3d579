#pragma once

// Mean-field (cold-fluid) equilibrium of a prolate ion cloud in a linear
// 2k-pole trap. The logarithmic density profile psi(rho) = ln(n/n0) in
// reduced radius rho = r / lambda_D obeys
//   quadrupole:  psi'' + psi'/rho = exp(psi) - gamma - 1
//   multipole:   psi'' + psi'/rho = exp(psi) - alpha rho^(2k-4)
// with psi(0) = psi'(0) = 0.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "rftrap/types.hpp"

namespace rftrap::fluid {

enum class ProfileKind { Quadrupole, Multipole };

enum class ProfileStatus {
  Complete,       // edge reached
  StepUnderflow,  // adaptive step fell below the floor; partial profile
  Diverged,       // psi blew up (multipole with alpha too small)
  RadiusLimit,    // rho_limit reached before the edge
};

struct ProfileOptions {
  double edge_threshold = 1e-3;  // exp(psi)/max exp(psi) at the edge
  double rho_start = 1e-6;       // series launch point
  double rtol = 1e-12;
  double step_floor = 1e-12;     // in rho (or arc length)
  double rho_limit = 1e6;
  bool arc_length = false;       // integrate in arc length of (rho, psi)
  double quadrature_rtol = 1e-6; // grid refinement target for the integral
  std::size_t min_points = 8001; // stored grid
  double max_spacing = 5e-3;     // stored grid, in rho
};

struct ReducedProfile {
  ProfileKind kind = ProfileKind::Quadrupole;
  int k = 2;
  double shape = 0.0;  // gamma or alpha

  // Uniform grid on [0, rho_max] (or on the reached range when incomplete).
  std::vector<double> rho;
  std::vector<double> psi;
  std::vector<double> dpsi;

  double rho_max = 0.0;
  double reduced_linear_density = 0.0;    // integral exp(psi) 2 pi rho drho
  double integrated_linear_density = 0.0; // same integral carried by the ODE
  double peak_density = 1.0;              // max exp(psi)
  double peak_rho = 0.0;
  double edge_threshold = 1e-3;
  ProfileStatus status = ProfileStatus::Complete;
  bool edge_bracketed = false;  // density already past its peak when stopped
  std::size_t steps = 0;

  bool complete() const { return status == ProfileStatus::Complete; }
  std::vector<double> density_ratio() const;  // exp(psi), n/n0
};

ReducedProfile integrate_profile_quadrupole(double gamma,
                                            const ProfileOptions& options = {});

ReducedProfile integrate_profile_multipole(double alpha, int k,
                                           const ProfileOptions& options = {});

// Composite Simpson over the stored grid. Throws IncompleteProfile.
double reduced_linear_density(const ReducedProfile& profile);

// Max |discrete Laplacian(psi) - source| over interior grid points.
double poisson_residual(const ReducedProfile& profile);

// kB T eps0 / q^2, ions per metre per unit reduced linear density.
double linear_density_scale(const IonSpecies& ion, double temperature);

struct MatchOptions {
  double log10_lo;
  double log10_hi;
  double rel_tol = 1e-4;
  int max_iterations = 200;
  ProfileOptions profile{};
};

MatchOptions gamma_match_options();  // bracket [-18, 6]
MatchOptions alpha_match_options();  // bracket [-12, 8]

struct MatchResult {
  double shape = 0.0;
  ReducedProfile profile;
  int iterations = 0;
  double target_linear_density = 0.0;    // per metre
  double achieved_linear_density = 0.0;  // per metre
  std::vector<std::string> warnings;
};

// Finds gamma with (kB T eps0 / q^2) reduced_linear_density(gamma) = target
// by bisection in log10(gamma). Throws OutOfBracket or SolverFailure.
MatchResult match_gamma(double target_linear_density, double temperature,
                        const IonSpecies& ion,
                        const MatchOptions& options = gamma_match_options());

MatchResult match_alpha(double target_linear_density, double temperature,
                        const IonSpecies& ion, int k,
                        const MatchOptions& options = alpha_match_options());

struct ScaledCloud {
  ReducedProfile profile;
  double temperature = 0.0;     // K
  double n0 = 0.0;              // central density, m^-3
  double lambda_D = 0.0;        // m
  double radius = 0.0;          // m, lambda_D * rho_max
  double linear_density = 0.0;  // ions per metre
  double coupling = 0.0;        // Gamma at n0
  std::optional<double> omega_x;  // quadrupole scaling frequency, rad/s
  LinearTrap trap;
  IonSpecies ion;
  std::vector<std::string> warnings;
};

// n0 = n_c / (gamma + 1), lambda_D from its definition, R = lambda_D rho_max.
// omega_x defaults to the continued-fraction secular frequency of the trap.
ScaledCloud scale_quadrupole(const ReducedProfile& profile,
                             const LinearTrap& trap, const IonSpecies& ion,
                             double temperature,
                             std::optional<double> omega_x = std::nullopt);

// lambda_D^2 = alpha^(1/(k-1)) (32 kB T E_k r0^(2k-2) /
//                               ((2k-2)^2 q^2 V0^2))^(1/(k-1)).
ScaledCloud scale_multipole(const ReducedProfile& profile,
                            const LinearTrap& trap, const IonSpecies& ion,
                            double temperature);

// Match then scale, dispatching on the trap order.
ScaledCloud solve_cloud(const LinearTrap& trap, const IonSpecies& ion,
                        double temperature, double linear_density,
                        const ProfileOptions& profile = {},
                        std::optional<double> omega_x = std::nullopt);

// Temperature-independent minimum cloud radius.
//   k = 2: sqrt(N/2L) / (sqrt(m) omega_x) sqrt(q^2 / (2 pi eps0))
//   k > 2: r0 (N/2L 8 E_k / (pi eps0 (k-1) V0^2))^(1/(2(k-1)))
double cold_limit_radius(const LinearTrap& trap, const IonSpecies& ion,
                         double linear_density,
                         std::optional<double> omega_x = std::nullopt);

struct AdiabaticRadius {
  double radius;  // m; +inf when the whole trap is adiabatic
  bool global;    // k = 2: the criterion does not depend on r
};

// r_max = r0 (eta_lim 2k E_k / ((k-1) q V0))^(1/(k-2)). For k = 2 the
// criterion is global: +inf when |q_x| < eta_lim, otherwise 0.
AdiabaticRadius adiabatic_radius(const LinearTrap& trap, const IonSpecies& ion,
                                 double eta_lim = 0.3);

// cold_limit_radius / adiabatic_radius; k >= 3.
double fit_ratio(const LinearTrap& trap, const IonSpecies& ion,
                 double linear_density, double eta_lim = 0.3);

// T -> 0 density: eps0 (k-1)^2 V0^2 / (8 E_k r0^2) (r/r0)^(2k-4).
double cold_limit_density(const LinearTrap& trap, const IonSpecies& ion,
                          double r);

// Batch solving. Each request is independent.
struct CloudRequest {
  LinearTrap trap;
  IonSpecies ion;
  double temperature;
  double linear_density;
  std::optional<double> omega_x;
  ProfileOptions profile{};
};

enum class FailureKind { None, Validation, Solver };

struct CloudOutcome {
  std::optional<ScaledCloud> cloud;
  FailureKind failure = FailureKind::None;
  std::string error;
};

// OpenMP over requests; results in request order.
std::vector<CloudOutcome> solve_clouds(const std::vector<CloudRequest>& requests);

// Single-threaded reference for `solve_clouds`.
std::vector<CloudOutcome> solve_clouds_serial(
    const std::vector<CloudRequest>& requests);

}  // namespace rftrap::fluid

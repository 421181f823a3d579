#pragma once

#include <cstddef>
#include <vector>

#include "rftrap/types.hpp"

namespace rftrap::dynamics {

enum class Verdict { Stable, Unstable, Escaped, Unknown };

enum class ScanMethod { ContinuedFraction, Trajectory };

struct StabilityCell {
  double a = 0.0;
  double q = 0.0;
  Verdict verdict = Verdict::Unknown;
  double beta_x = 0.0;  // NaN where not applicable
  double beta_y = 0.0;
  double eta_ad = 0.0;      // adiabaticity at the launch radius
  double max_radius = 0.0;  // trajectory method only, metres
};

/// Rectangle [a_min, a_max] x [q_min, q_max] sampled with endpoints included.
struct ScanGrid {
  double a_min, a_max;
  std::size_t n_a;
  double q_min, q_max;
  std::size_t n_q;

  double a_at(std::size_t i) const;
  double q_at(std::size_t j) const;
};

struct ScanOptions {
  double rf_periods = 1000.0;      // bounded-verdict horizon
  double launch_fraction = 0.1;    // launch radius / r0, at rest
  double rf_phase = 0.0;
  double rtol = 1e-9;
};

struct StabilityMap {
  ScanGrid grid;
  ScanMethod method;
  std::vector<StabilityCell> cells;  // row-major: index = i * n_q + j

  const StabilityCell& at(std::size_t i, std::size_t j) const {
    return cells[i * grid.n_q + j];
  }
  std::size_t count(Verdict v) const;
};

// Trap with the generalised Mathieu parameters (a, q) of the template:
// V0 = q m Omega^2 r0^2 / (2 q_ion), Us = -a m Omega^2 r0^2 / (4 q_ion).
LinearTrap trap_for_aq(const LinearTrap& templ, const IonSpecies& ion,
                       double a, double q);

StabilityCell evaluate_cell(const LinearTrap& templ, const IonSpecies& ion,
                            double a, double q, ScanMethod method,
                            const ScanOptions& options);

// OpenMP over cells. The continued-fraction method requires k = 2.
StabilityMap stability_scan(const LinearTrap& templ, const IonSpecies& ion,
                            const ScanGrid& grid, ScanMethod method,
                            const ScanOptions& options = {});

// Single-threaded reference; produces the same map as `stability_scan`.
StabilityMap stability_scan_serial(const LinearTrap& templ,
                                   const IonSpecies& ion, const ScanGrid& grid,
                                   ScanMethod method,
                                   const ScanOptions& options = {});

}  // namespace rftrap::dynamics

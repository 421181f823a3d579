#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "rftrap/core_model.hpp"
#include "rftrap/types.hpp"

namespace rftrap::dynamics {

struct PhaseState {
  double t = 0.0;
  double x = 0.0, y = 0.0, z = 0.0;
  double vx = 0.0, vy = 0.0, vz = 0.0;

  double radius() const;
};

enum class TrajectoryStatus { Completed, Escaped, StepUnderflow, MaxSteps };

struct IntegratorSettings {
  double rtol = 1e-9;
  double atol_scale = 1e-12;            // position atol = atol_scale * r0
  double samples_per_rf_period = 32.0;  // output sampling
  double rf_phase = 0.0;                // drive is -V0/2 cos(Omega t + phase)
  double min_step_rf_periods = 1e-6;    // step floor
  std::size_t max_steps = 50'000'000;
};

enum class Model { FullRf, Pseudopotential };

struct TrajectoryMeta {
  LinearTrap trap;
  IonSpecies ion;
  IntegratorSettings settings;
  Model model;
};

/// Uniformly sampled phase-space trajectory.
struct Trajectory {
  std::vector<PhaseState> samples;
  double dt_sample = 0.0;
  TrajectoryStatus status = TrajectoryStatus::Completed;
  double t_stop = 0.0;  // escape / failure time, or final time
  double max_radius = 0.0;
  PhaseState final_state;  // state where integration stopped
  std::size_t steps = 0;
  std::optional<TrajectoryMeta> meta;

  bool escaped() const { return status == TrajectoryStatus::Escaped; }
  double duration() const;
};

// Full time-dependent field:
//   x'' =  F_k(t) r0 Re[w^(k-1)],  y'' = -F_k(t) r0 Im[w^(k-1)],  w=(x+iy)/r0,
//   F_k(t) = k q Us / (2 m r0^2) - k q V0 / (2 m r0^2) cos(Omega t + phase),
// plus the axial harmonic term when configured. Escape at r >= r0 truncates
// the trajectory. A negative duration integrates backwards in time.
Trajectory integrate_rf(const LinearTrap& trap, const IonSpecies& ion,
                        const PhaseState& init, double duration,
                        const IntegratorSettings& settings = {});

// Motion in the static effective potential (force = -grad pseudopotential).
Trajectory integrate_secular(const LinearTrap& trap, const IonSpecies& ion,
                             const PhaseState& init, double duration,
                             const IntegratorSettings& settings = {});

// Acceleration of the full RF model at (t, position).
Vec3 rf_acceleration(const LinearTrap& trap, const IonSpecies& ion, double t,
                     const Vec3& position, double rf_phase = 0.0);

// Amplitude vector A of the driven motion R1(t) = A cos(Omega t + phase)
// about a slow position R0: A = -q E0(R0) / (m Omega^2).
// |A| grows as r^(k-1); on the axis it vanishes.
Vec3 micromotion_amplitude(const LinearTrap& trap, const IonSpecies& ion,
                           const Vec3& slow_position);

// Boxcar average over one RF period centred on each sample; samples within
// half a period of either end are dropped.
Trajectory rf_average(const Trajectory& trajectory);

// Kinetic energy of the RF-averaged velocity plus the pseudopotential at the
// RF-averaged position, per averaged sample. Joules.
std::vector<double> secular_energy(const Trajectory& averaged,
                                   const LinearTrap& trap,
                                   const IonSpecies& ion);

}  // namespace rftrap::dynamics

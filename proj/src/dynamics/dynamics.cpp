#include "rftrap/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "rftrap/constants.hpp"
#include "rftrap/ode.hpp"

namespace rftrap::dynamics {

using State = ode::State<6>;

double PhaseState::radius() const { return std::hypot(x, y); }

double Trajectory::duration() const {
  if (samples.size() < 2) return 0.0;
  return samples.back().t - samples.front().t;
}

Vec3 rf_acceleration(const LinearTrap& trap, const IonSpecies& ion, double t,
                     const Vec3& p, double rf_phase) {
  const int k = trap.k();
  const double r0 = trap.r0();
  const double qm = ion.charge() / ion.mass();
  const double drive = k * qm / (2.0 * r0 * r0) *
                       (trap.static_offset() -
                        trap.rf_amplitude() * std::cos(trap.rf_omega() * t + rf_phase));
  const std::complex<double> w(p.x / r0, p.y / r0);
  const std::complex<double> wk1 = std::pow(w, k - 1);
  Vec3 acc{drive * r0 * wk1.real(), -drive * r0 * wk1.imag(), 0.0};
  if (const auto& ax = trap.axial()) {
    const double c = qm * ax->kappa * ax->end_voltage / (ax->z0 * ax->z0);
    acc.x += c * p.x;
    acc.y += c * p.y;
    acc.z -= 2.0 * c * p.z;
  }
  return acc;
}

Vec3 micromotion_amplitude(const LinearTrap& trap, const IonSpecies& ion,
                           const Vec3& slow) {
  const int k = trap.k();
  const double r0 = trap.r0();
  const double w2 = trap.rf_omega() * trap.rf_omega();
  const double c = k * ion.charge() * trap.rf_amplitude() /
                   (2.0 * ion.mass() * w2 * r0);
  const std::complex<double> wk1 =
      std::pow(std::complex<double>(slow.x / r0, slow.y / r0), k - 1);
  return {c * wk1.real(), -c * wk1.imag(), 0.0};
}

namespace {

PhaseState to_phase(double t, const State& y) {
  return {t, y[0], y[1], y[2], y[3], y[4], y[5]};
}

template <class Accel>
Trajectory integrate_model(const LinearTrap& trap, const IonSpecies& ion,
                           const PhaseState& init, double duration,
                           const IntegratorSettings& s, Model model,
                           Accel&& accel) {
  if (!std::isfinite(duration))
    throw std::invalid_argument("integrate: duration must be finite");
  if (!(s.samples_per_rf_period > 0.0))
    throw std::invalid_argument("integrate: samples_per_rf_period must be > 0");
  const double r0 = trap.r0();
  const double period = 2.0 * constants::pi / trap.rf_omega();

  Trajectory traj;
  traj.meta = TrajectoryMeta{trap, ion, s, model};
  traj.dt_sample = period / s.samples_per_rf_period;

  State y0{init.x, init.y, init.z, init.vx, init.vy, init.vz};
  traj.max_radius = std::hypot(init.x, init.y);
  if (traj.max_radius >= r0) {
    traj.status = TrajectoryStatus::Escaped;
    traj.t_stop = init.t;
    traj.samples.push_back(init);
    traj.final_state = init;
    return traj;
  }

  ode::Controls<6> ctl;
  ctl.rtol = s.rtol;
  const double pos_tol = s.atol_scale * r0;
  const double vel_tol = pos_tol * trap.rf_omega();
  ctl.atol = {pos_tol, pos_tol, pos_tol, vel_tol, vel_tol, vel_tol};
  ctl.h_min = s.min_step_rf_periods * period;
  ctl.h_max = period / 4.0;
  ctl.h_init = period / 200.0;
  ctl.max_steps = s.max_steps;

  auto rhs = [&](double t, const State& y) {
    const Vec3 a = accel(t, Vec3{y[0], y[1], y[2]});
    return State{y[3], y[4], y[5], a.x, a.y, a.z};
  };

  const double dir = duration >= 0.0 ? 1.0 : -1.0;
  const double dt = traj.dt_sample;
  std::size_t next = 0;
  auto sample_time = [&](std::size_t i) {
    return init.t + dir * dt * static_cast<double>(i);
  };
  traj.samples.push_back(init);
  next = 1;
  bool escaped = false;

  auto observer = [&](const ode::DenseStep<6>& step) {
    const State y1 = step.y1();
    const double r1 = std::hypot(y1[0], y1[1]);
    double t_end_step = step.t1();
    if (r1 >= r0) {
      t_end_step = ode::locate_root<6>(step, [&](const State& y) {
        return std::hypot(y[0], y[1]) - r0;
      });
      escaped = true;
    }
    while ((sample_time(next) - t_end_step) * dir <= 1e-12 * dt) {
      const double ts = sample_time(next);
      const State ys = step(ts);
      traj.max_radius = std::max(traj.max_radius, std::hypot(ys[0], ys[1]));
      traj.samples.push_back(to_phase(ts, ys));
      ++next;
    }
    if (escaped) {
      traj.t_stop = t_end_step;
      traj.final_state = to_phase(t_end_step, step(t_end_step));
      traj.max_radius = r0;
      return false;
    }
    traj.max_radius = std::max(traj.max_radius, r1);
    return true;
  };

  const auto res =
      ode::integrate<6>(rhs, init.t, y0, init.t + duration, ctl, observer);
  traj.steps = res.accepted;
  if (!escaped) traj.final_state = to_phase(res.t, res.y);
  if (escaped) {
    traj.status = TrajectoryStatus::Escaped;
  } else {
    traj.t_stop = res.t;
    switch (res.reason) {
      case ode::StopReason::Reached:
      case ode::StopReason::Stopped:
        traj.status = TrajectoryStatus::Completed;
        break;
      case ode::StopReason::MaxSteps:
        traj.status = TrajectoryStatus::MaxSteps;
        break;
      case ode::StopReason::StepUnderflow:
      case ode::StopReason::NonFinite:
        traj.status = TrajectoryStatus::StepUnderflow;
        break;
    }
  }
  if (dir < 0.0) std::reverse(traj.samples.begin(), traj.samples.end());
  return traj;
}

}  // namespace

Trajectory integrate_rf(const LinearTrap& trap, const IonSpecies& ion,
                        const PhaseState& init, double duration,
                        const IntegratorSettings& settings) {
  return integrate_model(trap, ion, init, duration, settings, Model::FullRf,
                         [&](double t, const Vec3& p) {
                           return rf_acceleration(trap, ion, t, p,
                                                  settings.rf_phase);
                         });
}

Trajectory integrate_secular(const LinearTrap& trap, const IonSpecies& ion,
                             const PhaseState& init, double duration,
                             const IntegratorSettings& settings) {
  const double inv_m = 1.0 / ion.mass();
  return integrate_model(trap, ion, init, duration, settings,
                         Model::Pseudopotential, [&](double, const Vec3& p) {
                           const Vec3 g = pseudopotential_gradient(trap, ion, p);
                           return Vec3{-g.x * inv_m, -g.y * inv_m, -g.z * inv_m};
                         });
}

Trajectory rf_average(const Trajectory& traj) {
  if (!traj.meta)
    throw std::invalid_argument("rf_average: trajectory has no trap metadata");
  const double per = traj.meta->settings.samples_per_rf_period;
  const auto m = static_cast<std::size_t>(std::llround(per));
  if (m < 2 || std::abs(per - static_cast<double>(m)) > 1e-9 || m % 2 != 0)
    throw std::invalid_argument(
        "rf_average: needs an even integer number of samples per RF period");
  Trajectory out;
  out.meta = traj.meta;
  out.dt_sample = traj.dt_sample;
  out.status = traj.status;
  out.t_stop = traj.t_stop;
  const std::size_t half = m / 2;
  const auto& s = traj.samples;
  if (s.size() <= m) return out;
  out.samples.reserve(s.size() - m);
  for (std::size_t i = half; i + half < s.size(); ++i) {
    PhaseState avg{};
    avg.t = s[i].t;
    for (std::size_t j = i - half; j <= i + half; ++j) {
      const double w = (j == i - half || j == i + half) ? 0.5 : 1.0;
      avg.x += w * s[j].x;
      avg.y += w * s[j].y;
      avg.z += w * s[j].z;
      avg.vx += w * s[j].vx;
      avg.vy += w * s[j].vy;
      avg.vz += w * s[j].vz;
    }
    const double inv = 1.0 / static_cast<double>(m);
    avg.x *= inv;
    avg.y *= inv;
    avg.z *= inv;
    avg.vx *= inv;
    avg.vy *= inv;
    avg.vz *= inv;
    out.samples.push_back(avg);
  }
  return out;
}

std::vector<double> secular_energy(const Trajectory& averaged,
                                   const LinearTrap& trap,
                                   const IonSpecies& ion) {
  std::vector<double> e;
  e.reserve(averaged.samples.size());
  for (const auto& p : averaged.samples) {
    const double kin =
        0.5 * ion.mass() * (p.vx * p.vx + p.vy * p.vy + p.vz * p.vz);
    e.push_back(kin + pseudopotential(trap, ion, p.radius(),
                                      std::atan2(p.y, p.x), p.z));
  }
  return e;
}

}  // namespace rftrap::dynamics

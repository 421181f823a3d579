#include "rftrap/stability.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "rftrap/constants.hpp"
#include "rftrap/core_model.hpp"
#include "rftrap/dynamics.hpp"
#include "rftrap/error.hpp"
#include "rftrap/mathieu.hpp"
#include "rftrap/ode.hpp"

namespace rftrap::dynamics {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double linspace_at(double lo, double hi, std::size_t n, std::size_t i) {
  if (n <= 1) return lo;
  if (i + 1 == n) return hi;
  return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
}

StabilityCell continued_fraction_cell(double a, double q) {
  StabilityCell c;
  c.a = a;
  c.q = q;
  c.eta_ad = std::abs(q);
  const BetaResult bx = solve_beta(a, q);
  const BetaResult by = solve_beta(-a, -q);
  c.beta_x = bx.stable() ? bx.beta : kNaN;
  c.beta_y = by.stable() ? by.beta : kNaN;
  if (bx.status == BetaStatus::Unstable || by.status == BetaStatus::Unstable)
    c.verdict = Verdict::Unstable;
  else if (bx.stable() && by.stable())
    c.verdict = Verdict::Stable;
  else
    c.verdict = Verdict::Unknown;
  return c;
}

// Bounded-motion test: launch at rest at launch_fraction * r0 on the
// diagonal (so both transverse axes are excited) and integrate the full RF
// equations for the horizon without storing samples.
StabilityCell trajectory_cell(const LinearTrap& templ, const IonSpecies& ion,
                              double a, double q, const ScanOptions& o) {
  StabilityCell c;
  c.a = a;
  c.q = q;
  c.beta_x = kNaN;
  c.beta_y = kNaN;
  const LinearTrap trap = trap_for_aq(templ, ion, a, q);
  const double r0 = trap.r0();
  const double launch = o.launch_fraction * r0;
  c.eta_ad = adiabaticity(trap, ion, launch);

  const double period = 2.0 * constants::pi / trap.rf_omega();
  ode::Controls<6> ctl;
  ctl.rtol = o.rtol;
  const double pos_tol = 1e-12 * r0;
  const double vel_tol = pos_tol * trap.rf_omega();
  ctl.atol = {pos_tol, pos_tol, pos_tol, vel_tol, vel_tol, vel_tol};
  ctl.h_min = 1e-6 * period;
  ctl.h_max = period / 4.0;
  ctl.h_init = period / 200.0;

  auto rhs = [&](double t, const ode::State<6>& y) {
    const Vec3 acc = rf_acceleration(trap, ion, t, Vec3{y[0], y[1], y[2]},
                                     o.rf_phase);
    return ode::State<6>{y[3], y[4], y[5], acc.x, acc.y, acc.z};
  };
  const double d = launch / std::sqrt(2.0);
  double rmax = launch;
  bool escaped = false;
  auto observer = [&](const ode::DenseStep<6>& step) {
    const auto y = step.y1();
    const double r = std::hypot(y[0], y[1]);
    rmax = std::max(rmax, r);
    if (r >= r0) {
      escaped = true;
      return false;
    }
    return true;
  };
  const auto res = ode::integrate<6>(rhs, 0.0, ode::State<6>{d, d, 0, 0, 0, 0},
                                     o.rf_periods * period, ctl, observer);
  c.max_radius = std::min(rmax, r0);
  if (escaped)
    c.verdict = Verdict::Escaped;
  else if (res.reason == ode::StopReason::Reached)
    c.verdict = Verdict::Stable;
  else
    c.verdict = Verdict::Unknown;
  return c;
}

void check_method(const LinearTrap& templ, ScanMethod method) {
  if (method == ScanMethod::ContinuedFraction && !templ.is_quadrupole())
    throw QuadrupoleOnly("stability_scan (continued fraction)");
}

}  // namespace

double ScanGrid::a_at(std::size_t i) const {
  return linspace_at(a_min, a_max, n_a, i);
}

double ScanGrid::q_at(std::size_t j) const {
  return linspace_at(q_min, q_max, n_q, j);
}

std::size_t StabilityMap::count(Verdict v) const {
  std::size_t n = 0;
  for (const auto& c : cells) n += c.verdict == v ? 1 : 0;
  return n;
}

LinearTrap trap_for_aq(const LinearTrap& templ, const IonSpecies& ion,
                       double a, double q) {
  const double scale = ion.mass() * templ.rf_omega() * templ.rf_omega() *
                       templ.r0() * templ.r0();
  const double v0 = std::abs(q) * scale / (2.0 * std::abs(ion.charge()));
  const double us = -a * scale / (4.0 * ion.charge());
  return templ.with_rf(v0, templ.rf_omega()).with_static_offset(us);
}

StabilityCell evaluate_cell(const LinearTrap& templ, const IonSpecies& ion,
                            double a, double q, ScanMethod method,
                            const ScanOptions& options) {
  if (method == ScanMethod::ContinuedFraction) return continued_fraction_cell(a, q);
  return trajectory_cell(templ, ion, a, q, options);
}

StabilityMap stability_scan(const LinearTrap& templ, const IonSpecies& ion,
                            const ScanGrid& grid, ScanMethod method,
                            const ScanOptions& options) {
  check_method(templ, method);
  StabilityMap map{grid, method, std::vector<StabilityCell>(grid.n_a * grid.n_q)};
  const auto n = static_cast<long long>(map.cells.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (long long idx = 0; idx < n; ++idx) {
    const auto i = static_cast<std::size_t>(idx) / grid.n_q;
    const auto j = static_cast<std::size_t>(idx) % grid.n_q;
    map.cells[static_cast<std::size_t>(idx)] =
        evaluate_cell(templ, ion, grid.a_at(i), grid.q_at(j), method, options);
  }
  return map;
}

StabilityMap stability_scan_serial(const LinearTrap& templ,
                                   const IonSpecies& ion, const ScanGrid& grid,
                                   ScanMethod method,
                                   const ScanOptions& options) {
  check_method(templ, method);
  StabilityMap map{grid, method, {}};
  map.cells.reserve(grid.n_a * grid.n_q);
  for (std::size_t i = 0; i < grid.n_a; ++i)
    for (std::size_t j = 0; j < grid.n_q; ++j)
      map.cells.push_back(
          evaluate_cell(templ, ion, grid.a_at(i), grid.q_at(j), method, options));
  return map;
}

}  // namespace rftrap::dynamics

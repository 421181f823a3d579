#include "rftrap/mathieu.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "rftrap/error.hpp"

namespace rftrap {
namespace {

// q^2 / ((beta + 2s)^2 - a - q^2 / ((beta + 4s)^2 - a - ...)), evaluated
// from the innermost term outwards.
double continued_fraction(double a, double q, double beta, double sign,
                          int depth) {
  const double q2 = q * q;
  double tail = 0.0;
  for (int j = depth; j >= 1; --j) {
    const double shift = beta + sign * 2.0 * j;
    tail = q2 / (shift * shift - a - tail);
  }
  return tail;
}

}  // namespace

BetaResult solve_beta(double a, double q, const BetaOptions& options) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const double seed2 = a + 0.5 * q * q;
  if (seed2 < 0.0) return {nan, BetaStatus::Unstable, 0};

  double beta = std::sqrt(seed2);
  for (int it = 1; it <= options.max_iterations; ++it) {
    const double b2 = a + continued_fraction(a, q, beta, +1.0, options.depth) +
                      continued_fraction(a, q, beta, -1.0, options.depth);
    if (!(b2 >= 0.0)) return {nan, BetaStatus::Unstable, it};
    const double next = std::sqrt(b2);
    if (std::abs(next - beta) < options.tolerance) {
      const bool in_range = next >= 0.0 && next <= 1.0;
      return {next, in_range ? BetaStatus::Stable : BetaStatus::Unstable, it};
    }
    beta = next;
  }
  return {beta, BetaStatus::NotConverged, options.max_iterations};
}

double beta_from_aq(double a, double q, const BetaOptions& options) {
  const BetaResult r = solve_beta(a, q, options);
  if (r.stable()) return r.beta;
  std::ostringstream msg;
  msg << "unstable point (a=" << a + 0.0 << ", q=" << q + 0.0 << "): ";
  if (r.status == BetaStatus::NotConverged)
    msg << "continued fraction did not converge in " << r.iterations
        << " iterations";
  else
    msg << "no characteristic exponent in [0, 1]";
  throw UnstablePoint(msg.str());
}

}  // namespace rftrap

#pragma once

namespace rftrap {

enum class BetaStatus {
  Stable,        // converged with 0 <= beta <= 1
  Unstable,      // beta^2 < 0 or converged outside [0, 1]
  NotConverged,  // iteration cap reached
};

struct BetaOptions {
  int depth = 20;            // continued-fraction terms on each side
  int max_iterations = 200;
  double tolerance = 1e-10;  // |beta_{n+1} - beta_n|
};

struct BetaResult {
  double beta;  // last iterate (NaN when beta^2 went negative)
  BetaStatus status;
  int iterations;

  bool stable() const { return status == BetaStatus::Stable; }
};

// Characteristic exponent of the Mathieu equation u'' + (a - 2q cos 2x) u = 0
// in the lowest stability region, by fixed-point iteration of
//   beta^2 = a + CF+(beta) + CF-(beta),
//   CF+-(beta) = q^2 / ((beta +- 2)^2 - a - q^2 / ((beta +- 4)^2 - a - ...)),
// seeded at sqrt(a + q^2/2). Never throws.
BetaResult solve_beta(double a, double q, const BetaOptions& options = {});

// Throwing form: returns beta in [0, 1] or raises UnstablePoint.
double beta_from_aq(double a, double q, const BetaOptions& options = {});

}  // namespace rftrap

#pragma once

// Reference computations used only by the tests. They deliberately take a
// different route from the library: fixed-step RK4 over one drive period
// for the Mathieu exponent, Brent minimisation for potential minima.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <utility>

#include <boost/math/tools/minima.hpp>

namespace oracle {

// Characteristic exponent of u'' + (a - 2q cos 2xi) u = 0 from the trace of
// the monodromy matrix over xi in [0, pi]: cos(pi beta) = trace / 2.
// Valid in the lowest stability region.
inline double mathieu_beta(double a, double q, int steps = 20000) {
  using V = std::array<double, 4>;  // (u1, u1', u2, u2')
  auto f = [&](double xi, const V& s) {
    const double w = a - 2.0 * q * std::cos(2.0 * xi);
    return V{s[1], -w * s[0], s[3], -w * s[2]};
  };
  V s{1.0, 0.0, 0.0, 1.0};
  const double h = std::numbers::pi / steps;
  double xi = 0.0;
  for (int i = 0; i < steps; ++i) {
    const V k1 = f(xi, s);
    V t;
    for (int j = 0; j < 4; ++j) t[j] = s[j] + 0.5 * h * k1[j];
    const V k2 = f(xi + 0.5 * h, t);
    for (int j = 0; j < 4; ++j) t[j] = s[j] + 0.5 * h * k2[j];
    const V k3 = f(xi + 0.5 * h, t);
    for (int j = 0; j < 4; ++j) t[j] = s[j] + h * k3[j];
    const V k4 = f(xi + h, t);
    for (int j = 0; j < 4; ++j)
      s[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
    xi += h;
  }
  const double half_trace = 0.5 * (s[0] + s[3]);
  return std::acos(std::clamp(half_trace, -1.0, 1.0)) / std::numbers::pi;
}

// Minimum of a unimodal function on [lo, hi].
inline std::pair<double, double> minimise(const std::function<double(double)>& f,
                                          double lo, double hi) {
  return boost::math::tools::brent_find_minima(f, lo, hi, 52);
}

// Small-psi solution of the reduced quadrupole equation:
// psi'' + psi'/rho = psi - gamma  =>  psi = gamma (1 - I0(rho)).
inline double linearised_quadrupole_psi(double gamma, double rho) {
  return gamma * (1.0 - std::cyl_bessel_i(0.0, rho));
}

// Composite trapezoid on arbitrary abscissae.
template <class Xs, class Ys>
double trapezoid(const Xs& x, const Ys& y) {
  double acc = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i)
    acc += 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]);
  return acc;
}

}  // namespace oracle

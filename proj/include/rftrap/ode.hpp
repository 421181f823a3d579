#pragma once

// Adaptive Dormand-Prince 5(4) integrator with the 4th-order continuous
// extension of Hairer & Wanner (DOPRI5 "contd5"). Header-only; the state is
// a fixed-size std::array so the right-hand sides stay allocation free.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>

namespace rftrap::ode {

template <std::size_t N>
using State = std::array<double, N>;

template <std::size_t N>
struct Controls {
  double rtol = 1e-9;
  State<N> atol{};           // per-component absolute tolerance
  double h_init = 0.0;       // 0 selects a starting step automatically
  double h_min = 0.0;        // |h| below this after a rejection: underflow
  double h_max = std::numeric_limits<double>::infinity();
  std::size_t max_steps = 50'000'000;
};

enum class StopReason {
  Reached,        // t_end reached
  Stopped,        // observer asked to stop
  StepUnderflow,  // step floor hit
  MaxSteps,
  NonFinite,
};

/// Interpolant over one accepted step [t0, t0 + h].
template <std::size_t N>
struct DenseStep {
  double t0 = 0.0;
  double h = 0.0;
  std::array<State<N>, 5> c{};

  double t1() const { return t0 + h; }
  const State<N>& y0() const { return c[0]; }
  State<N> y1() const {
    State<N> y;
    for (std::size_t i = 0; i < N; ++i) y[i] = c[0][i] + c[1][i];
    return y;
  }

  State<N> operator()(double t) const {
    const double th = (t - t0) / h;
    const double th1 = 1.0 - th;
    State<N> y;
    for (std::size_t i = 0; i < N; ++i)
      y[i] = c[0][i] +
             th * (c[1][i] + th1 * (c[2][i] + th * (c[3][i] + th1 * c[4][i])));
    return y;
  }

  double component(double t, std::size_t i) const {
    const double th = (t - t0) / h;
    const double th1 = 1.0 - th;
    return c[0][i] +
           th * (c[1][i] + th1 * (c[2][i] + th * (c[3][i] + th1 * c[4][i])));
  }
};

template <std::size_t N>
struct Result {
  StopReason reason;
  double t;
  State<N> y;
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  double last_h = 0.0;
};

namespace detail {

template <std::size_t N>
double error_norm(const State<N>& err, const State<N>& y0, const State<N>& y1,
                  double rtol, const State<N>& atol) {
  double sum = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    const double sc = atol[i] + rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    const double e = err[i] / sc;
    sum += e * e;
  }
  return std::sqrt(sum / static_cast<double>(N));
}

template <std::size_t N, class Rhs>
double initial_step(Rhs& f, double t0, const State<N>& y0, const State<N>& f0,
                    double dir, double rtol, const State<N>& atol) {
  double d0 = 0.0, d1 = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    const double sc = atol[i] + rtol * std::abs(y0[i]);
    d0 += (y0[i] / sc) * (y0[i] / sc);
    d1 += (f0[i] / sc) * (f0[i] / sc);
  }
  d0 = std::sqrt(d0 / N);
  d1 = std::sqrt(d1 / N);
  double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
  State<N> y1;
  for (std::size_t i = 0; i < N; ++i) y1[i] = y0[i] + dir * h0 * f0[i];
  const State<N> f1 = f(t0 + dir * h0, y1);
  double d2 = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    const double sc = atol[i] + rtol * std::abs(y0[i]);
    const double e = (f1[i] - f0[i]) / sc;
    d2 += e * e;
  }
  d2 = std::sqrt(d2 / N) / h0;
  const double dm = std::max(d1, d2);
  const double h1 = dm <= 1e-15 ? std::max(1e-6, h0 * 1e-3)
                                : std::pow(0.01 / dm, 1.0 / 5.0);
  return std::min(100.0 * h0, h1);
}

}  // namespace detail

/// Integrates y' = f(t, y) from t0 to t_end (either direction). After every
/// accepted step `observer(const DenseStep<N>&)` is called; returning false
/// stops the integration with StopReason::Stopped.
template <std::size_t N, class Rhs, class Observer>
Result<N> integrate(Rhs&& f, double t0, State<N> y0, double t_end,
                    const Controls<N>& ctl, Observer&& observer) {
  // Dormand-Prince coefficients.
  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                   a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                   a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                   a65 = -5103.0 / 18656;
  constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                   a75 = -2187.0 / 6784, a76 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                   e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
  constexpr double d1 = -12715105075.0 / 11282082432,
                   d3 = 87487479700.0 / 32700410799,
                   d4 = -10690763975.0 / 1880347072,
                   d5 = 701980252875.0 / 199316789632,
                   d6 = -1453857185.0 / 822651844,
                   d7 = 69997945.0 / 29380423;

  Result<N> res{StopReason::Reached, t0, y0};
  const double span = t_end - t0;
  if (span == 0.0) return res;
  const double dir = span > 0 ? 1.0 : -1.0;

  State<N> k1 = f(t0, y0);
  double h = ctl.h_init > 0.0
                 ? ctl.h_init
                 : detail::initial_step<N>(f, t0, y0, k1, dir, ctl.rtol, ctl.atol);
  h = std::min(h, ctl.h_max);

  double t = t0;
  State<N> y = y0;
  State<N> k2, k3, k4, k5, k6, k7, ytmp, ynew, err;
  bool last_rejected = false;
  DenseStep<N> dense;

  while (true) {
    if (res.accepted + res.rejected >= ctl.max_steps) {
      res.reason = StopReason::MaxSteps;
      break;
    }
    const double remaining = (t_end - t) * dir;
    if (remaining <= 0.0) break;
    bool final_step = false;
    if (h >= remaining) {
      h = remaining;
      final_step = true;
    }
    const double hs = dir * h;

    for (std::size_t i = 0; i < N; ++i) ytmp[i] = y[i] + hs * a21 * k1[i];
    k2 = f(t + c2 * hs, ytmp);
    for (std::size_t i = 0; i < N; ++i)
      ytmp[i] = y[i] + hs * (a31 * k1[i] + a32 * k2[i]);
    k3 = f(t + c3 * hs, ytmp);
    for (std::size_t i = 0; i < N; ++i)
      ytmp[i] = y[i] + hs * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    k4 = f(t + c4 * hs, ytmp);
    for (std::size_t i = 0; i < N; ++i)
      ytmp[i] = y[i] + hs * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] +
                             a54 * k4[i]);
    k5 = f(t + c5 * hs, ytmp);
    for (std::size_t i = 0; i < N; ++i)
      ytmp[i] = y[i] + hs * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] +
                             a64 * k4[i] + a65 * k5[i]);
    k6 = f(t + hs, ytmp);
    for (std::size_t i = 0; i < N; ++i)
      ynew[i] = y[i] + hs * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] +
                             a75 * k5[i] + a76 * k6[i]);
    k7 = f(t + hs, ynew);
    for (std::size_t i = 0; i < N; ++i)
      err[i] = hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                     e6 * k6[i] + e7 * k7[i]);

    double en = detail::error_norm<N>(err, y, ynew, ctl.rtol, ctl.atol);
    if (!std::isfinite(en)) en = 1e10;

    if (en <= 1.0) {
      for (std::size_t i = 0; i < N; ++i) {
        if (!std::isfinite(ynew[i])) {
          res.reason = StopReason::NonFinite;
          res.t = t;
          res.y = y;
          return res;
        }
      }
      dense.t0 = t;
      dense.h = hs;
      for (std::size_t i = 0; i < N; ++i) {
        const double dy = ynew[i] - y[i];
        const double bspl = hs * k1[i] - dy;
        dense.c[0][i] = y[i];
        dense.c[1][i] = dy;
        dense.c[2][i] = bspl;
        dense.c[3][i] = dy - hs * k7[i] - bspl;
        dense.c[4][i] = hs * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] +
                              d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
      }
      t = final_step ? t_end : t + hs;
      y = ynew;
      k1 = k7;
      ++res.accepted;
      res.t = t;
      res.y = y;
      res.last_h = h;
      if (!observer(static_cast<const DenseStep<N>&>(dense))) {
        res.reason = StopReason::Stopped;
        return res;
      }
      if (final_step) {
        res.reason = StopReason::Reached;
        return res;
      }
      double fac = 0.9 * std::pow(std::max(en, 1e-10), -0.2);
      fac = std::clamp(fac, 0.2, last_rejected ? 1.0 : 5.0);
      h = std::min(h * fac, ctl.h_max);
      last_rejected = false;
    } else {
      ++res.rejected;
      const double fac = std::max(0.2, 0.9 * std::pow(en, -0.2));
      h *= fac;
      last_rejected = true;
      if (h < ctl.h_min) {
        res.reason = StopReason::StepUnderflow;
        res.t = t;
        res.y = y;
        res.last_h = h;
        return res;
      }
    }
  }
  res.t = t;
  res.y = y;
  return res;
}

/// Locates t in [step.t0, step.t1()] where g(step(t)) changes sign, by
/// bisection on the dense interpolant. g(y(t0)) and g(y(t1)) must differ in
/// sign.
template <std::size_t N, class G>
double locate_root(const DenseStep<N>& step, G&& g, int iterations = 80) {
  double lo = step.t0;
  double hi = step.t1();
  double glo = g(step(lo));
  for (int i = 0; i < iterations; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double gm = g(step(mid));
    if ((gm > 0.0) == (glo > 0.0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace rftrap::ode

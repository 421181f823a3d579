#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "rftrap/constants.hpp"
#include "rftrap/error.hpp"
#include "rftrap/fluid.hpp"
#include "rftrap/ode.hpp"

namespace rftrap::fluid {
namespace {

constexpr double kTwoPi = 2.0 * constants::pi;
constexpr std::size_t kMaxGridPoints = (std::size_t{1} << 22) + 1;

// Right-hand side of the reduced Poisson-Boltzmann equation, without the
// 1/rho drift term.
struct Source {
  ProfileKind kind;
  int k;
  double shape;

  double operator()(double rho, double psi) const {
    if (kind == ProfileKind::Quadrupole) return std::expm1(psi) - shape;
    return std::exp(psi) - shape * std::pow(rho, 2 * k - 4);
  }

  // psi = c2 rho^2 + c4 rho^4 + ... near the axis.
  double c2() const { return kind == ProfileKind::Quadrupole ? -shape / 4.0 : 0.25; }
  double c4() const {
    if (kind == ProfileKind::Quadrupole) return -shape / 64.0;
    return k == 3 ? (0.25 - shape) / 16.0 : 1.0 / 64.0;
  }
  double series_psi(double rho) const {
    const double r2 = rho * rho;
    return r2 * (c2() + c4() * r2);
  }
  double series_dpsi(double rho) const {
    return rho * (2.0 * c2() + 4.0 * c4() * rho * rho);
  }
  // Integral of exp(psi) 2 pi rho from 0 to rho, to O(rho^6).
  double series_integral(double rho) const {
    const double r2 = rho * rho;
    return constants::pi * r2 * (1.0 + c2() * r2 / 2.0);
  }
  double divergence_limit() const {
    return kind == ProfileKind::Quadrupole ? 1.0 : 700.0;
  }
};

// Layout of the ODE state. In radius mode the independent variable is rho
// and y = (psi, psi', I). In arc-length mode it is the arc length of the
// curve (rho, psi) and y = (rho, psi, psi', I).
template <std::size_t N>
struct Layout;

template <>
struct Layout<3> {
  static constexpr std::size_t psi = 0, dpsi = 1, integral = 2;
  static double rho(double t, const ode::State<3>&) { return t; }
};

template <>
struct Layout<4> {
  static constexpr std::size_t psi = 1, dpsi = 2, integral = 3;
  static double rho(double, const ode::State<4>& y) { return y[0]; }
};

struct Solution {
  ProfileStatus status = ProfileStatus::Complete;
  double rho_end = 0.0;       // edge, or the last reached radius
  double integral_end = 0.0;  // ODE-carried integral at rho_end
  double peak_psi = 0.0;
  double peak_rho = 0.0;
  bool past_peak = false;
  std::size_t steps = 0;
};

// Resamples the stored dense steps onto an increasing sequence of radii.
template <std::size_t N>
class Sampler {
 public:
  Sampler(const Source& src, double rho_start,
          const std::vector<ode::DenseStep<N>>& steps)
      : src_(src), rho_start_(rho_start), steps_(steps) {}

  // Radii must be visited in non-decreasing order between resets.
  void reset() { idx_ = 0; }

  void eval(double rho, double& psi, double& dpsi) {
    using L = Layout<N>;
    if (rho <= rho_start_ || steps_.empty()) {
      psi = src_.series_psi(rho);
      dpsi = src_.series_dpsi(rho);
      return;
    }
    while (idx_ + 1 < steps_.size() && end_rho(steps_[idx_]) < rho) ++idx_;
    const auto& st = steps_[idx_];
    const double t = param_at(st, rho);
    const auto y = st(t);
    psi = y[L::psi];
    dpsi = y[L::dpsi];
  }

 private:
  static double end_rho(const ode::DenseStep<N>& st) {
    return Layout<N>::rho(st.t1(), st.y1());
  }

  static double param_at(const ode::DenseStep<N>& st, double rho) {
    if constexpr (N == 3) {
      return rho;
    } else {
      // rho(s) is monotone within a step; invert it by bisection.
      double lo = st.t0, hi = st.t1();
      for (int i = 0; i < 100 && hi - lo > 1e-15 * std::abs(hi); ++i) {
        const double mid = 0.5 * (lo + hi);
        if (st.component(mid, 0) < rho)
          lo = mid;
        else
          hi = mid;
      }
      return 0.5 * (lo + hi);
    }
  }

  const Source& src_;
  double rho_start_;
  const std::vector<ode::DenseStep<N>>& steps_;
  std::size_t idx_ = 0;
};

template <std::size_t N>
Solution solve(const Source& src, const ProfileOptions& o,
               std::vector<ode::DenseStep<N>>& steps) {
  using L = Layout<N>;
  const double rs = o.rho_start;
  const double log_thr = std::log(o.edge_threshold);

  ode::State<N> y0{};
  if constexpr (N == 4) y0[0] = rs;
  y0[L::psi] = src.series_psi(rs);
  y0[L::dpsi] = src.series_dpsi(rs);
  y0[L::integral] = src.series_integral(rs);

  ode::Controls<N> ctl;
  ctl.rtol = o.rtol;
  // Quadrupole plateaus carry psi ~ gamma rho^2 with gamma as small as
  // 1e-100, so psi is controlled purely relatively. The multipole psi
  // crosses zero after its peak and needs an absolute floor.
  const double psi_atol =
      src.kind == ProfileKind::Quadrupole ? 1e-300 : 1e-3 * o.rtol;
  ctl.atol.fill(1e-300);
  ctl.atol[L::psi] = psi_atol;
  ctl.atol[L::dpsi] = psi_atol;
  ctl.h_min = o.step_floor;
  ctl.h_init = std::max(10.0 * rs, 1e-4);

  auto rhs = [&](double t, const ode::State<N>& y) {
    const double rho = L::rho(t, y);
    const double psi = y[L::psi];
    const double p = y[L::dpsi];
    const double lap = src(rho, psi) - p / rho;
    const double dens = kTwoPi * rho * std::exp(psi);
    ode::State<N> d{};
    if constexpr (N == 3) {
      d = {p, lap, dens};
    } else {
      const double w = 1.0 / std::sqrt(1.0 + p * p);
      d = {w, p * w, lap * w, dens * w};
    }
    return d;
  };

  Solution sol;
  auto psi_of = [](const ode::State<N>& y) { return y[L::psi]; };
  auto observer = [&](const ode::DenseStep<N>& st) {
    steps.push_back(st);
    const auto y0s = st.y0();
    const auto y1s = st.y1();
    const double r1 = L::rho(st.t1(), y1s);
    // Track the density peak, including maxima inside the step.
    if (y0s[L::dpsi] > 0.0 && y1s[L::dpsi] <= 0.0) {
      const double tp = ode::locate_root<N>(
          st, [](const ode::State<N>& y) { return y[L::dpsi]; });
      const auto yp = st(tp);
      if (yp[L::psi] > sol.peak_psi) {
        sol.peak_psi = yp[L::psi];
        sol.peak_rho = L::rho(tp, yp);
      }
    }
    if (y1s[L::psi] > sol.peak_psi) {
      sol.peak_psi = y1s[L::psi];
      sol.peak_rho = r1;
    }
    if (y1s[L::dpsi] < 0.0) sol.past_peak = true;
    if (!(y1s[L::psi] < src.divergence_limit())) {
      sol.status = ProfileStatus::Diverged;
      sol.rho_end = r1;
      sol.integral_end = y1s[L::integral];
      return false;
    }
    const double level = sol.peak_psi + log_thr;
    if (psi_of(y1s) <= level) {
      const double te = ode::locate_root<N>(
          st, [&](const ode::State<N>& y) { return y[L::psi] - level; });
      const auto ye = st(te);
      sol.status = ProfileStatus::Complete;
      sol.rho_end = L::rho(te, ye);
      sol.integral_end = ye[L::integral];
      return false;
    }
    if (r1 >= o.rho_limit) {
      sol.status = ProfileStatus::RadiusLimit;
      sol.rho_end = r1;
      sol.integral_end = y1s[L::integral];
      return false;
    }
    return true;
  };

  const double t_end = N == 3 ? o.rho_limit : 1e3 * o.rho_limit;
  const auto res = ode::integrate<N>(rhs, rs, y0, t_end, ctl, observer);
  sol.steps = res.accepted;
  switch (res.reason) {
    case ode::StopReason::Stopped:
      break;
    case ode::StopReason::Reached:
      sol.status = ProfileStatus::RadiusLimit;
      sol.rho_end = L::rho(res.t, res.y);
      sol.integral_end = res.y[L::integral];
      break;
    case ode::StopReason::NonFinite:
      sol.status = ProfileStatus::Diverged;
      sol.rho_end = L::rho(res.t, res.y);
      sol.integral_end = res.y[L::integral];
      break;
    case ode::StopReason::StepUnderflow:
    case ode::StopReason::MaxSteps:
      sol.status = ProfileStatus::StepUnderflow;
      sol.rho_end = L::rho(res.t, res.y);
      sol.integral_end = res.y[L::integral];
      break;
  }
  if (steps.empty()) sol.rho_end = std::max(sol.rho_end, rs);
  return sol;
}

double simpson(const std::vector<double>& rho, const std::vector<double>& psi) {
  const std::size_t n = rho.size();
  if (n < 3) return 0.0;
  const double h = rho[1] - rho[0];
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double f = kTwoPi * rho[i] * std::exp(psi[i]);
    const double w = (i == 0 || i + 1 == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    acc += w * f;
  }
  return acc * h / 3.0;
}

template <std::size_t N>
void fill_grid(Sampler<N>& sampler, double rho_end, std::size_t n,
               ReducedProfile& p) {
  p.rho.resize(n);
  p.psi.resize(n);
  p.dpsi.resize(n);
  sampler.reset();
  for (std::size_t i = 0; i < n; ++i) {
    const double r = i + 1 == n ? rho_end
                                : rho_end * static_cast<double>(i) /
                                      static_cast<double>(n - 1);
    p.rho[i] = r;
    sampler.eval(r, p.psi[i], p.dpsi[i]);
  }
  p.psi[0] = 0.0;
  p.dpsi[0] = 0.0;
}

template <std::size_t N>
ReducedProfile build(const Source& src, const ProfileOptions& o) {
  if (!(o.edge_threshold > 0.0 && o.edge_threshold < 1.0))
    throw std::invalid_argument("edge_threshold must lie in (0, 1)");
  if (!(o.rho_start > 0.0) || !(o.rtol > 0.0) || !(o.step_floor > 0.0))
    throw std::invalid_argument("profile options must be positive");

  std::vector<ode::DenseStep<N>> steps;
  const Solution sol = solve<N>(src, o, steps);

  ReducedProfile p;
  p.kind = src.kind;
  p.k = src.k;
  p.shape = src.shape;
  p.edge_threshold = o.edge_threshold;
  p.status = sol.status;
  p.rho_max = sol.rho_end;
  p.integrated_linear_density = sol.integral_end;
  p.peak_density = std::exp(sol.peak_psi);
  p.peak_rho = sol.peak_rho;
  p.steps = sol.steps;
  p.edge_bracketed = sol.status == ProfileStatus::Complete || sol.past_peak;

  // Uniform grid, doubled until Simpson's rule settles.
  Sampler<N> sampler(src, o.rho_start, steps);
  std::size_t n = std::max<std::size_t>(
      o.min_points,
      static_cast<std::size_t>(std::ceil(sol.rho_end / o.max_spacing)) + 1);
  if (n % 2 == 0) ++n;
  fill_grid(sampler, sol.rho_end, n, p);
  double prev = simpson(p.rho, p.psi);
  // A diverged profile has no meaningful integral to refine.
  while (sol.status != ProfileStatus::Diverged && 2 * n - 1 <= kMaxGridPoints) {
    n = 2 * n - 1;
    fill_grid(sampler, sol.rho_end, n, p);
    const double cur = simpson(p.rho, p.psi);
    const bool done = std::abs(cur - prev) <= o.quadrature_rtol * std::abs(cur);
    prev = cur;
    if (done) break;
  }
  p.reduced_linear_density = prev;
  return p;
}

ReducedProfile dispatch(const Source& src, const ProfileOptions& o) {
  return o.arc_length ? build<4>(src, o) : build<3>(src, o);
}

}  // namespace

std::vector<double> ReducedProfile::density_ratio() const {
  std::vector<double> out(psi.size());
  std::transform(psi.begin(), psi.end(), out.begin(),
                 [](double v) { return std::exp(v); });
  return out;
}

ReducedProfile integrate_profile_quadrupole(double gamma,
                                            const ProfileOptions& options) {
  if (!(gamma > 0.0) || !std::isfinite(gamma))
    throw std::invalid_argument("gamma must be positive and finite");
  return dispatch(Source{ProfileKind::Quadrupole, 2, gamma}, options);
}

ReducedProfile integrate_profile_multipole(double alpha, int k,
                                           const ProfileOptions& options) {
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw std::invalid_argument("alpha must be positive and finite");
  if (k < 3) throw std::invalid_argument("multipole profile needs k >= 3");
  return dispatch(Source{ProfileKind::Multipole, k, alpha}, options);
}

double reduced_linear_density(const ReducedProfile& profile) {
  if (!profile.complete()) {
    std::ostringstream msg;
    msg << "incomplete profile: edge not reached (stopped at rho = "
        << profile.rho_max << ")";
    throw IncompleteProfile(msg.str());
  }
  return simpson(profile.rho, profile.psi);
}

double poisson_residual(const ReducedProfile& profile) {
  const Source src{profile.kind, profile.k, profile.shape};
  const auto& r = profile.rho;
  const auto& y = profile.psi;
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < r.size(); ++i) {
    const double h = r[i + 1] - r[i];
    const double lap = (y[i + 1] - 2.0 * y[i] + y[i - 1]) / (h * h) +
                       (y[i + 1] - y[i - 1]) / (2.0 * h * r[i]);
    worst = std::max(worst, std::abs(lap - src(r[i], y[i])));
  }
  return worst;
}

double linear_density_scale(const IonSpecies& ion, double temperature) {
  if (!(temperature > 0.0)) throw std::invalid_argument("temperature must be > 0");
  return constants::boltzmann * temperature * constants::vacuum_permittivity /
         (ion.charge() * ion.charge());
}

}  // namespace rftrap::fluid

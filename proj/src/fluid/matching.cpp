#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "rftrap/error.hpp"
#include "rftrap/fluid.hpp"

namespace rftrap::fluid {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Trial {
  double log10_shape;
  ReducedProfile profile;
  double value;  // reduced linear density; +inf for a diverged profile
  bool partial;
};

Trial evaluate(const std::function<ReducedProfile(double)>& integrate,
               double log10_shape) {
  Trial t{log10_shape, integrate(std::pow(10.0, log10_shape)), 0.0, false};
  switch (t.profile.status) {
    case ProfileStatus::Complete:
      t.value = t.profile.reduced_linear_density;
      break;
    case ProfileStatus::Diverged:
      t.value = kInf;
      break;
    case ProfileStatus::StepUnderflow:
    case ProfileStatus::RadiusLimit:
      if (!t.profile.edge_bracketed) {
        std::ostringstream msg;
        msg << "solver failure: step underflow at rho = " << t.profile.rho_max
            << " with the edge not bracketed (shape = "
            << t.profile.shape << ")";
        throw SolverFailure(msg.str());
      }
      // Past the peak: the partial integral is a lower bound that is
      // already within the steep edge.
      t.value = t.profile.integrated_linear_density;
      t.partial = true;
      break;
  }
  return t;
}

MatchResult bisect(const char* name, double target, double scale,
                   const MatchOptions& o,
                   const std::function<ReducedProfile(double)>& integrate) {
  if (!(target > 0.0) || !std::isfinite(target))
    throw std::invalid_argument("target linear density must be > 0");
  if (!(o.log10_lo < o.log10_hi))
    throw std::invalid_argument("empty bracket");
  if (!(o.rel_tol > 0.0) || o.max_iterations < 1)
    throw std::invalid_argument("invalid match tolerance");

  const double reduced_target = target / scale;
  Trial lo = evaluate(integrate, o.log10_lo);
  Trial hi = evaluate(integrate, o.log10_hi);

  auto finish = [&](Trial&& t, int iterations) {
    MatchResult r;
    r.shape = t.profile.shape;
    r.iterations = iterations;
    r.target_linear_density = target;
    r.achieved_linear_density = t.value * scale;
    if (t.partial)
      r.warnings.push_back(
          "profile edge reached only as a partial (step underflow) solution");
    r.profile = std::move(t.profile);
    return r;
  };

  if (!(lo.value > hi.value)) {
    std::ostringstream msg;
    msg << "solver failure: linear density not decreasing in " << name
        << " over the bracket";
    throw SolverFailure(msg.str());
  }
  if (reduced_target > lo.value || reduced_target < hi.value) {
    std::ostringstream msg;
    msg << "out of bracket: target " << target << " /m needs " << name
        << " outside [1e" << o.log10_lo << ", 1e" << o.log10_hi
        << "] (reachable " << hi.value * scale << " .. " << lo.value * scale
        << " /m)";
    throw OutOfBracket(msg.str());
  }
  auto close = [&](const Trial& t) {
    return std::abs(t.value / reduced_target - 1.0) <= o.rel_tol;
  };
  if (close(lo)) return finish(std::move(lo), 0);
  if (close(hi)) return finish(std::move(hi), 0);

  for (int it = 1; it <= o.max_iterations; ++it) {
    const double mid = 0.5 * (lo.log10_shape + hi.log10_shape);
    if (mid <= lo.log10_shape || mid >= hi.log10_shape) break;
    Trial m = evaluate(integrate, mid);
    if (!(m.value <= lo.value && m.value >= hi.value)) {
      std::ostringstream msg;
      msg << "solver failure: linear density not monotone in " << name
          << " near 1e" << mid;
      throw SolverFailure(msg.str());
    }
    if (close(m)) return finish(std::move(m), it);
    if (m.value > reduced_target)
      lo = std::move(m);
    else
      hi = std::move(m);
  }
  std::ostringstream msg;
  msg << "solver failure: " << name << " matching did not reach relative "
      << o.rel_tol << " within " << o.max_iterations << " iterations";
  throw SolverFailure(msg.str());
}

}  // namespace

MatchOptions gamma_match_options() { return MatchOptions{-18.0, 6.0}; }

MatchOptions alpha_match_options() { return MatchOptions{-12.0, 8.0}; }

MatchResult match_gamma(double target_linear_density, double temperature,
                        const IonSpecies& ion, const MatchOptions& options) {
  const double scale = linear_density_scale(ion, temperature);
  return bisect("gamma", target_linear_density, scale, options,
                [&](double gamma) {
                  return integrate_profile_quadrupole(gamma, options.profile);
                });
}

MatchResult match_alpha(double target_linear_density, double temperature,
                        const IonSpecies& ion, int k,
                        const MatchOptions& options) {
  if (k < 3) throw std::invalid_argument("match_alpha needs k >= 3");
  const double scale = linear_density_scale(ion, temperature);
  return bisect("alpha", target_linear_density, scale, options,
                [&](double alpha) {
                  return integrate_profile_multipole(alpha, k, options.profile);
                });
}

}  // namespace rftrap::fluid

#include <stdexcept>

#include "rftrap/error.hpp"
#include "rftrap/fluid.hpp"

namespace rftrap::fluid {
namespace {

CloudOutcome solve_one(const CloudRequest& r) {
  CloudOutcome out;
  try {
    out.cloud = solve_cloud(r.trap, r.ion, r.temperature, r.linear_density,
                            r.profile, r.omega_x);
  } catch (const std::invalid_argument& e) {
    out.failure = FailureKind::Validation;
    out.error = e.what();
  } catch (const Error& e) {
    out.failure = FailureKind::Solver;
    out.error = e.what();
  }
  return out;
}

}  // namespace

std::vector<CloudOutcome> solve_clouds(const std::vector<CloudRequest>& requests) {
  std::vector<CloudOutcome> out(requests.size());
  const auto n = static_cast<long long>(requests.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (long long i = 0; i < n; ++i)
    out[static_cast<std::size_t>(i)] = solve_one(requests[static_cast<std::size_t>(i)]);
  return out;
}

std::vector<CloudOutcome> solve_clouds_serial(
    const std::vector<CloudRequest>& requests) {
  std::vector<CloudOutcome> out;
  out.reserve(requests.size());
  for (const auto& r : requests) out.push_back(solve_one(r));
  return out;
}

}  // namespace rftrap::fluid

#pragma once

// Strict relative comparison: |x - target| <= tol * |target|.
// doctest::Approx adds an absolute floor of tol, which makes relative
// tolerances meaningless for small quantities.

#include <doctest.h>

#include <cmath>
#include <sstream>

struct Within {
  double target;
  double tol;
};

inline Within within(double target, double tol) { return {target, tol}; }

inline bool operator==(double x, const Within& w) {
  return std::abs(x - w.target) <= w.tol * std::abs(w.target);
}

namespace doctest {
template <>
struct StringMaker<Within> {
  static String convert(const Within& w) {
    std::ostringstream os;
    os.precision(12);
    os << w.target << " (rel " << w.tol << ")";
    return os.str().c_str();
  }
};
}  // namespace doctest

#pragma once

#include <algorithm>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <limits>

#include "annealed_ising/errors.hpp"
#include "annealed_ising/numerics/roots.hpp"

namespace aising::numerics {

/// Integral of fn over [a, b] by Boost's tanh-sinh rule, which tolerates the
/// integrable endpoint singularities of log f. Throws if the reported error
/// estimate exceeds abs_tol.
template <ScalarFunction Fn>
double integrate_adaptive(Fn&& fn, double a, double b, double abs_tol = 1e-12) {
  if (a == b) return 0.0;
  if (b < a) return -integrate_adaptive(fn, b, a, abs_tol);
  auto g = [&fn](double x) { return static_cast<double>(fn(x)); };
  thread_local boost::math::quadrature::tanh_sinh<double> rule;
  constexpr double eps = std::numeric_limits<double>::epsilon();
  double error = 0.0;
  double l1 = 0.0;
  // The rule's tolerance is relative to the L1 norm of fn; asking for 1% of
  // the target leaves room for its level-difference error estimate.
  const double rel = std::max(0.01 * abs_tol / (b - a), 4.0 * eps);
  const double value = rule.integrate(g, a, b, rel, &error, &l1);
  if (!(error <= std::max(abs_tol, 16.0 * eps * l1))) {
    throw NumericalError("integrate_adaptive: error estimate above tolerance");
  }
  return value;
}

}  // namespace aising::numerics

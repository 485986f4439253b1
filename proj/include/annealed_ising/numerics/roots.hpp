#pragma once

#include <algorithm>
#include <boost/math/tools/toms748_solve.hpp>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <limits>
#include <string>
#include <type_traits>

#include "annealed_ising/errors.hpp"

namespace aising::numerics {

template <class Fn>
concept ScalarFunction = std::invocable<Fn&, double> &&
    std::convertible_to<std::invoke_result_t<Fn&, double>, double>;

/// Zero of fn on a sign-changing bracket via Boost's TOMS 748. Stops once the
/// bracket is narrower than tol (plus a few ulps of its endpoints) or on an
/// exact zero, and returns the endpoint with the smaller |fn|.
///
/// Throws BracketError if fn(lo) and fn(hi) have the same strict sign or the
/// interval is empty.
template <ScalarFunction Fn>
double solve_root_bracketed(Fn&& fn, double lo, double hi, double tol = 1e-12) {
  if (!(lo < hi)) {
    throw BracketError("solve_root_bracketed: need lo < hi");
  }
  const double flo = fn(lo);
  const double fhi = fn(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (!std::isfinite(flo) || !std::isfinite(fhi) || (flo > 0.0) == (fhi > 0.0)) {
    throw BracketError("solve_root_bracketed: no sign change on [" + std::to_string(lo) +
                       ", " + std::to_string(hi) + "]");
  }
  constexpr double eps = std::numeric_limits<double>::epsilon();
  auto narrow = [tol](double a, double b) {
    return std::fabs(b - a) <= tol + 4.0 * eps * std::max(std::fabs(a), std::fabs(b));
  };
  auto g = [&fn](double x) { return static_cast<double>(fn(x)); };
  std::uintmax_t iters = 1000;
  const auto [a, b] = boost::math::tools::toms748_solve(g, lo, hi, flo, fhi, narrow, iters);
  if (iters >= 1000 && !narrow(a, b)) {
    throw NumericalError("solve_root_bracketed: iteration limit reached");
  }
  return std::fabs(g(a)) <= std::fabs(g(b)) ? a : b;
}

}  // namespace aising::numerics

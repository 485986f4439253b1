#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <limits>
#include <type_traits>

#include "annealed_ising/numerics/roots.hpp"

namespace aising::numerics {

struct Maximum1D {
  double x;
  double value;
};

/// Golden-section search for the maximum of a unimodal fn on [lo, hi].
/// Stops when the bracket is narrower than x_tol; the returned point is the
/// best evaluated one (endpoints included).
template <ScalarFunction Fn>
Maximum1D golden_section_maximize(Fn&& fn, double lo, double hi, double x_tol = 1e-10) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = fn(x1);
  double f2 = fn(x2);
  while (b - a > x_tol) {
    if (f1 >= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = fn(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = fn(x2);
    }
  }
  Maximum1D best = f1 >= f2 ? Maximum1D{x1, f1} : Maximum1D{x2, f2};
  const double fa = fn(lo);
  const double fb = fn(hi);
  if (fa > best.value) best = {lo, fa};
  if (fb > best.value) best = {hi, fb};
  return best;
}

template <std::size_t N>
struct MaximumND {
  std::array<double, N> x;
  double value;
  int evaluations;
};

struct NelderMeadOptions {
  double f_tol = 1e-14;  // relative spread of simplex values
  double x_tol = 1e-11;  // simplex diameter
  int max_evaluations = 4000;
};

/// Nelder-Mead maximization in N dimensions. Infeasible points should be
/// reported by fn as -infinity; they are never accepted.
template <std::size_t N, class Fn>
  requires std::invocable<Fn&, const std::array<double, N>&>
MaximumND<N> nelder_mead_maximize(Fn&& fn, std::array<double, N> start,
                                  const std::array<double, N>& step,
                                  NelderMeadOptions opts = {}) {
  using Point = std::array<double, N>;
  std::array<Point, N + 1> simplex;
  std::array<double, N + 1> value;
  int evals = 0;
  auto eval = [&](const Point& p) {
    ++evals;
    const double v = fn(p);
    return std::isnan(v) ? -std::numeric_limits<double>::infinity() : v;
  };
  simplex[0] = start;
  value[0] = eval(start);
  for (std::size_t i = 0; i < N; ++i) {
    simplex[i + 1] = start;
    simplex[i + 1][i] += step[i];
    value[i + 1] = eval(simplex[i + 1]);
    if (value[i + 1] == -std::numeric_limits<double>::infinity()) {
      simplex[i + 1][i] = start[i] - step[i];
      value[i + 1] = eval(simplex[i + 1]);
    }
  }

  std::array<std::size_t, N + 1> order;
  while (evals < opts.max_evaluations) {
    for (std::size_t i = 0; i <= N; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t l, std::size_t r) { return value[l] > value[r]; });
    const std::size_t best = order[0];
    const std::size_t worst = order[N];
    const std::size_t second_worst = order[N - 1];

    double diameter = 0.0;
    for (std::size_t i = 0; i <= N; ++i) {
      for (std::size_t k = 0; k < N; ++k) {
        diameter = std::max(diameter, std::fabs(simplex[i][k] - simplex[best][k]));
      }
    }
    const double spread = value[best] - value[worst];
    if (std::isfinite(spread) &&
        spread <= opts.f_tol * (1.0 + std::fabs(value[best])) && diameter <= opts.x_tol) {
      break;
    }
    if (diameter <= 1e-15) break;

    Point centroid{};
    for (std::size_t i = 0; i <= N; ++i) {
      if (i == worst) continue;
      for (std::size_t k = 0; k < N; ++k) centroid[k] += simplex[i][k] / N;
    }
    auto along = [&](double coef) {
      Point p;
      for (std::size_t k = 0; k < N; ++k) {
        p[k] = centroid[k] + coef * (simplex[worst][k] - centroid[k]);
      }
      return p;
    };

    const Point reflected = along(-1.0);
    const double f_reflected = eval(reflected);
    if (f_reflected > value[best]) {
      const Point expanded = along(-2.0);
      const double f_expanded = eval(expanded);
      if (f_expanded > f_reflected) {
        simplex[worst] = expanded;
        value[worst] = f_expanded;
      } else {
        simplex[worst] = reflected;
        value[worst] = f_reflected;
      }
      continue;
    }
    if (f_reflected > value[second_worst]) {
      simplex[worst] = reflected;
      value[worst] = f_reflected;
      continue;
    }
    const bool outside = f_reflected > value[worst];
    const Point contracted = along(outside ? -0.5 : 0.5);
    const double f_contracted = eval(contracted);
    if (outside ? f_contracted >= f_reflected : f_contracted > value[worst]) {
      simplex[worst] = contracted;
      value[worst] = f_contracted;
      continue;
    }
    // shrink toward the best vertex
    for (std::size_t i = 0; i <= N; ++i) {
      if (i == best) continue;
      for (std::size_t k = 0; k < N; ++k) {
        simplex[i][k] = simplex[best][k] + 0.5 * (simplex[i][k] - simplex[best][k]);
      }
      value[i] = eval(simplex[i]);
    }
  }

  std::size_t best = 0;
  for (std::size_t i = 1; i <= N; ++i) {
    if (value[i] > value[best]) best = i;
  }
  return {simplex[best], value[best], evals};
}

}  // namespace aising::numerics

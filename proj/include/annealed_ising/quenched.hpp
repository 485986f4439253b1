#pragma once

#include <cmath>
#include <string>

#include "annealed_ising/core_math.hpp"
#include "annealed_ising/errors.hpp"
#include "annealed_ising/numerics/roots.hpp"
#include "annealed_ising/regular.hpp"

namespace aising {

struct QuenchedResult {
  double h_star;      // cavity field fixed point
  double u_star;      // tanh(beta) tanh(h_star)
  double psi_tilde;   // quenched pressure
};

namespace detail {

inline double cavity_map(const ModelParams& p, double h) {
  return p.B + (p.d - 1) * std::atanh(std::tanh(p.beta) * std::tanh(h));
}

}  // namespace detail

/// Fixed point h = B + (d-1) atanh(tanh(beta) tanh(h)) for B >= 0.
///
/// Plain iteration from h = B (monotone for this map) is tried first; when it
/// has not settled after max_iter steps the root of h - map(h) is bracketed on
/// [B, B + (d-1) beta + 1], which holds since atanh(tanh(beta) tanh(h)) < beta.
/// At B = 0 the positive root is returned for beta > beta_c, else 0.
inline double solve_h_star(const ModelParams& params, int max_iter = 200) {
  params.validate();
  if (params.B < 0.0) {
    throw DomainError("solve_h_star: B must be >= 0 (use evenness for B < 0)");
  }
  const ModelParams& p = params;
  if (p.beta == 0.0) return p.B;
  auto residual = [&](double h) { return h - detail::cavity_map(p, h); };
  const double h_max = p.B + (p.d - 1) * p.beta + 1.0;

  if (p.B == 0.0) {
    if (!(p.beta > critical_beta(p.d))) return 0.0;
    return numerics::solve_root_bracketed(residual, 1e-8, h_max, 1e-14);
  }

  double h = p.B;
  for (int i = 0; i < max_iter; ++i) {
    const double next = detail::cavity_map(p, h);
    if (std::fabs(next - h) <= 1e-15 * (1.0 + std::fabs(h))) {
      return next;
    }
    h = next;
  }
  const double root = numerics::solve_root_bracketed(residual, p.B, h_max, 1e-14);
  if (!(std::fabs(residual(root)) <= 1e-12)) {
    throw NumericalError("solve_h_star: fixed point residual above 1e-12");
  }
  return root;
}

/// Quenched pressure
///   (d/2) log cosh(beta) - (d/2) log(1 + tanh(beta) tanh(h*)^2)
///     + log[e^B (1+u*)^d + e^{-B} (1-u*)^d],   u* = tanh(beta) tanh(h*),
/// with B < 0 mapped to |B|.
inline QuenchedResult quenched_pressure(const ModelParams& params) {
  params.validate();
  ModelParams p = params;
  p.B = std::fabs(params.B);
  const double h = solve_h_star(p);
  const double tb = std::tanh(p.beta);
  const double th = std::tanh(h);
  const double u = tb * th;
  const double d = p.d;
  // log[e^B (1+u)^d + e^{-B} (1-u)^d] with the dominant first term factored out.
  const double ratio = std::exp(-2.0 * p.B + d * (std::log1p(-u) - std::log1p(u)));
  const double mix = p.B + d * std::log1p(u) + std::log1p(ratio);
  const double log_cosh_beta = p.beta + std::log1p(std::exp(-2.0 * p.beta)) - std::log(2.0);
  const double psi = 0.5 * d * log_cosh_beta - 0.5 * d * std::log1p(tb * th * th) + mix;
  return {h, u, psi};
}

struct IdentityCheck {
  double lhs;
  double rhs;
};

/// Both sides of
///   (e^{-2x} v + sqrt(1 + (e^{-4x} - 1) v^2)) / (v + 1) = cosh(x-y) / cosh(x+y)
/// with v = tanh(y + atanh(tanh(x) tanh(y))), x > 0.
inline IdentityCheck identity_E_check(double x, double y) {
  if (!(x > 0.0)) throw DomainError("identity_E_check: x must be > 0");
  const double v = std::tanh(y + std::atanh(std::tanh(x) * std::tanh(y)));
  const double lhs =
      (std::exp(-2.0 * x) * v + std::sqrt(1.0 + std::expm1(-4.0 * x) * v * v)) / (v + 1.0);
  const double rhs = std::cosh(x - y) / std::cosh(x + y);
  return {lhs, rhs};
}

}  // namespace aising

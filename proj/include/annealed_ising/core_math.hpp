#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "annealed_ising/errors.hpp"
#include "annealed_ising/numerics/quadrature.hpp"
#include "annealed_ising/numerics/roots.hpp"

namespace aising {

/// Evaluation point of every thermodynamic quantity: inverse temperature,
/// external field and vertex degree.
struct ModelParams {
  double beta = 0.0;
  double B = 0.0;
  int d = 3;

  void validate() const {
    if (!(beta >= 0.0) || !std::isfinite(beta)) {
      throw DomainError("beta must be finite and >= 0, got " + std::to_string(beta));
    }
    if (!std::isfinite(B)) throw DomainError("B must be finite");
    if (d < 2) throw DomainError("degree d must be >= 2, got " + std::to_string(d));
  }

  /// Weight e^{-2 beta} of a single disagreeing edge.
  [[nodiscard]] double c() const { return std::exp(-2.0 * beta); }
};

/// A point of [0, 1].
class UnitInterval {
 public:
  UnitInterval(double t) : t_(t) {  // NOLINT(google-explicit-constructor)
    if (!(t >= 0.0 && t <= 1.0)) {
      throw DomainError("t must lie in [0, 1], got " + std::to_string(t));
    }
  }
  [[nodiscard]] double value() const { return t_; }
  /// Distance to the nearer endpoint, min(t, 1 - t).
  [[nodiscard]] double u() const { return std::min(t_, 1.0 - t_); }

 private:
  double t_;
};

/// Inverse temperature with its edge weight c = e^{-2 beta}.
struct Coupling {
  double beta;
  double c;

  explicit Coupling(double beta_) : beta(beta_), c(std::exp(-2.0 * beta_)) {}

  /// Positive root of theta = c(1-2t)/(1-t) + t/(theta(1-t)); t in [0, 1/2].
  /// The radicand 1 + (c^2-1)(1-2t)^2 is evaluated as 4t(1-t) + c^2(1-2t)^2,
  /// which has no cancellation when c is small and t is near 0.
  [[nodiscard]] double f(double t) const {
    if (beta == 0.0) return 1.0;
    const double w = 1.0 - 2.0 * t;
    return (c * w + std::sqrt(4.0 * t * (1.0 - t) + c * c * w * w)) / (2.0 * (1.0 - t));
  }
};

/// f(t) on [0, 1/2]. The reflected branch f(1 - t) must be requested
/// explicitly by the caller.
inline double f_fixed_point(double beta, double t) {
  if (!(beta >= 0.0)) throw DomainError("f_fixed_point: beta must be >= 0");
  if (!(t >= 0.0 && t <= 0.5)) {
    throw DomainError("f_fixed_point: t must lie in [0, 1/2], got " + std::to_string(t));
  }
  return Coupling(beta).f(t);
}

namespace detail {

inline double F_closed_form(const Coupling& k, double t) {
  if (t == 0.0 || k.beta == 0.0) return 0.0;
  const double f = k.f(t);
  const double ratio = k.c * (2.0 * t - 1.0) / ((1.0 - t) * (f + 1.0));
  return t * std::log(f) + 0.5 * std::log1p(-t) + 0.5 * std::log1p(k.c) +
         0.5 * std::log1p(ratio);
}

// Binary entropy -s log s - (1-s) log(1-s); equals I(t) at t = s and t = 1 - s.
inline double entropy(double s) {
  if (s <= 0.0 || s >= 1.0) return 0.0;
  return -s * std::log(s) - (1.0 - s) * std::log1p(-s);
}

}  // namespace detail

/// Closed form of F(t) = int_0^t log f(s) ds for t in [0, 1/2].
inline double F_closed_form(double beta, double t) {
  if (!(beta >= 0.0)) throw DomainError("F_closed_form: beta must be >= 0");
  if (!(t >= 0.0 && t <= 0.5)) {
    throw DomainError("F_closed_form: t must lie in [0, 1/2], got " + std::to_string(t));
  }
  return detail::F_closed_form(Coupling(beta), t);
}

/// F(t) on [0, 1], using F(t) = F(1 - t).
inline double F_integral(double beta, UnitInterval t) {
  if (!(beta >= 0.0)) throw DomainError("F_integral: beta must be >= 0");
  return detail::F_closed_form(Coupling(beta), t.u());
}

/// F(t) by adaptive quadrature of log f over [0, u(t)]; cross-check route.
inline double F_quadrature(double beta, UnitInterval t, double abs_tol = 1e-12) {
  const Coupling k(beta);
  return numerics::integrate_adaptive([&](double s) { return std::log(k.f(s)); }, 0.0, t.u(),
                                      abs_tol);
}

/// I(t) = (t-1) log(1-t) - t log t.
inline double I_entropy(UnitInterval t) { return detail::entropy(t.u()); }

/// H(t) = I(t) + d F(t).
inline double H_value(const ModelParams& p, UnitInterval t) {
  return I_entropy(t) + p.d * F_integral(p.beta, t);
}

/// L(t) = H(t) + 2Bt; defined on the closed interval, L(0) = 0, L(1) = 2B.
inline double L_value(const ModelParams& p, UnitInterval t) {
  if (t.value() == 0.0) return 0.0;
  if (t.value() == 1.0) return 2.0 * p.B;
  return H_value(p, t) + 2.0 * p.B * t.value();
}

// Upper-branch evaluators parametrised by the minority fraction s = 1 - t in
// (0, 1/2]. They keep full relative precision when t* is within 1e-12 of 1,
// which happens for large beta.

/// H'(1 - s) = log(s / (1 - s)) - d log f(s).
inline double H_slope_upper(const ModelParams& p, double s) {
  const Coupling k(p.beta);
  return std::log(s) - std::log1p(-s) - p.d * std::log(k.f(s));
}

/// H''(1 - s) = H''(s), rational form in x = f(s).
inline double H_curvature_upper(const ModelParams& p, double s) {
  const Coupling k(p.beta);
  const double x = k.f(s);
  const double w = 1.0 - 2.0 * s;  // 2t - 1
  const double num = -p.d * s * (k.c * x - 1.0) - k.c * w * x - 2.0 * s;
  const double den = (1.0 - s) * s * (k.c * w * x + 2.0 * s);
  return num / den;
}

/// L(1 - s).
inline double L_upper(const ModelParams& p, double s) {
  const Coupling k(p.beta);
  return detail::entropy(s) + p.d * detail::F_closed_form(k, s) + 2.0 * p.B * (1.0 - s);
}

struct LProfile {
  double L;
  double L1;  // dL/dt
  double L2;  // d^2L/dt^2
};

/// L with its first two derivatives at an interior t. Derivatives are
/// unbounded at the endpoints, so t in {0, 1} is a DomainError.
inline LProfile L_profile(const ModelParams& p, UnitInterval t) {
  const double tv = t.value();
  if (tv == 0.0 || tv == 1.0) {
    throw DomainError("L_profile: derivatives of L diverge at t = 0 and t = 1");
  }
  const double s = t.u();
  const double sign = tv >= 0.5 ? 1.0 : -1.0;
  return {L_value(p, t), sign * H_slope_upper(p, s) + 2.0 * p.B, H_curvature_upper(p, s)};
}

/// Root of fn on [lo, hi]; see numerics::solve_root_bracketed.
template <numerics::ScalarFunction Fn>
double solve_root_bracketed(Fn&& fn, double lo, double hi, double tol = 1e-12) {
  return numerics::solve_root_bracketed(std::forward<Fn>(fn), lo, hi, tol);
}

}  // namespace aising

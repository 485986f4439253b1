#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "annealed_ising/core_math.hpp"
#include "annealed_ising/errors.hpp"

namespace aising {

/// Thermodynamic limits at one (beta, B, d).
///
/// On the region U = {B != 0} u {B = 0, beta < beta_c} the maximiser t_star
/// of L is unique, M = 2 t_star - 1 and chi = -4 / H''(t_star). At B = 0 and
/// beta >= beta_c the maximiser is not unique; t_star then reports the root
/// t_+ in (1/2, 1), M carries the spontaneous magnetisation nu = 2 t_+ - 1
/// and in_U is false.
struct ThermoResult {
  double psi;
  double t_star;
  double M;
  double chi;
  bool in_U;
};

/// atanh(1/(d-1)); +infinity for d = 2.
inline double critical_beta(int d) {
  if (d < 2) throw DomainError("critical_beta: d must be >= 2");
  if (d == 2) return std::numeric_limits<double>::infinity();
  return 0.5 * std::log(static_cast<double>(d) / static_cast<double>(d - 2));
}

namespace detail {

// Minority fraction s* = 1 - t* of the root of L' = H' + 2B in (1/2, 1), for
// B > 0. Solved in u = log s so that s* ~ e^{-2 d beta} stays resolvable.
inline double minority_root_field(const ModelParams& p) {
  auto slope = [&](double u) { return H_slope_upper(p, std::exp(u)) + 2.0 * p.B; };
  const double u_hi = std::log(0.5);
  double u_lo = -(2.0 * p.d * p.beta + 2.0 * p.B + 1.0);
  if (u_lo < -700.0) {
    u_lo = -700.0;
    if (slope(u_lo) >= 0.0) return std::exp(u_lo);
  }
  return std::exp(numerics::solve_root_bracketed(slope, u_lo, u_hi, 1e-13));
}

// Minority fraction of t_+, the root of H' in (1/2, 1); 1/2 when beta <= beta_c.
inline double minority_root_zero_field(const ModelParams& p) {
  if (!(p.beta > critical_beta(p.d))) return 0.5;
  ModelParams q = p;
  q.B = 0.0;
  auto slope = [&](double u) { return H_slope_upper(q, std::exp(u)); };
  double u_hi = 0.0;
  bool found = false;
  for (double delta = 1e-9; delta <= 1e-2; delta *= 10.0) {
    u_hi = std::log(0.5 - delta);
    if (slope(u_hi) > 0.0) {
      found = true;
      break;
    }
  }
  if (!found) return 0.5;
  double u_lo = -(2.0 * q.d * q.beta + 1.0);
  if (u_lo < -700.0) {
    u_lo = -700.0;
    if (slope(u_lo) >= 0.0) return std::exp(u_lo);
  }
  return std::exp(numerics::solve_root_bracketed(slope, u_lo, u_hi, 1e-13));
}

}  // namespace detail

/// H''(1/2) = -4 - 2d(e^{-2 beta} - 1), through the general curvature formula.
inline double curvature_at_half(double beta, int d) {
  return H_curvature_upper(ModelParams{beta, 0.0, d}, 0.5);
}

/// Limit pressure psi(beta, B) with maximiser, magnetisation and
/// susceptibility.
inline ThermoResult pressure(const ModelParams& params) {
  params.validate();
  const double base = 0.5 * params.beta * params.d;
  if (params.B == 0.0) {
    const double beta_c = critical_beta(params.d);
    if (params.beta < beta_c) {
      const double c = params.c();
      return {base + L_upper(params, 0.5), 0.5, 0.0,
              2.0 / (2.0 + params.d * (c - 1.0)), true};
    }
    const double s = detail::minority_root_zero_field(params);
    const double h2 = H_curvature_upper(params, s);
    const double chi = h2 < 0.0 ? -4.0 / h2 : std::numeric_limits<double>::infinity();
    return {base + L_upper(params, s), 1.0 - s, 1.0 - 2.0 * s, chi, false};
  }

  ModelParams q = params;
  q.B = std::fabs(params.B);
  const double s = detail::minority_root_field(q);
  const double psi = base - q.B + L_upper(q, s);
  const double chi = -4.0 / H_curvature_upper(q, s);
  if (params.B > 0.0) return {psi, 1.0 - s, 1.0 - 2.0 * s, chi, true};
  return {psi, s, -(1.0 - 2.0 * s), chi, true};
}

/// nu = 2 t_+ - 1 for beta > beta_c, otherwise 0.
inline double spontaneous_magnetization(double beta, int d) {
  ModelParams p{beta, 0.0, d};
  p.validate();
  if (!(beta > critical_beta(d))) return 0.0;
  return 1.0 - 2.0 * detail::minority_root_zero_field(p);
}

struct PhaseRow {
  double beta;
  double B;
  int d;
  std::optional<ThermoResult> result;
  std::string error;  // non-empty iff result is empty
};

/// pressure() over the product grid, beta-major, in input order.
inline std::vector<PhaseRow> phase_diagram(int d, const std::vector<double>& beta_grid,
                                           const std::vector<double>& B_grid) {
  std::vector<PhaseRow> rows;
  rows.reserve(beta_grid.size() * B_grid.size());
  for (double beta : beta_grid) {
    for (double B : B_grid) {
      PhaseRow row{beta, B, d, std::nullopt, {}};
      try {
        row.result = pressure(ModelParams{beta, B, d});
      } catch (const std::exception& e) {
        row.error = e.what();
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace aising

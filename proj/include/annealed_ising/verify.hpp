#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "annealed_ising/configmodel.hpp"
#include "annealed_ising/core_math.hpp"
#include "annealed_ising/finite.hpp"
#include "annealed_ising/gtable.hpp"
#include "annealed_ising/quenched.hpp"
#include "annealed_ising/regular.hpp"
#include "annealed_ising/sampler.hpp"

namespace aising {

/// One line of a verification table. `pass` is authoritative; for one-sided
/// checks abs_diff and tolerance are informational.
struct CheckRow {
  std::string suite;
  std::string label;
  double value;
  double reference;
  double abs_diff;
  double tolerance;
  bool pass;
};

namespace detail {

inline std::string label_of(const char* format, double a, double b, double c) {
  char buf[160];
  std::snprintf(buf, sizeof buf, format, a, b, c);
  return buf;
}

inline CheckRow close_row(std::string suite, std::string label, double value, double reference,
                          double tol) {
  const double diff = std::fabs(value - reference);
  return {std::move(suite), std::move(label), value, reference, diff, tol, diff <= tol};
}

}  // namespace detail

inline bool all_pass(const std::vector<CheckRow>& rows) {
  for (const auto& r : rows) {
    if (!r.pass) return false;
  }
  return true;
}

/// Annealed pressure against the quenched cavity pressure on beta in
/// {0.1, ..., 1.5}, B in {0.01, 0.1, 0.5, 1, 2}, d in {2, ..., 5}, plus the
/// link 2 t* - 1 = tanh(h* + atanh(tanh beta tanh h*)).
inline std::vector<CheckRow> verify_quenched_equality() {
  const char* suite = "quenched-equality";
  std::vector<CheckRow> rows;
  for (int d = 2; d <= 5; ++d) {
    for (int i = 1; i <= 15; ++i) {
      const double beta = 0.1 * i;
      for (double B : {0.01, 0.1, 0.5, 1.0, 2.0}) {
        const ModelParams p{beta, B, d};
        const ThermoResult an = pressure(p);
        const QuenchedResult qu = quenched_pressure(p);
        const std::string where =
            detail::label_of("beta=%g B=%g d=%g", beta, B, static_cast<double>(d));
        rows.push_back(detail::close_row(suite, "psi " + where, an.psi, qu.psi_tilde, 1e-7));
        const double link = std::tanh(qu.h_star + std::atanh(std::tanh(beta) * std::tanh(qu.h_star)));
        rows.push_back(detail::close_row(suite, "2t*-1 " + where, 2.0 * an.t_star - 1.0, link, 1e-9));
      }
    }
  }
  return rows;
}

/// Zero of beta -> H''(1/2) against atanh(1/(d-1)) for d = 3..10, and the
/// sign of the spontaneous magnetisation 0.05 either side of beta_c at d = 3.
inline std::vector<CheckRow> verify_critical_beta() {
  const char* suite = "critical-beta";
  std::vector<CheckRow> rows;
  for (int d = 3; d <= 10; ++d) {
    const double root =
        solve_root_bracketed([d](double b) { return curvature_at_half(b, d); }, 1e-6, 10.0, 1e-15);
    rows.push_back(detail::close_row(suite, "root d=" + std::to_string(d), root,
                                     std::atanh(1.0 / (d - 1.0)), 1e-10));
  }
  const double bc = critical_beta(3);
  const double above = spontaneous_magnetization(bc + 0.05, 3);
  const double below = spontaneous_magnetization(bc - 0.05, 3);
  rows.push_back({suite, "nu>0 at beta_c+0.05 d=3", above, 0.0, above, 0.0, above > 0.0});
  rows.push_back({suite, "nu=0 at beta_c-0.05 d=3", below, 0.0, std::fabs(below), 0.0, below == 0.0});
  return rows;
}

/// Recursion against exhaustive matching enumeration for even m <= 12 and
/// every k, then Monte Carlo at m = 30 (10^5 matchings, 3 sigma).
inline std::vector<CheckRow> verify_g_recursion(std::uint64_t seed) {
  const char* suite = "g-recursion";
  std::vector<CheckRow> rows;
  for (double beta : {0.3, 1.0, 3.0}) {
    for (long m = 2; m <= 12; m += 2) {
      const GTable table(beta, m);
      double worst = 0.0;
      for (long k = 0; k <= m; ++k) {
        const auto pmf = enumerate_X_pmf(k, m);
        double g = 0.0;
        for (std::size_t x = 0; x < pmf.size(); ++x) {
          g += pmf[x] * std::exp(-2.0 * beta * static_cast<double>(x));
        }
        worst = std::max(worst, std::fabs(table.g(k) - g));
      }
      rows.push_back({suite, detail::label_of("max_k beta=%g m=%g", beta, static_cast<double>(m), 0.0),
                      worst, 0.0, worst, 1e-12, worst <= 1e-12});
    }
  }
  std::uint64_t stream = seed;
  for (double beta : {0.3, 1.0, 3.0}) {
    const GTable table(beta, 30);
    for (long k : {7L, 15L}) {
      const McEstimate mc = mc_estimate_g(beta, k, 30, 100000, stream++);
      rows.push_back(detail::close_row(
          suite, detail::label_of("mc beta=%g k=%g m=%g", beta, static_cast<double>(k), 30.0),
          mc.estimate, table.g(k), 3.0 * mc.std_error));
    }
  }
  return rows;
}

/// Independent spins at beta = 0: psi = log 2cosh B, M = tanh B and
/// chi = sech^2 B from the regular, finite and configuration-model routes.
inline std::vector<CheckRow> verify_beta_zero() {
  const char* suite = "beta-zero";
  std::vector<CheckRow> rows;
  for (double B : {-1.0, -0.3, 0.0, 0.3, 1.5}) {
    const double psi = std::log(2.0 * std::cosh(B));
    const double M = std::tanh(B);
    const double chi = 1.0 / (std::cosh(B) * std::cosh(B));
    auto add = [&](const std::string& who, double vpsi, double vM, double vchi) {
      const std::string where = who + detail::label_of(" B=%g", B, 0.0, 0.0);
      rows.push_back(detail::close_row(suite, "psi " + where, vpsi, psi, 1e-10));
      rows.push_back(detail::close_row(suite, "M " + where, vM, M, 1e-10));
      rows.push_back(detail::close_row(suite, "chi " + where, vchi, chi, 1e-10));
    };
    for (int d : {2, 3, 5}) {
      const ThermoResult r = pressure({0.0, B, d});
      add("regular d=" + std::to_string(d), r.psi, r.M, r.chi);
    }
    for (long n : {2L, 7L, 64L, 1000L, 4097L}) {
      const int d = n % 2 == 0 ? 3 : 4;
      const FiniteThermo f = finite_thermo(spin_count_law(n, {0.0, B, d}));
      add("finite n=" + std::to_string(n) + " d=" + std::to_string(d), f.psi_n, f.M_n, f.chi_n);
    }
    for (const char* spec : {"deterministic:3", "pmf:1:0.3,2:0.3,4:0.4", "poisson:2"}) {
      const CmThermo c = cm_thermo(GSolver(DegreeDistribution::parse(spec), 0.0), B);
      add(std::string("config-model ") + spec, c.psi, c.M, c.chi);
    }
  }
  return rows;
}

/// d = 2 pressure against beta + log(cosh B + sqrt(sinh^2 B + e^{-4 beta}))
/// on beta in {0.2, ..., 2}, B in {0.1, ..., 2}.
inline std::vector<CheckRow> verify_d2_closed_form() {
  const char* suite = "d2-closed-form";
  std::vector<CheckRow> rows;
  for (int i = 1; i <= 10; ++i) {
    const double beta = 0.2 * i;
    for (int j = 1; j <= 20; ++j) {
      const double B = 0.1 * j;
      const double sh = std::sinh(B);
      const double closed = beta + std::log(std::cosh(B) + std::sqrt(sh * sh + std::exp(-4.0 * beta)));
      rows.push_back(detail::close_row(suite, detail::label_of("psi beta=%g B=%g", beta, B, 0.0),
                                       pressure({beta, B, 2}).psi, closed, 1e-8));
    }
  }
  return rows;
}

inline const std::vector<std::string>& verify_suite_names() {
  static const std::vector<std::string> names = {"quenched-equality", "critical-beta",
                                                 "g-recursion", "beta-zero", "d2-closed-form"};
  return names;
}

/// Rows of one named suite, or of every suite for "all".
inline std::vector<CheckRow> run_verify_suite(const std::string& name, std::uint64_t seed) {
  if (name == "quenched-equality") return verify_quenched_equality();
  if (name == "critical-beta") return verify_critical_beta();
  if (name == "g-recursion") return verify_g_recursion(seed);
  if (name == "beta-zero") return verify_beta_zero();
  if (name == "d2-closed-form") return verify_d2_closed_form();
  if (name == "all") {
    std::vector<CheckRow> rows;
    for (const auto& n : verify_suite_names()) {
      auto part = run_verify_suite(n, seed);
      rows.insert(rows.end(), part.begin(), part.end());
    }
    return rows;
  }
  throw DomainError("unknown verify suite '" + name + "'");
}

}  // namespace aising

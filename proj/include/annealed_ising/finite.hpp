#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "annealed_ising/core_math.hpp"
#include "annealed_ising/errors.hpp"
#include "annealed_ising/gtable.hpp"
#include "annealed_ising/numerics/logsumexp.hpp"
#include "annealed_ising/regular.hpp"

namespace aising {

/// Exact law of j = |sigma_+| under the annealed measure on n vertices of
/// degree d:
///   p_j ∝ C(n, j) e^{2Bj} g(beta, dj, dn),   j = 0..n.
struct SpinCountLaw {
  long n = 0;
  ModelParams params;
  std::vector<double> log_w;  // unnormalised log weights
  std::vector<double> log_p;  // log_w - log_partition
  std::vector<double> p;
  double log_partition = 0.0;  // log sum_j exp(log_w_j)

  /// Magnetisation value S_n / n = (2j - n) / n of atom j.
  [[nodiscard]] double x(long j) const {
    return static_cast<double>(2 * j - n) / static_cast<double>(n);
  }
};

namespace detail {

inline void check_pairing(long n, int d) {
  if (n < 1) throw DomainError("n must be >= 1");
  if ((static_cast<long long>(n) * d) % 2 != 0) {
    throw DomainError("d*n = " + std::to_string(static_cast<long long>(n) * d) +
                      " is odd: the d*n half-edges cannot be paired into a perfect matching");
  }
}

// Normalises log_w into log_p and p.
inline void normalise(SpinCountLaw& law) {
  law.log_partition = numerics::log_sum_exp(law.log_w);
  law.log_p.resize(law.log_w.size());
  law.p.resize(law.log_w.size());
  for (std::size_t j = 0; j < law.log_w.size(); ++j) {
    law.log_p[j] = law.log_w[j] - law.log_partition;
    law.p[j] = std::exp(law.log_p[j]);
  }
}

// Same law with the field shifted by s: log_w_j += 2 s j.
inline SpinCountLaw tilt(const SpinCountLaw& law, double s) {
  SpinCountLaw out = law;
  out.params.B += s;
  for (long j = 0; j <= law.n; ++j) out.log_w[j] += 2.0 * s * static_cast<double>(j);
  normalise(out);
  return out;
}

struct Moments {
  double mean;
  double variance;
};

// The mean is accumulated over mirrored pairs (j, n - j), so a symmetric law
// has mean exactly n/2.
inline Moments moments_of_j(const SpinCountLaw& law) {
  long double offset = 0.0L;  // E(j - n/2)
  for (long j = 0; 2 * j < law.n; ++j) {
    offset += static_cast<long double>(law.p[law.n - j] - law.p[j]) *
              (0.5L * law.n - static_cast<long double>(j));
  }
  const long double mean = 0.5L * law.n + offset;
  long double var = 0.0L;
  for (long j = 0; j <= law.n; ++j) {
    const long double dj = static_cast<long double>(j) - mean;
    var += static_cast<long double>(law.p[j]) * dj * dj;
  }
  return {static_cast<double>(mean), static_cast<double>(var)};
}

}  // namespace detail

/// Builds the law from one GTable at m = dn; log-binomials via log-gamma.
inline SpinCountLaw spin_count_law(long n, const ModelParams& params) {
  params.validate();
  detail::check_pairing(n, params.d);
  const long m = n * params.d;
  const GTable table(params.beta, m);
  SpinCountLaw law;
  law.n = n;
  law.params = params;
  law.log_w.resize(static_cast<std::size_t>(n) + 1);
  for (long j = 0; j <= n; ++j) {
    law.log_w[j] = numerics::log_binomial(n, j) + 2.0 * params.B * static_cast<double>(j) +
                   table.log_g(params.d * j);
  }
  detail::normalise(law);
  return law;
}

struct FiniteThermo {
  double psi_n;  // (1/n) log E Z_n
  double M_n;    // E (S_n / n)
  double chi_n;  // Var (S_n / sqrt n)
};

inline FiniteThermo finite_thermo(const SpinCountLaw& law) {
  const double n = static_cast<double>(law.n);
  const ModelParams& p = law.params;
  const detail::Moments mom = detail::moments_of_j(law);
  return {0.5 * p.beta * p.d - p.B + law.log_partition / n, (2.0 * mom.mean - n) / n,
          4.0 * mom.variance / n};
}

/// c_n''(s) = (4/n) Var(j) under the law with field B + s.
inline double cumulant_second_derivative(const SpinCountLaw& law, double s) {
  const SpinCountLaw tilted = detail::tilt(law, s);
  return 4.0 * detail::moments_of_j(tilted).variance / static_cast<double>(law.n);
}

inline double cumulant_second_derivative(long n, const ModelParams& params, double s) {
  return cumulant_second_derivative(spin_count_law(n, params), s);
}

struct LlnTail {
  double epsilon;
  double tail;        // P(|S_n/n - M_n| > epsilon)
  double log_tail;    // log of the same, resolved below double underflow
  double tail_limit;  // P(|S_n/n - M| > epsilon) with M the limit magnetisation
};

struct BimodalMass {
  double nu;      // spontaneous magnetisation
  double window;  // n^{-1/6}
  double plus;    // P(|S_n/n - nu| <= window)
  double minus;   // P(|S_n/n + nu| <= window)
};

struct LimitTheoremReport {
  long n = 0;
  ModelParams params;
  FiniteThermo thermo{};
  std::vector<LlnTail> lln;
  double kolmogorov = 0.0;  // sup |P((S_n - E S_n)/sqrt n <= z) - Phi(z / sqrt chi_n)|
  std::optional<BimodalMass> bimodal;
};

/// log P(|S_n/n - center| > eps) from the exact law.
inline double log_tail_probability(const SpinCountLaw& law, double center, double eps) {
  std::vector<double> picked;
  for (long j = 0; j <= law.n; ++j) {
    if (std::fabs(law.x(j) - center) > eps) picked.push_back(law.log_p[j]);
  }
  return numerics::log_sum_exp(picked);
}

/// Kolmogorov distance between the lattice law of (S_n - E S_n)/sqrt(n) and
/// N(0, chi_n); both one-sided limits of the step CDF are compared at each atom.
inline double kolmogorov_distance(const SpinCountLaw& law) {
  const FiniteThermo th = finite_thermo(law);
  const double n = static_cast<double>(law.n);
  const double root_n = std::sqrt(n);
  const double sigma = std::sqrt(th.chi_n);
  long double below = 0.0L;
  double worst = 0.0;
  for (long j = 0; j <= law.n; ++j) {
    const double z = (static_cast<double>(2 * j) - n - n * th.M_n) / root_n;
    const double gauss = 0.5 * std::erfc(-z / (sigma * std::sqrt(2.0)));
    const double left = static_cast<double>(below);
    below += law.p[j];
    const double right = static_cast<double>(below);
    worst = std::max({worst, std::fabs(left - gauss), std::fabs(right - gauss)});
  }
  return worst;
}

inline LimitTheoremReport limit_theorem_report(const SpinCountLaw& law,
                                               const std::vector<double>& epsilons = {0.05,
                                                                                      0.1}) {
  LimitTheoremReport rep;
  rep.n = law.n;
  rep.params = law.params;
  rep.thermo = finite_thermo(law);
  const ThermoResult limit = pressure(law.params);
  for (double eps : epsilons) {
    const double lt = log_tail_probability(law, rep.thermo.M_n, eps);
    const double lt_limit = log_tail_probability(law, limit.M, eps);
    rep.lln.push_back({eps, std::exp(lt), lt, std::exp(lt_limit)});
  }
  rep.kolmogorov = kolmogorov_distance(law);
  const ModelParams& p = law.params;
  if (p.B == 0.0 && p.beta > critical_beta(p.d)) {
    BimodalMass mass{spontaneous_magnetization(p.beta, p.d),
                     std::pow(static_cast<double>(law.n), -1.0 / 6.0), 0.0, 0.0};
    long double plus = 0.0L;
    long double minus = 0.0L;
    for (long j = 0; j <= law.n; ++j) {
      if (std::fabs(law.x(j) - mass.nu) <= mass.window) plus += law.p[j];
      if (std::fabs(law.x(j) + mass.nu) <= mass.window) minus += law.p[j];
    }
    mass.plus = static_cast<double>(plus);
    mass.minus = static_cast<double>(minus);
    rep.bimodal = mass;
  }
  return rep;
}

inline LimitTheoremReport limit_theorem_report(long n, const ModelParams& params) {
  return limit_theorem_report(spin_count_law(n, params));
}

}  // namespace aising

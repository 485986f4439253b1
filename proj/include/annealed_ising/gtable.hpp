#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "annealed_ising/core_math.hpp"
#include "annealed_ising/errors.hpp"

namespace aising {

/// Exact transform g(beta, k, m) = E exp(-2 beta X(k, m)) of the cut size
/// X(k, m) of a uniform perfect matching on m half-edges, for 0 <= k <= m.
///
/// The ratios h(k, m) = g(k, m) / g(k-1, m) are produced by a forward
/// recursion up to the midpoint and kept in linear scale; g itself is stored
/// as a cumulative log-sum since it decays like e^{m F(k/m)}. The upper half
/// is filled from g(k, m) = g(m - k, m).
class GTable {
 public:
  GTable(double beta, long m) : beta_(beta), m_(m) {
    if (!(beta >= 0.0) || !std::isfinite(beta)) {
      throw DomainError("GTable: beta must be finite and >= 0");
    }
    if (m < 2 || m % 2 != 0) {
      throw DomainError("GTable: m must be even and >= 2, got " + std::to_string(m));
    }
    const long half = m / 2;
    const double c = std::exp(-2.0 * beta);
    const double cm1 = std::expm1(-2.0 * beta);
    h_.resize(static_cast<std::size_t>(half) + 1);
    log_h_.resize(h_.size());
    log_g_.resize(static_cast<std::size_t>(m) + 1);

    h_[0] = 1.0;  // unused slot, g(0)/g(-1) has no meaning
    log_h_[0] = 0.0;
    h_[1] = c;
    log_h_[1] = -2.0 * beta;
    for (long k = 1; k < half; ++k) {
      const double md = static_cast<double>(m);
      const double kd = static_cast<double>(k);
      // h(k+1) = c(m-2k)/(m-k) + k/((m-k) h(k)), rewritten around 1 so that
      // beta = 0 reproduces h = 1 exactly.
      h_[k + 1] =
          1.0 + (cm1 * (md - 2.0 * kd) + kd * (1.0 - h_[k]) / h_[k]) / (md - kd);
      log_h_[k + 1] = std::log(h_[k + 1]);
    }
    log_g_[0] = 0.0;
    for (long k = 1; k <= half; ++k) log_g_[k] = log_g_[k - 1] + log_h_[k];
    for (long k = half + 1; k <= m; ++k) log_g_[k] = log_g_[m - k];
  }

  [[nodiscard]] double beta() const { return beta_; }
  [[nodiscard]] long m() const { return m_; }

  /// log g(beta, k, m).
  [[nodiscard]] double log_g(long k) const { return log_g_.at(static_cast<std::size_t>(k)); }
  [[nodiscard]] double g(long k) const { return std::exp(log_g(k)); }

  /// h(k, m) for 1 <= k <= m/2.
  [[nodiscard]] double h(long k) const {
    if (k < 1 || k > m_ / 2) throw DomainError("GTable::h: k must lie in [1, m/2]");
    return h_[static_cast<std::size_t>(k)];
  }
  [[nodiscard]] double log_h(long k) const {
    if (k < 1 || k > m_ / 2) throw DomainError("GTable::log_h: k must lie in [1, m/2]");
    return log_h_[static_cast<std::size_t>(k)];
  }

  [[nodiscard]] const std::vector<double>& log_g_values() const { return log_g_; }

  /// CSV rows k,log_g,m*F(k/m),deviation.
  void write_csv(std::ostream& out) const {
    const Coupling coupling(beta_);
    out << "k,log_g,mF,deviation\n";
    char buf[128];
    for (long k = 0; k <= m_; ++k) {
      const double t = static_cast<double>(k) / static_cast<double>(m_);
      const double mF =
          static_cast<double>(m_) * detail::F_closed_form(coupling, std::min(t, 1.0 - t));
      std::snprintf(buf, sizeof buf, "%ld,%.17g,%.17g,%.17g\n", k, log_g(k), mF,
                    log_g(k) - mF);
      out << buf;
    }
  }

 private:
  double beta_;
  long m_;
  std::vector<double> h_;
  std::vector<double> log_h_;
  std::vector<double> log_g_;
};

inline GTable build_gtable(double beta, long m) { return GTable(beta, m); }

struct UniformBoundRow {
  long m;
  double max_deviation;  // max_k |log g(beta,k,m) - m F(k/m)|
};

/// Sup-norm distance between log g(beta, ., m) and m F(./m) for each m.
inline std::vector<UniformBoundRow> check_uniform_bound(double beta, const std::vector<long>& ms) {
  const Coupling coupling(beta);
  std::vector<UniformBoundRow> rows;
  rows.reserve(ms.size());
  for (long m : ms) {
    const GTable table(beta, m);
    double worst = 0.0;
    for (long k = 0; k <= m; ++k) {
      const double t = static_cast<double>(k) / static_cast<double>(m);
      const double mF =
          static_cast<double>(m) * detail::F_closed_form(coupling, std::min(t, 1.0 - t));
      worst = std::max(worst, std::fabs(table.log_g(k) - mF));
    }
    rows.push_back({m, worst});
  }
  return rows;
}

/// m * max_{1 <= k <= m/2} |h(k, m) - f((k-1)/m)|.
inline double check_h_approximation(double beta, long m) {
  if (m < 4) throw DomainError("check_h_approximation: m must be >= 4");
  const GTable table(beta, m);
  const Coupling coupling(beta);
  double worst = 0.0;
  for (long k = 1; k <= m / 2; ++k) {
    const double t = static_cast<double>(k - 1) / static_cast<double>(m);
    worst = std::max(worst, std::fabs(table.h(k) - coupling.f(t)));
  }
  return static_cast<double>(m) * worst;
}

}  // namespace aising

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "annealed_ising/core_math.hpp"
#include "annealed_ising/errors.hpp"
#include "annealed_ising/numerics/logsumexp.hpp"
#include "annealed_ising/numerics/optimize.hpp"
#include "annealed_ising/numerics/roots.hpp"

namespace aising {

enum class DegreeKind { deterministic, pmf, poisson, binomial };

struct DegreeAtom {
  long value;
  double log_prob;
};

/// Finite-support degree law. Poisson and binomial laws are stored truncated
/// and renormalised; for Poisson the discarded tail is reported by
/// log_tail_bound().
class DegreeDistribution {
 public:
  static DegreeDistribution deterministic(long d) {
    if (d < 0) throw DomainError("deterministic degree must be >= 0");
    DegreeDistribution out(DegreeKind::deterministic, "deterministic:" + std::to_string(d));
    out.atoms_.push_back({d, 0.0});
    return out;
  }

  /// Probabilities must be nonnegative and sum to 1 within 1e-12. Repeated
  /// values are merged and zero-probability entries dropped.
  static DegreeDistribution from_pmf(std::vector<std::pair<long, double>> entries) {
    if (entries.empty()) throw DomainError("pmf: empty support");
    double total = 0.0;
    for (const auto& [v, p] : entries) {
      if (v < 0) throw DomainError("pmf: degree values must be >= 0");
      if (!(p >= 0.0) || !std::isfinite(p)) throw DomainError("pmf: probabilities must be >= 0");
      total += p;
    }
    if (std::fabs(total - 1.0) > 1e-12) {
      throw DomainError("pmf: probabilities sum to " + std::to_string(total) + ", not 1");
    }
    std::sort(entries.begin(), entries.end());
    std::ostringstream name;
    name << "pmf:";
    DegreeDistribution out(DegreeKind::pmf, "");
    for (std::size_t i = 0; i < entries.size(); ++i) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%s%ld:%.17g", i ? "," : "", entries[i].first,
                    entries[i].second);
      name << buf;
      if (entries[i].second == 0.0) continue;
      if (!out.atoms_.empty() && out.atoms_.back().value == entries[i].first) {
        out.atoms_.back().log_prob =
            std::log(std::exp(out.atoms_.back().log_prob) + entries[i].second);
      } else {
        out.atoms_.push_back({entries[i].first, std::log(entries[i].second)});
      }
    }
    out.spec_ = name.str();
    out.renormalise();
    return out;
  }

  /// Poisson(gamma) truncated at the smallest K with
  ///   sum_{k > K} P(k) e^{s_max k} < 1e-14,
  /// but never beyond k_cap.
  static DegreeDistribution poisson(double gamma, double s_max = 10.0, long k_cap = 200) {
    if (!(gamma > 0.0) || !std::isfinite(gamma)) throw DomainError("poisson: gamma must be > 0");
    char buf[64];
    std::snprintf(buf, sizeof buf, "poisson:%.17g", gamma);
    DegreeDistribution out(DegreeKind::poisson, buf);
    out.gamma_ = gamma;
    out.s_max_ = s_max;
    const double lg = std::log(gamma);
    auto log_pmf = [&](long k) {
      return -gamma + static_cast<double>(k) * lg - std::lgamma(static_cast<double>(k) + 1.0);
    };
    // Terms P(k) e^{s_max k} peak near gamma e^{s_max} and then decay faster
    // than geometrically; they are listed until 40 e-folds below the peak.
    std::vector<double> terms;
    double peak = -std::numeric_limits<double>::infinity();
    for (long k = 0;; ++k) {
      const double v = log_pmf(k) + s_max * static_cast<double>(k);
      terms.push_back(v);
      peak = std::max(peak, v);
      const bool past_peak = static_cast<double>(k) > gamma * std::exp(s_max);
      if (k > k_cap && past_peak && v < peak - 40.0) break;
    }
    // suffix[k] = log sum_{i >= k} terms[i]
    std::vector<double> suffix(terms.size() + 1, -std::numeric_limits<double>::infinity());
    for (std::size_t k = terms.size(); k-- > 0;) {
      const double a = suffix[k + 1];
      const double b = terms[k];
      const double m = std::max(a, b);
      suffix[k] = m + std::log(std::exp(a - m) + std::exp(b - m));
    }
    const double target = std::log(1e-14);
    long K = 0;
    while (K < k_cap && suffix[static_cast<std::size_t>(K) + 1] >= target) ++K;
    for (long k = 0; k <= K; ++k) out.atoms_.push_back({k, log_pmf(k)});
    out.truncation_ = K;
    out.log_tail_bound_ = suffix[static_cast<std::size_t>(K) + 1];
    out.renormalise();
    return out;
  }

  /// Binomial(trials, q); atoms with log-probability below -700 are dropped.
  static DegreeDistribution binomial(long trials, double q) {
    if (trials < 0) throw DomainError("binomial: trials must be >= 0");
    if (!(q >= 0.0 && q <= 1.0)) throw DomainError("binomial: q must lie in [0, 1]");
    char buf[96];
    std::snprintf(buf, sizeof buf, "binomial:%ld:%.17g", trials, q);
    DegreeDistribution out(DegreeKind::binomial, buf);
    if (q == 0.0 || q == 1.0 || trials == 0) {
      out.atoms_.push_back({q == 1.0 ? trials : 0, 0.0});
      return out;
    }
    const double lq = std::log(q);
    const double lr = std::log1p(-q);
    for (long k = 0; k <= trials; ++k) {
      const double lp = numerics::log_binomial(trials, k) + static_cast<double>(k) * lq +
                        static_cast<double>(trials - k) * lr;
      if (lp > -700.0) out.atoms_.push_back({k, lp});
    }
    out.renormalise();
    return out;
  }

  /// Parses deterministic:d, pmf:v1:p1,v2:p2,..., poisson:gamma or
  /// binomial:trials:q.
  static DegreeDistribution parse(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw DomainError("degree distribution '" + text + "': missing ':'");
    const std::string kind = text.substr(0, colon);
    const std::string rest = text.substr(colon + 1);
    try {
      if (kind == "deterministic") return deterministic(parse_long(rest));
      if (kind == "poisson") return poisson(parse_double(rest));
      if (kind == "binomial") {
        const auto c2 = rest.find(':');
        if (c2 == std::string::npos) throw DomainError("binomial needs trials:q");
        return binomial(parse_long(rest.substr(0, c2)), parse_double(rest.substr(c2 + 1)));
      }
      if (kind == "pmf") {
        std::vector<std::pair<long, double>> entries;
        std::stringstream ss(rest);
        std::string item;
        while (std::getline(ss, item, ',')) {
          const auto c2 = item.find(':');
          if (c2 == std::string::npos) throw DomainError("pmf entry '" + item + "' needs v:p");
          entries.emplace_back(parse_long(item.substr(0, c2)), parse_double(item.substr(c2 + 1)));
        }
        return from_pmf(std::move(entries));
      }
    } catch (const std::invalid_argument&) {
      throw DomainError("degree distribution '" + text + "': malformed number");
    } catch (const std::out_of_range&) {
      throw DomainError("degree distribution '" + text + "': number out of range");
    }
    throw DomainError("unknown degree distribution kind '" + kind + "'");
  }

  [[nodiscard]] DegreeKind kind() const { return kind_; }
  [[nodiscard]] const std::string& spec() const { return spec_; }
  [[nodiscard]] const std::vector<DegreeAtom>& atoms() const { return atoms_; }
  [[nodiscard]] long min_value() const { return atoms_.front().value; }
  [[nodiscard]] long max_value() const { return atoms_.back().value; }
  [[nodiscard]] bool degenerate() const { return atoms_.size() == 1; }
  /// Largest retained value for truncated laws, -1 otherwise.
  [[nodiscard]] long truncation() const { return truncation_; }
  /// log of sum_{k > K} P(k) e^{s_max k} for Poisson laws, -inf otherwise.
  [[nodiscard]] double log_tail_bound() const { return log_tail_bound_; }
  [[nodiscard]] double s_max() const { return s_max_; }
  [[nodiscard]] double gamma() const { return gamma_; }

  [[nodiscard]] double mean() const {
    long double m = 0.0L;
    for (const auto& a : atoms_) m += std::exp(static_cast<long double>(a.log_prob)) * a.value;
    return static_cast<double>(m);
  }

  /// -log P(D = v); +infinity when v is not an atom.
  [[nodiscard]] double neg_log_prob(long v) const {
    for (const auto& a : atoms_) {
      if (a.value == v) return -a.log_prob;
    }
    return std::numeric_limits<double>::infinity();
  }

 private:
  DegreeDistribution(DegreeKind kind, std::string spec) : kind_(kind), spec_(std::move(spec)) {}

  static long parse_long(const std::string& s) {
    std::size_t used = 0;
    const long v = std::stol(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  }
  static double parse_double(const std::string& s) {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  }

  void renormalise() {
    std::vector<double> lp;
    lp.reserve(atoms_.size());
    for (const auto& a : atoms_) lp.push_back(a.log_prob);
    const double shift = numerics::log_sum_exp(lp);
    for (auto& a : atoms_) a.log_prob -= shift;
  }

  DegreeKind kind_;
  std::string spec_;
  std::vector<DegreeAtom> atoms_;
  long truncation_ = -1;
  double log_tail_bound_ = -std::numeric_limits<double>::infinity();
  double s_max_ = 0.0;
  double gamma_ = 0.0;
};

struct CumulantPoint {
  double value;  // Lambda(s)
  double slope;  // Lambda'(s), the mean of the s-tilted law
};

/// Lambda(s) = log E e^{sD} together with Lambda'(s), in one pass.
inline CumulantPoint cumulant(const DegreeDistribution& dist, double s) {
  const auto& atoms = dist.atoms();
  double shift = -std::numeric_limits<double>::infinity();
  for (const auto& a : atoms) shift = std::max(shift, a.log_prob + s * static_cast<double>(a.value));
  long double sum = 0.0L;
  long double first = 0.0L;
  for (const auto& a : atoms) {
    const long double w = std::exp(static_cast<long double>(a.log_prob + s * a.value - shift));
    sum += w;
    first += w * a.value;
  }
  return {shift + static_cast<double>(std::log(sum)), static_cast<double>(first / sum)};
}

inline double lambda_fn(const DegreeDistribution& dist, double s) { return cumulant(dist, s).value; }

/// Lambda*(x) = sup_s {xs - Lambda(s)}: +infinity outside the support hull,
/// -log P(D = x) at its endpoints, and xs - Lambda(s) at the root of
/// Lambda'(s) = x inside.
inline double lambda_star(const DegreeDistribution& dist, double x) {
  const double inf = std::numeric_limits<double>::infinity();
  const double lo = static_cast<double>(dist.min_value());
  const double hi = static_cast<double>(dist.max_value());
  if (!(x >= lo && x <= hi)) return inf;
  if (x == lo) return dist.neg_log_prob(dist.min_value());
  if (x == hi) return dist.neg_log_prob(dist.max_value());
  auto gap = [&](double s) { return cumulant(dist, s).slope - x; };
  double s_lo = -1.0;
  double s_hi = 1.0;
  // Lambda' sweeps (lo, hi) monotonically; widen until x is bracketed. When x
  // sits within rounding of an endpoint the bracket never closes and the
  // endpoint value is the limit.
  while (gap(s_lo) > 0.0) {
    s_lo *= 2.0;
    if (s_lo < -1e6) return dist.neg_log_prob(dist.min_value());
  }
  while (gap(s_hi) < 0.0) {
    s_hi *= 2.0;
    if (s_hi > 1e6) return dist.neg_log_prob(dist.max_value());
  }
  const double s = numerics::solve_root_bracketed(gap, s_lo, s_hi, 1e-13);
  return std::max(0.0, x * s - lambda_fn(dist, s));
}

/// The variational function
///   G(beta, t) = sup_{a,b} { b(beta/2 + F(a/b)) - t Lambda*(a/t)
///                            - (1-t) Lambda*((b-a)/(1-t)) }.
///
/// Writing a = t Lambda'(s1) and b - a = (1-t) Lambda'(s2) makes both
/// conjugate terms explicit, Lambda*(Lambda'(s)) = s Lambda'(s) - Lambda(s),
/// and every stationary point has s1, s2 in [-5 beta/2, beta/2] because
/// F <= 0, F is convex and |F'| <= 2 beta. The search runs on a 128 x 128
/// grid of that box followed by Nelder-Mead refinement.
class GSolver {
 public:
  static constexpr int kGrid = 128;

  GSolver(DegreeDistribution dist, double beta)
      : dist_(std::move(dist)), beta_(beta), coupling_(beta) {
    if (!(beta >= 0.0) || !std::isfinite(beta)) throw DomainError("G: beta must be finite and >= 0");
    s_lo_ = -2.5 * beta;
    s_hi_ = 0.5 * beta;
    edge_value_ = lambda_fn(dist_, 0.5 * beta);
    grid_.resize(kGrid);
    for (int i = 0; i < kGrid; ++i) {
      const double s = s_lo_ + (s_hi_ - s_lo_) * i / (kGrid - 1);
      grid_[i] = node(s);
    }
  }

  [[nodiscard]] const DegreeDistribution& distribution() const { return dist_; }
  [[nodiscard]] double beta() const { return beta_; }

  /// G(beta, t) to about 1e-10.
  [[nodiscard]] double value(double t) const { return evaluate(t, true); }

  /// Grid-only lower approximation of G(beta, t).
  [[nodiscard]] double coarse_value(double t) const { return evaluate(t, false); }

 private:
  struct Node {
    double s;
    double x;     // Lambda'(s)
    double star;  // Lambda*(x) = s x - Lambda(s)
  };

  [[nodiscard]] Node node(double s) const {
    const CumulantPoint cp = cumulant(dist_, s);
    return {s, cp.slope, std::max(0.0, s * cp.slope - cp.value)};
  }

  [[nodiscard]] double objective(double t, const Node& a, const Node& b) const {
    const double mass = t * a.x + (1.0 - t) * b.x;
    double edge = 0.5 * beta_ * mass;
    if (mass > 0.0) {
      const double u = std::clamp(t * a.x / mass, 0.0, 1.0);
      edge += mass * detail::F_closed_form(coupling_, std::min(u, 1.0 - u));
    }
    return edge - t * a.star - (1.0 - t) * b.star;
  }

  [[nodiscard]] double evaluate(double t, bool refine) const {
    if (!(t >= 0.0 && t <= 1.0)) throw DomainError("G: t must lie in [0, 1]");
    if (dist_.degenerate()) {
      const double d = static_cast<double>(dist_.min_value());
      return d * (0.5 * beta_ + detail::F_closed_form(coupling_, std::min(t, 1.0 - t)));
    }
    if (t == 0.0 || t == 1.0) return edge_value_;
    if (beta_ == 0.0) {
      const Node mid = node(0.0);
      return objective(t, mid, mid);
    }
    double best = -std::numeric_limits<double>::infinity();
    int bi = 0;
    int bj = 0;
    for (int i = 0; i < kGrid; ++i) {
      for (int j = 0; j < kGrid; ++j) {
        const double v = objective(t, grid_[i], grid_[j]);
        if (v > best) {
          best = v;
          bi = i;
          bj = j;
        }
      }
    }
    if (!refine) return best;
    const double step = (s_hi_ - s_lo_) / (kGrid - 1);
    auto fn = [&](const std::array<double, 2>& s) {
      return objective(t, node(s[0]), node(s[1]));
    };
    numerics::NelderMeadOptions opts;
    opts.f_tol = 1e-15;
    opts.x_tol = 1e-9;
    opts.max_evaluations = 2000;
    const auto res = numerics::nelder_mead_maximize<2>(
        fn, {grid_[bi].s, grid_[bj].s}, {0.5 * step, 0.5 * step}, opts);
    return std::max(best, res.value);
  }

  DegreeDistribution dist_;
  double beta_;
  Coupling coupling_;
  double s_lo_ = 0.0;
  double s_hi_ = 0.0;
  double edge_value_ = 0.0;
  std::vector<Node> grid_;
};

inline double G_limit(const DegreeDistribution& dist, double beta, double t) {
  return GSolver(dist, beta).value(t);
}

struct CmPressureResult {
  double psi;
  double t_star;  // a maximiser of I(t) + 2Bt + G(beta, t)
};

/// psi(beta, B) = -B + max_t [I(t) + 2Bt + G(beta, t)]: a 512-point seed grid
/// with grid-only G, then golden-section refinement with the full G around
/// every seed local maximum within 1e-2 of the best seed.
inline CmPressureResult cm_pressure_detail(const GSolver& solver, double B) {
  if (!std::isfinite(B)) throw DomainError("cm_pressure: B must be finite");
  if (solver.beta() == 0.0) {
    // G(0, .) vanishes, so the maximiser is the independent-spin one.
    const double t = 1.0 / (1.0 + std::exp(-2.0 * B));
    return {std::fabs(B) + std::log1p(std::exp(-2.0 * std::fabs(B))), t};
  }
  constexpr int kSeeds = 512;
  auto total = [&](double t, bool full) {
    const double g = full ? solver.value(t) : solver.coarse_value(t);
    return detail::entropy(std::min(t, 1.0 - t)) + 2.0 * B * t + g;
  };
  std::vector<double> seed(kSeeds);
  for (int i = 0; i < kSeeds; ++i) seed[i] = total(static_cast<double>(i) / (kSeeds - 1), false);
  const double top = *std::max_element(seed.begin(), seed.end());
  CmPressureResult best{-std::numeric_limits<double>::infinity(), 0.0};
  for (int i = 0; i < kSeeds; ++i) {
    const bool left_ok = i == 0 || seed[i] >= seed[i - 1];
    const bool right_ok = i == kSeeds - 1 || seed[i] >= seed[i + 1];
    if (!(left_ok && right_ok) || seed[i] < top - 1e-2) continue;
    const double lo = static_cast<double>(std::max(i - 2, 0)) / (kSeeds - 1);
    const double hi = static_cast<double>(std::min(i + 2, kSeeds - 1)) / (kSeeds - 1);
    const auto m = numerics::golden_section_maximize([&](double t) { return total(t, true); }, lo,
                                                     hi, 1e-9);
    if (m.value > best.psi) best = {m.value, m.x};
  }
  best.psi -= B;
  return best;
}

inline double cm_pressure(const DegreeDistribution& dist, double beta, double B) {
  return cm_pressure_detail(GSolver(dist, beta), B).psi;
}

struct CmThermo {
  double psi;
  double t_star;
  double M;    // 2 t_star - 1
  double chi;  // second B-derivative of psi
};

/// Pressure with magnetisation and susceptibility. At beta = 0 both are
/// closed; otherwise chi is a central second difference with step `h`.
inline CmThermo cm_thermo(const GSolver& solver, double B, double h = 1e-3) {
  const CmPressureResult mid = cm_pressure_detail(solver, B);
  CmThermo out{mid.psi, mid.t_star, 2.0 * mid.t_star - 1.0, 0.0};
  if (solver.beta() == 0.0) {
    out.chi = 4.0 * mid.t_star * (1.0 - mid.t_star);
  } else {
    const double up = cm_pressure_detail(solver, B + h).psi;
    const double down = cm_pressure_detail(solver, B - h).psi;
    out.chi = (up - 2.0 * mid.psi + down) / (h * h);
  }
  return out;
}

/// CSV rows t,G on an evenly spaced grid of `points` values in [0, 1].
inline void write_G_curve(std::ostream& out, const GSolver& solver, int points) {
  if (points < 2) throw DomainError("G curve needs at least 2 points");
  out << "t,G\n";
  char buf[96];
  for (int i = 0; i < points; ++i) {
    const double t = static_cast<double>(i) / (points - 1);
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", t, solver.value(t));
    out << buf;
  }
}

}  // namespace aising

#pragma once

#include <boost/math/distributions/chi_squared.hpp>

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "annealed_ising/core_math.hpp"
#include "annealed_ising/errors.hpp"

namespace aising {

/// SplitMix64: the n-th output is a fixed bijective mix of seed + n * phi, so a
/// seed fully determines the stream.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform integer in [0, bound), bound > 0, by Lemire's multiply-and-reject.
  std::uint64_t below(std::uint64_t bound) {
    unsigned __int128 product = static_cast<unsigned __int128>(next()) * bound;
    auto low = static_cast<std::uint64_t>(product);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        product = static_cast<unsigned __int128>(next()) * bound;
        low = static_cast<std::uint64_t>(product);
      }
    }
    return static_cast<std::uint64_t>(product >> 64);
  }

 private:
  std::uint64_t state_;
};

/// A perfect matching of half-edges 0..m-1.
struct Matching {
  long m = 0;
  std::vector<std::pair<long, long>> pairs;
};

namespace detail {

inline void check_even_count(long m, const char* what) {
  if (m < 2 || m % 2 != 0) {
    throw DomainError(std::string(what) + ": need an even number >= 2 of half-edges, got " +
                      std::to_string(m));
  }
}

// Sequential uniform pairing: the last unpaired half-edge is matched to a
// uniformly chosen other unpaired half-edge. Writes into `pairs`.
inline void pair_up(std::vector<long>& pool, SplitMix64& rng,
                    std::vector<std::pair<long, long>>& pairs) {
  pairs.clear();
  while (!pool.empty()) {
    const long first = pool.back();
    pool.pop_back();
    const auto pick = static_cast<std::size_t>(rng.below(pool.size()));
    pairs.emplace_back(first, pool[pick]);
    pool[pick] = pool.back();
    pool.pop_back();
  }
}

}  // namespace detail

/// A uniform perfect matching on m half-edges (m even).
inline Matching sample_matching(long m, SplitMix64& rng) {
  detail::check_even_count(m, "sample_matching");
  std::vector<long> pool(static_cast<std::size_t>(m));
  std::iota(pool.begin(), pool.end(), 0L);
  Matching out;
  out.m = m;
  detail::pair_up(pool, rng, out.pairs);
  return out;
}

inline Matching sample_matching(long m, std::uint64_t seed) {
  SplitMix64 rng(seed);
  return sample_matching(m, rng);
}

/// Number of pairs joining a half-edge below k to one at or above k.
inline long cut_size(const Matching& matching, long k) {
  long cut = 0;
  for (const auto& [a, b] : matching.pairs) cut += ((a < k) != (b < k)) ? 1 : 0;
  return cut;
}

/// Exact pmf of X(k, m), indexed by cut size, from all (m-1)!! matchings.
inline std::vector<double> enumerate_X_pmf(long k, long m) {
  detail::check_even_count(m, "enumerate_X_pmf");
  if (m > 12) throw DomainError("enumerate_X_pmf: m must be <= 12");
  if (k < 0 || k > m) throw DomainError("enumerate_X_pmf: k must lie in [0, m]");
  std::vector<double> counts(static_cast<std::size_t>(m / 2) + 1, 0.0);
  double total = 0.0;
  std::vector<int> rest(static_cast<std::size_t>(m));
  std::iota(rest.begin(), rest.end(), 0);
  std::function<void(std::vector<int>&, long)> walk = [&](std::vector<int>& live, long cut) {
    if (live.empty()) {
      counts[static_cast<std::size_t>(cut)] += 1.0;
      total += 1.0;
      return;
    }
    const int a = live.back();
    live.pop_back();
    for (std::size_t j = 0; j < live.size(); ++j) {
      const int b = live[j];
      std::vector<int> next;
      next.reserve(live.size() - 1);
      for (std::size_t i = 0; i < live.size(); ++i) {
        if (i != j) next.push_back(live[i]);
      }
      walk(next, cut + (((a < k) != (b < k)) ? 1 : 0));
    }
    live.push_back(a);
  };
  walk(rest, 0);
  for (double& c : counts) c /= total;
  while (counts.size() > 1 && counts.back() == 0.0) counts.pop_back();
  return counts;
}

struct McEstimate {
  double estimate;
  double std_error;
};

/// Sample mean and standard error of exp(-2 beta X(k, m)).
inline McEstimate mc_estimate_g(double beta, long k, long m, long n_samples, std::uint64_t seed) {
  if (!(beta >= 0.0)) throw DomainError("mc_estimate_g: beta must be >= 0");
  detail::check_even_count(m, "mc_estimate_g");
  if (k < 0 || k > m) throw DomainError("mc_estimate_g: k must lie in [0, m]");
  if (n_samples < 1000) throw DomainError("mc_estimate_g: need at least 1000 samples");
  SplitMix64 rng(seed);
  std::vector<long> pool(static_cast<std::size_t>(m));
  std::vector<std::pair<long, long>> pairs;
  long double sum = 0.0L;
  long double sum_sq = 0.0L;
  for (long s = 0; s < n_samples; ++s) {
    pool.resize(static_cast<std::size_t>(m));
    std::iota(pool.begin(), pool.end(), 0L);
    detail::pair_up(pool, rng, pairs);
    long cut = 0;
    for (const auto& [a, b] : pairs) cut += ((a < k) != (b < k)) ? 1 : 0;
    const long double v = std::exp(-2.0L * beta * cut);
    sum += v;
    sum_sq += v * v;
  }
  const long double mean = sum / n_samples;
  const long double var = std::max(0.0L, (sum_sq / n_samples - mean * mean)) *
                          n_samples / (n_samples - 1);
  return {static_cast<double>(mean), static_cast<double>(std::sqrt(var / n_samples))};
}

/// Multigraph edge list on vertices 0..n-1; self-loops and repeated edges kept.
using EdgeList = std::vector<std::pair<long, long>>;

/// Configuration-model multigraph for the given degree sequence; half-edges
/// are numbered vertex by vertex.
inline EdgeList sample_degree_graph(const std::vector<long>& degrees, SplitMix64& rng) {
  long total = 0;
  for (long d : degrees) {
    if (d < 0) throw DomainError("sample_degree_graph: degrees must be >= 0");
    total += d;
  }
  if (total % 2 != 0) {
    throw DomainError("sample_degree_graph: degree sum " + std::to_string(total) +
                      " is odd: the half-edges cannot be paired into a perfect matching");
  }
  std::vector<long> owner;
  owner.reserve(static_cast<std::size_t>(total));
  for (std::size_t v = 0; v < degrees.size(); ++v) {
    for (long i = 0; i < degrees[v]; ++i) owner.push_back(static_cast<long>(v));
  }
  std::vector<long> pool(owner.size());
  std::iota(pool.begin(), pool.end(), 0L);
  std::vector<std::pair<long, long>> pairs;
  detail::pair_up(pool, rng, pairs);
  EdgeList edges;
  edges.reserve(pairs.size());
  for (const auto& [a, b] : pairs) edges.emplace_back(owner[a], owner[b]);
  return edges;
}

inline EdgeList sample_degree_graph(const std::vector<long>& degrees, std::uint64_t seed) {
  SplitMix64 rng(seed);
  return sample_degree_graph(degrees, rng);
}

inline void write_edge_list_csv(std::ostream& out, const EdgeList& edges) {
  out << "u,v\n";
  for (const auto& [a, b] : edges) out << a << ',' << b << '\n';
}

/// Edges with exactly one endpoint in the vertex set flagged by `in_set`,
/// counted with multiplicity; self-loops never count.
inline long edge_cut(const EdgeList& edges, const std::vector<bool>& in_set) {
  long cut = 0;
  for (const auto& [a, b] : edges) cut += (in_set[a] != in_set[b]) ? 1 : 0;
  return cut;
}

/// Monte Carlo estimate of (1/n) log E Z_n over sampled d-regular multigraphs;
/// Z_n of each graph is summed exactly over all 2^n spin configurations with
///   -H(sigma) = beta (edges - 2 cut(sigma)) + B (2|sigma_+| - n).
/// The standard error uses the delta method on the log.
inline McEstimate mc_estimate_EZ(long n, const ModelParams& params, long n_samples,
                                 std::uint64_t seed) {
  params.validate();
  if (n < 1 || n > 16) throw DomainError("mc_estimate_EZ: n must lie in [1, 16]");
  if ((n * params.d) % 2 != 0) {
    throw DomainError("mc_estimate_EZ: d*n is odd: the half-edges cannot be paired into a perfect matching");
  }
  if (n_samples < 1) throw DomainError("mc_estimate_EZ: need at least one sample");
  const std::vector<long> degrees(static_cast<std::size_t>(n), params.d);
  const double edges = 0.5 * static_cast<double>(n * params.d);
  // all terms are scaled by e^{-shift} to keep them below 1
  const double shift = params.beta * edges + std::fabs(params.B) * static_cast<double>(n);
  const long configs = 1L << n;
  std::vector<double> field_term(static_cast<std::size_t>(configs));
  for (long mask = 0; mask < configs; ++mask) {
    const int plus = __builtin_popcountl(static_cast<unsigned long>(mask));
    field_term[mask] = params.B * static_cast<double>(2 * plus - n);
  }
  SplitMix64 rng(seed);
  long double sum = 0.0L;
  long double sum_sq = 0.0L;
  for (long s = 0; s < n_samples; ++s) {
    const EdgeList graph = sample_degree_graph(degrees, rng);
    long double z = 0.0L;
    for (long mask = 0; mask < configs; ++mask) {
      long cut = 0;
      for (const auto& [a, b] : graph) cut += ((mask >> a) ^ (mask >> b)) & 1L;
      z += std::exp(static_cast<long double>(params.beta * (edges - 2.0 * cut) +
                                             field_term[mask] - shift));
    }
    sum += z;
    sum_sq += z * z;
  }
  const long double mean = sum / n_samples;
  const long double var =
      n_samples > 1
          ? std::max(0.0L, sum_sq / n_samples - mean * mean) * n_samples / (n_samples - 1)
          : 0.0L;
  const double nd = static_cast<double>(n);
  const double estimate = (shift + static_cast<double>(std::log(mean))) / nd;
  const double se = static_cast<double>(std::sqrt(var / n_samples) / mean) / nd;
  return {estimate, se};
}

struct ChiSquareTest {
  double statistic;
  int dof;
  double p_value;
};

/// Pearson goodness-of-fit of observed counts against category probabilities.
/// Categories with zero probability must have zero counts.
inline ChiSquareTest chi_square_goodness(const std::vector<long>& counts,
                                         const std::vector<double>& probs) {
  if (counts.size() != probs.size()) throw DomainError("chi_square_goodness: size mismatch");
  long total = 0;
  for (long c : counts) total += c;
  double stat = 0.0;
  int cells = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const double expected = probs[i] * static_cast<double>(total);
    if (expected == 0.0) {
      if (counts[i] != 0) return {std::numeric_limits<double>::infinity(), 0, 0.0};
      continue;
    }
    ++cells;
    const double diff = static_cast<double>(counts[i]) - expected;
    stat += diff * diff / expected;
  }
  const int dof = cells - 1;
  if (dof < 1) return {stat, dof, 1.0};
  const boost::math::chi_squared dist(dof);
  return {stat, dof, boost::math::cdf(boost::math::complement(dist, stat))};
}

/// Pearson test that two count vectors over the same categories come from the
/// same distribution; categories empty in both samples are dropped.
inline ChiSquareTest chi_square_homogeneity(const std::vector<long>& a, const std::vector<long>& b) {
  if (a.size() != b.size()) throw DomainError("chi_square_homogeneity: size mismatch");
  double na = 0.0;
  double nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    na += static_cast<double>(a[i]);
    nb += static_cast<double>(b[i]);
  }
  double stat = 0.0;
  int cells = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double col = static_cast<double>(a[i] + b[i]);
    if (col == 0.0) continue;
    ++cells;
    const double ea = col * na / (na + nb);
    const double eb = col * nb / (na + nb);
    stat += (a[i] - ea) * (a[i] - ea) / ea + (b[i] - eb) * (b[i] - eb) / eb;
  }
  const int dof = cells - 1;
  if (dof < 1) return {stat, dof, 1.0};
  const boost::math::chi_squared dist(dof);
  return {stat, dof, boost::math::cdf(boost::math::complement(dist, stat))};
}

struct CutLawComparison {
  std::vector<long> matching_counts;  // histogram of X(d|A|, dn)
  std::vector<long> graph_counts;     // histogram of e(A, A^c) on sampled graphs
  ChiSquareTest test;
};

/// Two-sample check that the cut e(A, A^c) of a random d-regular multigraph on
/// n vertices has the law of X(d|A|, dn), whatever vertices A contains.
inline CutLawComparison compare_cut_laws(long n, int d, const std::vector<long>& vertex_set,
                                         long draws, std::uint64_t seed_matching,
                                         std::uint64_t seed_graph) {
  const long m = n * d;
  detail::check_even_count(m, "compare_cut_laws");
  std::vector<bool> in_set(static_cast<std::size_t>(n), false);
  for (long v : vertex_set) {
    if (v < 0 || v >= n || in_set[v]) throw DomainError("compare_cut_laws: bad vertex set");
    in_set[v] = true;
  }
  const long k = d * static_cast<long>(vertex_set.size());
  const auto bins = static_cast<std::size_t>(m / 2 + 1);
  CutLawComparison out{std::vector<long>(bins, 0), std::vector<long>(bins, 0), {}};
  SplitMix64 rng_m(seed_matching);
  for (long i = 0; i < draws; ++i) ++out.matching_counts[cut_size(sample_matching(m, rng_m), k)];
  SplitMix64 rng_g(seed_graph);
  const std::vector<long> degrees(static_cast<std::size_t>(n), d);
  for (long i = 0; i < draws; ++i) {
    ++out.graph_counts[edge_cut(sample_degree_graph(degrees, rng_g), in_set)];
  }
  out.test = chi_square_homogeneity(out.matching_counts, out.graph_counts);
  return out;
}

}  // namespace aising

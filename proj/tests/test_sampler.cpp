#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "annealed_ising/finite.hpp"
#include "annealed_ising/gtable.hpp"
#include "annealed_ising/sampler.hpp"

using namespace aising;

TEST(Rng, DeterministicAndBounded) {
  SplitMix64 a(42);
  SplitMix64 b(42);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next(), b.next());
  SplitMix64 c(1);
  std::vector<long> counts(7, 0);
  for (int i = 0; i < 70000; ++i) {
    const auto v = c.below(7);
    ASSERT_LT(v, 7u);
    ++counts[v];
  }
  std::vector<double> probs(7, 1.0 / 7.0);
  EXPECT_GT(chi_square_goodness(counts, probs).p_value, 0.001);
}

TEST(SampleMatching, Structure) {
  const Matching two = sample_matching(2, 99);
  ASSERT_EQ(two.pairs.size(), 1u);
  EXPECT_EQ(std::min(two.pairs[0].first, two.pairs[0].second), 0);
  EXPECT_EQ(std::max(two.pairs[0].first, two.pairs[0].second), 1);
  const Matching big = sample_matching(50, 5);
  std::set<long> seen;
  for (const auto& [a, b] : big.pairs) {
    EXPECT_TRUE(seen.insert(a).second);
    EXPECT_TRUE(seen.insert(b).second);
  }
  EXPECT_EQ(seen.size(), 50u);
  EXPECT_THROW(sample_matching(5, 1), DomainError);
}

TEST(SampleMatching, FixedSeedReproduces) {
  SplitMix64 r1(2024);
  SplitMix64 r2(2024);
  for (int i = 0; i < 20; ++i) EXPECT_EQ(sample_matching(12, r1).pairs, sample_matching(12, r2).pairs);
}

TEST(SampleMatching, UniformOnFourHalfEdges) {
  SplitMix64 rng(11);
  std::vector<long> counts(3, 0);
  const long draws = 100000;
  for (long i = 0; i < draws; ++i) {
    const Matching mt = sample_matching(4, rng);
    for (const auto& [a, b] : mt.pairs) {
      if (a == 0) ++counts[b - 1];
      if (b == 0) ++counts[a - 1];
    }
  }
  const double sigma = std::sqrt(draws * (1.0 / 3.0) * (2.0 / 3.0));
  for (long c : counts) EXPECT_NEAR(static_cast<double>(c), draws / 3.0, 3.0 * sigma);
  EXPECT_GT(chi_square_goodness(counts, {1.0 / 3, 1.0 / 3, 1.0 / 3}).p_value, 0.01);
}

TEST(EnumerateX, SmallCases) {
  for (long m : {2L, 6L, 12L}) {
    EXPECT_EQ(enumerate_X_pmf(0, m), std::vector<double>{1.0});
    const auto one = enumerate_X_pmf(1, m);
    ASSERT_EQ(one.size(), 2u);
    EXPECT_EQ(one[1], 1.0);
  }
  const auto x24 = enumerate_X_pmf(2, 4);
  ASSERT_EQ(x24.size(), 3u);
  EXPECT_NEAR(x24[0], 1.0 / 3.0, 1e-15);
  EXPECT_EQ(x24[1], 0.0);
  EXPECT_NEAR(x24[2], 2.0 / 3.0, 1e-15);
  EXPECT_THROW(enumerate_X_pmf(2, 14), DomainError);
}

TEST(EnumerateX, ParityAndSymmetry) {
  for (long m = 2; m <= 12; m += 2) {
    for (long k = 0; k <= m; ++k) {
      const auto pmf = enumerate_X_pmf(k, m);
      const auto mirror = enumerate_X_pmf(m - k, m);
      ASSERT_EQ(pmf.size(), mirror.size());
      for (std::size_t x = 0; x < pmf.size(); ++x) {
        EXPECT_NEAR(pmf[x], mirror[x], 1e-15);
        if (static_cast<long>(x) % 2 != k % 2) {
          EXPECT_EQ(pmf[x], 0.0);
        }
      }
    }
  }
}

TEST(EnumerateX, DistributionalRecursion) {
  // X(k, m) = X(k-2, m-2) w.p. (k-1)/(m-1), else 1 + X(k-1, m-2)
  for (long m = 4; m <= 10; m += 2) {
    for (long k = 2; k <= m / 2; ++k) {
      const auto lhs = enumerate_X_pmf(k, m);
      const auto same = enumerate_X_pmf(k - 2, m - 2);
      const auto cross = enumerate_X_pmf(k - 1, m - 2);
      std::vector<double> rhs(lhs.size() + 2, 0.0);
      const double w = static_cast<double>(k - 1) / static_cast<double>(m - 1);
      for (std::size_t x = 0; x < same.size(); ++x) rhs[x] += w * same[x];
      for (std::size_t x = 0; x < cross.size(); ++x) rhs[x + 1] += (1.0 - w) * cross[x];
      for (std::size_t x = 0; x < rhs.size(); ++x) {
        EXPECT_NEAR(x < lhs.size() ? lhs[x] : 0.0, rhs[x], 1e-14) << k << " " << m;
      }
    }
  }
}

TEST(EnumerateX, AnchorsRecursion) {
  for (double beta : {0.3, 1.0, 3.0}) {
    for (long m = 2; m <= 12; m += 2) {
      const GTable table(beta, m);
      for (long k = 0; k <= m; ++k) {
        const auto pmf = enumerate_X_pmf(k, m);
        double g = 0.0;
        for (std::size_t x = 0; x < pmf.size(); ++x) g += pmf[x] * std::exp(-2.0 * beta * x);
        EXPECT_NEAR(table.g(k), g, 1e-12);
      }
    }
  }
}

TEST(McG, Estimates) {
  const McEstimate zero = mc_estimate_g(1.0, 0, 10, 1000, 3);
  EXPECT_EQ(zero.estimate, 1.0);
  EXPECT_EQ(zero.std_error, 0.0);
  const McEstimate small = mc_estimate_g(0.5, 2, 4, 100000, 17);
  EXPECT_NEAR(small.estimate, (1.0 + 2.0 * std::exp(-2.0)) / 3.0, 3.0 * small.std_error);
  const McEstimate mid = mc_estimate_g(1.0, 7, 30, 100000, 23);
  EXPECT_NEAR(mid.estimate, GTable(1.0, 30).g(7), 3.0 * mid.std_error);
  EXPECT_THROW(mc_estimate_g(1.0, 2, 4, 10, 1), DomainError);
}

TEST(DegreeGraph, Basics) {
  const EdgeList single = sample_degree_graph({1, 1}, 0);
  ASSERT_EQ(single.size(), 1u);
  EXPECT_EQ(std::min(single[0].first, single[0].second), 0);
  EXPECT_EQ(std::max(single[0].first, single[0].second), 1);
  EXPECT_THROW(sample_degree_graph({1, 2}, 0), DomainError);
  const EdgeList g = sample_degree_graph({3, 1, 2, 2}, 8);
  std::map<long, long> degree;
  for (const auto& [a, b] : g) {
    ++degree[a];
    ++degree[b];
  }
  EXPECT_EQ(degree[0], 3);
  EXPECT_EQ(degree[1], 1);
  EXPECT_EQ(degree[2], 2);
  EXPECT_EQ(degree[3], 2);
  std::ostringstream out;
  write_edge_list_csv(out, single);
  EXPECT_EQ(out.str().substr(0, 4), "u,v\n");
}

TEST(DegreeGraph, CutLawMatchesMatchingCut) {
  const CutLawComparison cmp = compare_cut_laws(6, 2, {1, 3, 5}, 100000, 101, 202);
  EXPECT_GT(cmp.test.p_value, 0.01);
  // the graph route also fits the exact pmf
  const auto exact = enumerate_X_pmf(6, 12);
  std::vector<double> probs(cmp.graph_counts.size(), 0.0);
  for (std::size_t x = 0; x < exact.size(); ++x) probs[x] = exact[x];
  EXPECT_GT(chi_square_goodness(cmp.graph_counts, probs).p_value, 0.01);
}

TEST(McEZ, ExactCases) {
  for (double B : {0.0, 0.7}) {
    const McEstimate one = mc_estimate_EZ(1, {0.8, B, 2}, 50, 4);
    EXPECT_NEAR(one.estimate, 0.8 + std::log(2.0 * std::cosh(B)), 1e-14);
    EXPECT_EQ(one.std_error, 0.0);
  }
  const McEstimate hot = mc_estimate_EZ(6, {0.0, 0.3, 3}, 100, 4);
  EXPECT_NEAR(hot.estimate, std::log(2.0 * std::cosh(0.3)), 1e-14);
  EXPECT_NEAR(hot.std_error, 0.0, 1e-15);
  EXPECT_THROW(mc_estimate_EZ(5, {0.5, 0.0, 3}, 10, 1), DomainError);
}

TEST(McEZ, AgreesWithExactFiniteValue) {
  const ModelParams p{0.6, 0.2, 3};
  const McEstimate mc = mc_estimate_EZ(8, p, 20000, 77);
  const double exact = finite_thermo(spin_count_law(8, p)).psi_n;
  EXPECT_GT(mc.std_error, 0.0);
  EXPECT_NEAR(mc.estimate, exact, 3.0 * mc.std_error);
}

TEST(ChiSquare, DetectsDifference) {
  EXPECT_LT(chi_square_homogeneity({500, 500}, {800, 200}).p_value, 1e-6);
  EXPECT_GT(chi_square_homogeneity({500, 500}, {505, 495}).p_value, 0.5);
}

#include <gtest/gtest.h>

#include <cmath>

#include "annealed_ising/quenched.hpp"
#include "annealed_ising/regular.hpp"

using namespace aising;

namespace {

double fixed_point_residual(const ModelParams& p, double h) {
  return h - p.B - (p.d - 1) * std::atanh(std::tanh(p.beta) * std::tanh(h));
}

}  // namespace

TEST(HStar, TrivialCases) {
  EXPECT_EQ(solve_h_star({0.3, 0.0, 3}), 0.0);
  EXPECT_EQ(solve_h_star({0.0, 0.7, 3}), 0.7);
  EXPECT_THROW(solve_h_star({0.3, -0.1, 3}), DomainError);
}

TEST(HStar, PositiveRootBelowCriticalTemperature) {
  const ModelParams p{1.0, 0.0, 3};
  // sign-scan oracle on (0, 10]
  int changes = 0;
  double prev = fixed_point_residual(p, 1e-6);
  for (int i = 1; i <= 10000; ++i) {
    const double v = fixed_point_residual(p, 1e-6 + 10.0 * i / 10000.0);
    if ((v > 0) != (prev > 0)) ++changes;
    prev = v;
  }
  EXPECT_EQ(changes, 1);
  const double h = solve_h_star(p);
  EXPECT_GT(h, 0.0);
  EXPECT_LE(std::fabs(fixed_point_residual(p, h)), 1e-12);
}

TEST(HStar, ResidualOnGrid) {
  for (int i = 1; i <= 15; ++i) {
    for (double B : {0.01, 0.1, 0.5, 1.0, 2.0}) {
      for (int d : {2, 3, 4, 5}) {
        const ModelParams p{0.1 * i, B, d};
        const double h = solve_h_star(p);
        EXPECT_LE(std::fabs(fixed_point_residual(p, h)), 1e-12);
      }
    }
  }
}

TEST(QuenchedPressure, ClosedValues) {
  for (double B : {-1.0, 0.0, 0.4, 3.0}) {
    EXPECT_NEAR(quenched_pressure({0.0, B, 3}).psi_tilde, std::log(2.0 * std::cosh(B)), 1e-14);
  }
  for (int d : {2, 3, 4, 5}) {
    const double beta = std::min(0.9 * critical_beta(d), 2.0);
    const QuenchedResult q = quenched_pressure({beta, 0.0, d});
    EXPECT_EQ(q.h_star, 0.0);
    EXPECT_NEAR(q.psi_tilde, 0.5 * d * std::log(std::cosh(beta)) + std::log(2.0), 1e-14);
  }
  for (double beta : {0.2, 1.0, 2.0}) {
    for (double B : {0.1, 1.0, 2.0}) {
      const double sh = std::sinh(B);
      const double expected =
          beta + std::log(std::cosh(B) + std::sqrt(sh * sh + std::exp(-4.0 * beta)));
      EXPECT_NEAR(quenched_pressure({beta, B, 2}).psi_tilde, expected, 1e-12);
    }
  }
}

TEST(QuenchedPressure, EvenAndBounded) {
  const QuenchedResult a = quenched_pressure({0.8, 0.3, 4});
  const QuenchedResult b = quenched_pressure({0.8, -0.3, 4});
  EXPECT_EQ(a.psi_tilde, b.psi_tilde);
  EXPECT_GE(a.u_star, 0.0);
  EXPECT_LT(a.u_star, std::tanh(0.8));
}

TEST(QuenchedPressure, EqualsAnnealedPressure) {
  for (int i = 1; i <= 15; ++i) {
    for (double B : {0.01, 0.1, 0.5, 1.0, 2.0}) {
      for (int d : {2, 3, 4, 5}) {
        const ModelParams p{0.1 * i, B, d};
        const ThermoResult r = pressure(p);
        const QuenchedResult q = quenched_pressure(p);
        EXPECT_NEAR(r.psi, q.psi_tilde, 1e-7) << p.beta << " " << B << " " << d;
        const double tb = std::tanh(p.beta);
        const double link = std::tanh(q.h_star + std::atanh(tb * std::tanh(q.h_star)));
        EXPECT_NEAR(2.0 * r.t_star - 1.0, link, 1e-9);
      }
    }
  }
}

TEST(QuenchedPressure, AgreesInOrderedPhaseAtZeroField) {
  for (double beta : {0.7, 1.0, 1.5}) {
    const ModelParams p{beta, 0.0, 3};
    EXPECT_NEAR(pressure(p).psi, quenched_pressure(p).psi_tilde, 1e-9);
  }
}

TEST(IdentityE, Values) {
  const IdentityCheck zero = identity_E_check(0.7, 0.0);
  EXPECT_DOUBLE_EQ(zero.lhs, 1.0);
  EXPECT_DOUBLE_EQ(zero.rhs, 1.0);
  const IdentityCheck mid = identity_E_check(1.0, 0.3);
  EXPECT_NEAR(mid.lhs, mid.rhs, 1e-12);
  const IdentityCheck far = identity_E_check(1.0, 20.0);
  EXPECT_NEAR(far.lhs, far.rhs, 1e-8);
  EXPECT_NEAR(far.rhs, std::exp(-2.0), 1e-8);
  for (double x : {0.05, 0.5, 2.0}) {
    for (double y : {-1.5, -0.2, 0.4, 3.0}) {
      const IdentityCheck r = identity_E_check(x, y);
      EXPECT_NEAR(r.lhs, r.rhs, 1e-12) << x << " " << y;
    }
  }
  EXPECT_THROW(identity_E_check(0.0, 1.0), DomainError);
}

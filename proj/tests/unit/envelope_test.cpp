#include "langmuir/envelope.hpp"

#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"

using namespace langmuir;

namespace {

RadialGridFunction on_grid(std::size_t n, double r_b, double (*f)(double)) {
  return RadialGridFunction::sample(uniform_nodes(1.0, r_b, n), f);
}

double bump(double r) { return -(r - 1.5) * (r - 1.5); }

}  // namespace

TEST(GridFunction, RejectsBadNodes) {
  EXPECT_THROW(RadialGridFunction({1.0}, {0.0}), PreconditionError);
  EXPECT_THROW(RadialGridFunction({1.0, 1.0}, {0.0, 1.0}), PreconditionError);
  EXPECT_THROW(RadialGridFunction({1.0, 2.0}, {0.0, NAN}), PreconditionError);
}

TEST(GridFunction, InterpolatesLinearly) {
  RadialGridFunction f({1.0, 2.0, 4.0}, {0.0, 1.0, -1.0});
  EXPECT_DOUBLE_EQ(f(1.5), 0.5);
  EXPECT_DOUBLE_EQ(f(3.0), 0.0);
  EXPECT_EQ(f(2.0), 1.0);
  EXPECT_EQ(f(0.0), 0.0);
  EXPECT_EQ(f(9.0), -1.0);
  EXPECT_DOUBLE_EQ(f.slope(3.0), -1.0);
}

TEST(Dagger, NonIncreasingInputUnchanged) {
  auto f = on_grid(101, 2.0, [](double r) { return 1.0 / r; });
  EXPECT_EQ(dagger(f), f);
}

TEST(Dagger, EndpointDominatedGivesZero) {
  auto f = on_grid(101, 2.0, [](double r) { return -(r - 1.0) * (2.0 - r); });
  auto d = dagger(f);
  for (double v : d.values()) EXPECT_EQ(v, 0.0);
}

TEST(Dagger, BumpMatchesBruteForceSuffixMax) {
  auto f = on_grid(1001, 2.0, bump);
  auto d = dagger(f);
  for (int i = 0; i <= 10000; ++i) {
    const double r = 1.0 + i * 1e-4;
    double suffix = -1e300;
    for (int j = i; j <= 10000; ++j) suffix = std::max(suffix, bump(1.0 + j * 1e-4));
    ASSERT_NEAR(d(r), suffix, 1e-6) << "r=" << r;
  }
  EXPECT_NEAR(d(1.2), 0.0, 1e-12);
  EXPECT_NEAR(d(1.8), bump(1.8), 1e-6);
}

TEST(Dagger, InsertsCrossingBreakpoint) {
  RadialGridFunction f({1.0, 1.5, 2.0}, {1.0, 0.0, 0.5});
  auto d = dagger(f);
  ASSERT_EQ(d.size(), 4u);
  EXPECT_DOUBLE_EQ(d.node(1), 1.25);
  EXPECT_EQ(d.value(1), 0.5);
  EXPECT_DOUBLE_EQ(d(1.1), f(1.1));
  EXPECT_EQ(d(1.75), 0.5);
}

TEST(Dagger, RandomProperties) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    auto f = oracle::random_function(rng, 2 + trial % 60, 1.5 + 2.5 * u(rng));
    auto d = dagger(f);
    EXPECT_EQ(dagger(d), d);
    EXPECT_TRUE(d.is_nonincreasing());
    EXPECT_EQ(d.value(d.size() - 1), f.value(f.size() - 1));
    EXPECT_EQ(barrier_height(f), d.value(0));
    for (std::size_t i = 0; i < f.size(); ++i) EXPECT_GE(d(f.node(i)), f.value(i) - 1e-14);

    auto dense = oracle::dense_envelope(f, 4001);
    for (std::size_t i = 0; i < dense.t.size(); ++i)
      ASSERT_GE(d(dense.t[i]) + 1e-12, dense.suffix[i]);

    // plateau structure: where the envelope sits strictly above f it is flat
    for (std::size_t i = 0; i + 1 < d.size(); ++i) {
      const double mid = 0.5 * (d.node(i) + d.node(i + 1));
      if (d(mid) > f(mid) + 1e-9) EXPECT_EQ(d.value(i), d.value(i + 1));
    }
  }
}

TEST(RhoTilde, Examples) {
  auto f = on_grid(1001, 2.0, bump);
  EXPECT_EQ(rho_tilde(f, 0.5), 1.0);
  EXPECT_NEAR(rho_tilde(f, -0.01), 1.6, 1e-6);

  auto dec = on_grid(11, 2.0, [](double r) { return 1.0 / r; });
  EXPECT_EQ(rho_tilde(dec, 0.5), 2.0);
  EXPECT_THROW(rho_tilde(dec, 0.4), PreconditionError);
}

TEST(RhoTilde, FlatLevelResolvesLeft) {
  RadialGridFunction f({1.0, 1.2, 1.6, 2.0}, {2.0, 1.0, 1.0, 0.0});
  EXPECT_EQ(rho_tilde(f, 1.0), 1.2);
}

TEST(RhoTilde, AgreesWithBruteForceScan) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    auto f = oracle::random_function(rng, 3 + trial % 30, 2.0);
    auto dense = oracle::dense_envelope(f, 20001);
    const double lo = f.value(f.size() - 1), hi = barrier_height(f);
    for (int k = 0; k < 20; ++k) {
      const double e = lo + (hi - lo) * u(rng);
      const double got = rho_tilde(f, e);
      EXPECT_EQ(got, rho_tilde(dagger(f), e));
      EXPECT_NEAR(got, oracle::barrier_radius_scan(dense, e), 2e-4);
    }
  }
}

TEST(RhoTilde, NonIncreasingInLevel) {
  std::mt19937_64 rng(3);
  auto f = oracle::random_function(rng, 40, 2.0);
  double prev = 3.0;
  for (double e = f.value(f.size() - 1); e < barrier_height(f) + 0.1; e += 1e-3) {
    const double r = rho_tilde(f, e);
    EXPECT_LE(r, prev);
    prev = r;
  }
}

TEST(EffectivePotential, Examples) {
  auto phi = on_grid(21, 2.0, [](double r) { return 1.0 - r; });
  auto u0 = effective_potential(phi, 0.0, Species::ion);
  EXPECT_EQ(u0, phi);
  auto ue = effective_potential(phi, 1.0, Species::electron);
  for (std::size_t i = 0; i < phi.size(); ++i) {
    const double r = phi.node(i);
    EXPECT_NEAR(ue.value(i), 0.5 / (r * r) + r - 1.0, 1e-15);
  }
  auto zero = RadialGridFunction::constant(uniform_nodes(1.0, 2.0, 11), 0.0);
  EXPECT_DOUBLE_EQ(barrier_height(effective_potential(zero, 2.0, Species::ion)), 2.0);
  EXPECT_EQ(barrier_height(RadialGridFunction::constant(uniform_nodes(1.0, 2.0, 5), 3.5)), 3.5);
}

TEST(EnvelopeCache, MatchesDirectQueries) {
  std::mt19937_64 rng(5);
  auto f = oracle::random_function(rng, 50, 3.0);
  Envelope env(f);
  EXPECT_EQ(env.height(), barrier_height(f));
  for (double e = f.value(f.size() - 1); e < 1.2; e += 0.01)
    EXPECT_EQ(env.crossing(e), rho_tilde(f, e));
}

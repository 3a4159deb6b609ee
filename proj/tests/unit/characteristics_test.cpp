#include "langmuir/characteristics.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "langmuir/kinetics.hpp"

using namespace langmuir;

namespace {

RadialGridFunction sampled(double r_b, std::size_t n, double (*f)(double)) {
  const auto r = uniform_nodes(1.0, r_b, n);
  std::vector<double> v(n);
  for (std::size_t k = 0; k < n; ++k) v[k] = f(r[k]);
  return {r, v};
}

double bump_phi(double r) { return -(r - 1.5) * (r - 1.5) + 0.25; }

// Smooth analytic potential with phi(1) = phi(2) = 0.
Potential smooth_potential() {
  return Potential([](double r) { return 0.3 * std::sin(std::numbers::pi * (r - 1.0)); },
                   [](double r) {
                     return 0.3 * std::numbers::pi * std::cos(std::numbers::pi * (r - 1.0));
                   },
                   2.0);
}

// Ground truth by integrating the reversed point: it reaches r_b iff p came from there.
Origin backward_origin(const PhasePoint& p, const RadialGridFunction& phi) {
  IntegratorOptions o;
  o.dt = 2e-3;
  o.t_max = 60.0;
  const auto tr = integrate_characteristic(reversed(p), Potential(phi), o);
  return tr.exit == Exit::outer ? Origin::FromOuterBoundary : Origin::TrappedOrProbe;
}

}  // namespace

TEST(Integrator, FreeRadialFall) {
  const Potential zero(RadialGridFunction::constant(uniform_nodes(1.0, 2.0, 9), 0.0));
  const auto tr = integrate_characteristic({1.6, -0.8, 0.0, Species::ion}, zero);
  EXPECT_EQ(tr.exit, Exit::probe);
  EXPECT_NEAR(tr.time, 0.6 / 0.8, 1e-10);
  EXPECT_EQ(tr.end.r, 1.0);
  EXPECT_NEAR(tr.end.v_r, -0.8, 1e-12);
}

TEST(Integrator, TurningRadiusOfCentralOrbit) {
  const Potential zero(RadialGridFunction::constant(uniform_nodes(1.0, 3.0, 9), 0.0));
  IntegratorOptions o;
  o.dt = 1e-4;
  o.record = true;
  const PhasePoint p{2.5, -0.6, 0.5, Species::electron};
  const double e = particle_energy(p, zero);
  const double l = angular_momentum(p);
  const auto tr = integrate_characteristic(p, zero, o);
  EXPECT_EQ(tr.exit, Exit::outer);
  double r_min = p.r;
  for (const auto& s : tr.samples) {
    r_min = std::min(r_min, s.r);
    EXPECT_NEAR(s.momentum, l, 1e-8);
  }
  EXPECT_NEAR(r_min, l / std::sqrt(2.0 * e), 1e-6);
  EXPECT_LE(tr.energy_drift, 1e-8);
  EXPECT_LE(tr.momentum_drift, 1e-8);
}

TEST(Integrator, GridPotentialConservesEnergyAndMomentum) {
  const Potential phi(sampled(2.0, 33, bump_phi));
  for (Species s : {Species::ion, Species::electron}) {
    const auto tr = integrate_characteristic({1.9, -0.7, 0.4, s}, phi);
    EXPECT_NE(tr.exit, Exit::timeout);
    EXPECT_LE(tr.energy_drift, 1e-8);
    EXPECT_LE(tr.momentum_drift, 1e-8);
  }
}

TEST(Integrator, FourthOrderDrift) {
  const Potential phi = smooth_potential();
  const PhasePoint p{1.95, -0.5, 0.9, Species::ion};
  IntegratorOptions coarse;
  coarse.dt = 0.04;
  IntegratorOptions fine = coarse;
  fine.dt = coarse.dt / 4.0;
  const auto a = integrate_characteristic(p, phi, coarse);
  const auto b = integrate_characteristic(p, phi, fine);
  ASSERT_EQ(a.exit, b.exit);
  const double ratio = a.energy_drift / b.energy_drift;
  EXPECT_GT(ratio, 200.0);
  EXPECT_LT(ratio, 320.0);
}

TEST(Integrator, TimeoutAndDomainChecks) {
  const Potential zero(RadialGridFunction::constant(uniform_nodes(1.0, 2.0, 5), 0.0));
  IntegratorOptions o;
  o.t_max = 0.1;
  const auto tr = integrate_characteristic({1.5, 0.1, 0.0, Species::ion}, zero, o);
  EXPECT_EQ(tr.exit, Exit::timeout);
  EXPECT_NEAR(tr.time, 0.1, 1e-12);
  EXPECT_THROW(integrate_characteristic({2.5, 0.0, 0.0, Species::ion}, zero), PreconditionError);
}

TEST(Classify, ZeroPotential) {
  const auto phi = RadialGridFunction::constant(uniform_nodes(1.0, 2.0, 17), 0.0);
  // incoming
  EXPECT_EQ(classify({1.3, -0.1, 0.2, Species::ion}, phi), Origin::FromOuterBoundary);
  // outgoing below the centrifugal barrier at r = 1: reflected
  EXPECT_EQ(classify({1.3, 0.1, 0.5, Species::ion}, phi), Origin::FromOuterBoundary);
  // outgoing above it: comes from the probe
  EXPECT_EQ(classify({1.3, 0.9, 0.1, Species::ion}, phi), Origin::TrappedOrProbe);
}

TEST(Classify, FastIncomingBelowTheBarrierLine) {
  const auto phi = sampled(2.0, 33, bump_phi);
  const PhasePoint p{1.5, -2.0, 0.3, Species::ion};
  EXPECT_EQ(classify(p, phi), Origin::FromOuterBoundary);
}

TEST(Classify, TrappedInWell) {
  // the bump is a well for electrons
  const auto phi = sampled(2.0, 33, bump_phi);
  for (double vr : {-0.2, 0.0, 0.3}) {
    const PhasePoint p{1.5, vr, 0.05, Species::electron};
    EXPECT_EQ(classify(p, phi), Origin::TrappedOrProbe) << vr;
    EXPECT_EQ(backward_origin(p, phi), Origin::TrappedOrProbe) << vr;
  }
}

TEST(Classify, AgreesWithBackwardIntegration) {
  const auto phi = sampled(2.0, 33, bump_phi);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ur(1.0, 2.0), uv(-1.5, 1.5);
  int agree = 0;
  const int n = 1500;
  for (int i = 0; i < n; ++i) {
    const PhasePoint p{ur(rng), uv(rng), uv(rng), i % 2 ? Species::ion : Species::electron};
    agree += classify(p, phi) == backward_origin(p, phi);
  }
  EXPECT_GE(agree, n - 3);
}

TEST(EvaluateF, Examples) {
  const auto f = BoundaryDistribution::bump(1.0, -1.0, 0.5, 1.0);
  const auto zero = RadialGridFunction::constant(uniform_nodes(1.0, 2.0, 17), 0.0);
  // pullback is the identity on the outer boundary
  EXPECT_DOUBLE_EQ(evaluate_f({2.0, -0.9, 0.3, Species::ion}, zero, f), f(-0.9, 0.3));
  const double r = 1.4, vr = -0.7, vt = 0.6, l = r * vt;
  EXPECT_NEAR(evaluate_f({r, vr, vt, Species::ion}, zero, f),
              f(-std::sqrt(vr * vr + l * l / (r * r) - l * l / 4.0), l / 2.0), 1e-14);
  const auto well = sampled(2.0, 33, bump_phi);
  EXPECT_EQ(evaluate_f({1.5, 0.1, 0.05, Species::electron}, well, BoundaryDistribution::box()),
            0.0);
}

TEST(McDensity, ZeroDistribution) {
  const auto zero = RadialGridFunction::constant(uniform_nodes(1.0, 2.0, 9), 0.0);
  const auto est = mc_density(1.5, zero, Species::ion, BoundaryDistribution::zero(), 1000, 1);
  EXPECT_EQ(est.value, 0.0);
  EXPECT_EQ(est.std_error, 0.0);
}

TEST(McDensity, MatchesKineticDensity) {
  const auto f = BoundaryDistribution::box();
  const KineticModel model(2.0, f, f);
  const auto phi = sampled(2.0, 33, bump_phi);
  const auto params = model.parameters(phi);
  for (Species s : {Species::ion, Species::electron}) {
    for (double r : {1.25, 1.5, 2.0}) {
      const double want = model.density(s, phi(r), r, params) / r;
      const auto est = mc_density(r, phi, s, f, 200000, 5, 4);
      EXPECT_NEAR(est.value, want, 4.0 * est.std_error + 1e-6) << r;
    }
  }
}

TEST(McDensity, SeedScatterMatchesStdError) {
  const auto f = BoundaryDistribution::box();
  const auto zero = RadialGridFunction::constant(uniform_nodes(1.0, 2.0, 17), 0.0);
  const KineticModel model(2.0, f, f);
  const double want = model.density(Species::ion, 0.0, 1.5, model.parameters(zero)) / 1.5;
  double z2 = 0.0;
  const int seeds = 40;
  for (int s = 0; s < seeds; ++s) {
    const auto est = mc_density(1.5, zero, Species::ion, f, 4000, 100 + s);
    const double z = (est.value - want) / est.std_error;
    z2 += z * z;
  }
  EXPECT_GT(z2 / seeds, 0.4);
  EXPECT_LT(z2 / seeds, 2.0);
}

TEST(McDensity, DeterministicForSeedAndThreads) {
  const auto f = BoundaryDistribution::box();
  const auto phi = sampled(2.0, 17, bump_phi);
  const auto a = mc_density(1.3, phi, Species::ion, f, 20000, 9, 1);
  const auto b = mc_density(1.3, phi, Species::ion, f, 20000, 9, 3);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.std_error, b.std_error);
}

TEST(TestFunctions, DefaultFamilyIsAdmissible) {
  const auto tests = default_test_functions(2.0, 1.0, 1.0);
  ASSERT_EQ(tests.size(), 10u);
  for (const auto& t : tests) {
    EXPECT_TRUE(t.admissible(2.0));
    // vanishes on the outgoing boundary
    for (double v : {0.1, 0.5, 1.0}) {
      EXPECT_EQ(t(2.0, v, 0.2), 0.0);
      EXPECT_EQ(t(1.0, -v, 0.2), 0.0);
    }
  }
  EXPECT_FALSE((TestFunction{1.9, 0.2, 0.5, 0.6, 0.0, 1.0}).admissible(2.0));
}

TEST(TestFunctions, TransportMatchesFiniteDifferences) {
  const TestFunction t{1.5, 0.4, -0.2, 0.9, 0.1, 0.8};
  const double r = 1.6, vr = -0.3, vt = 0.25, s = -1.0, dphi = 0.7, h = 1e-6;
  const double dr = (t(r + h, vr, vt) - t(r - h, vr, vt)) / (2 * h);
  const double dvr = (t(r, vr + h, vt) - t(r, vr - h, vt)) / (2 * h);
  const double dvt = ((vt + h) * t(r, vr, vt + h) - (vt - h) * t(r, vr, vt - h)) / (2 * h);
  const double want = vr * dr + (vt * vt / r - s * dphi) * dvr - vr / r * dvt;
  EXPECT_NEAR(t.transport(r, vr, vt, s, dphi), want, 1e-8);
}

TEST(WeakForm, ZeroDistribution) {
  const auto zero = RadialGridFunction::constant(uniform_nodes(1.0, 2.0, 9), 0.0);
  const auto res = weak_form_residual(zero, Species::ion, BoundaryDistribution::zero(),
                                      default_test_functions(2.0, 1.0, 1.0), 1000, 1);
  for (const auto& r : res) EXPECT_EQ(r.residual, 0.0);
}

TEST(WeakForm, ZeroPotentialWithinErrorAndCorruptedControl) {
  const auto f = BoundaryDistribution::box();
  const auto zero = RadialGridFunction::constant(uniform_nodes(1.0, 2.0, 17), 0.0);
  const auto tests = default_test_functions(2.0, 1.0, 1.0);
  const auto res = weak_form_residual(zero, Species::ion, f, tests, 200000, 3, 4);
  for (const auto& r : res) EXPECT_LE(std::abs(r.residual), 4.0 * r.std_error);

  const PhaseDensity corrupted = [&](const PhasePoint& p) {
    const double v = evaluate_f(p, zero, f);
    return classify(p, zero) == Origin::TrappedOrProbe ? v + 1.0 : v;
  };
  double worst = 0.0;
  for (std::size_t i = 0; i < tests.size(); ++i) {
    const auto r = weak_form_residual(corrupted, zero, Species::ion, f, tests[i], 200000, 3 + i, 4);
    worst = std::max(worst, std::abs(r.residual) / r.std_error);
  }
  EXPECT_GT(worst, 10.0);
}

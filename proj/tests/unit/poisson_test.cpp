#include "langmuir/poisson.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"

using namespace langmuir;

namespace {

constexpr double kPi = std::numbers::pi;

double max_error(const RadialGridFunction& psi, const std::function<double(double)>& exact) {
  double e = 0.0;
  for (std::size_t k = 0; k < psi.size(); ++k)
    e = std::max(e, std::abs(psi.value(k) - exact(psi.node(k))));
  return e;
}

// -psi'' = -psi^3 + s(x) with psi = sin(pi x).
SemilinearRHS manufactured() {
  return SemilinearRHS(
      [](double nu, double x) {
        const double s = std::sin(kPi * x);
        return -nu * nu * nu + kPi * kPi * s + s * s * s;
      },
      1e300);
}

}  // namespace

TEST(Coordinates, RoundTrip) {
  for (double r : {1.0, 1.3, 2.0, 3.7}) EXPECT_NEAR(to_r(to_x(r, 4.0), 4.0), r, 1e-14);
  EXPECT_EQ(to_x(1.0, 3.0), 0.0);
  EXPECT_EQ(to_x(3.0, 3.0), 1.0);
  EXPECT_EQ(to_r(1.0, 3.0), 3.0);
  EXPECT_THROW(to_x(1.5, 1.0), PreconditionError);
}

TEST(Coordinates, RecoverPhiZeroPsiIsLinearInX) {
  const auto psi = RadialGridFunction::constant(uniform_nodes(0.0, 1.0, 5), 0.0);
  const auto phi = recover_phi(psi, -1.0, 2.0);
  EXPECT_EQ(phi.front(), 1.0);
  EXPECT_EQ(phi.back(), 2.0);
  EXPECT_EQ(phi.value(0), -1.0);
  EXPECT_EQ(phi.value(4), 0.0);
  EXPECT_NEAR(phi.value(2), -0.5, 1e-15);
  EXPECT_NEAR(phi.node(2), std::sqrt(2.0), 1e-15);
}

TEST(Coordinates, RecoverPhiRejectsNonzeroEnds) {
  const auto psi = RadialGridFunction::constant(uniform_nodes(0.0, 1.0, 5), 0.1);
  EXPECT_THROW(recover_phi(psi, -1.0, 2.0), PreconditionError);
}

TEST(Coordinates, ToPsiInvertsRecoverPhi) {
  const auto x = uniform_nodes(0.0, 1.0, 9);
  std::vector<double> v(9);
  for (std::size_t k = 0; k < 9; ++k) v[k] = std::sin(kPi * x[k]) * 0.3;
  v.front() = v.back() = 0.0;
  const RadialGridFunction psi(x, v);
  const auto back = to_psi(recover_phi(psi, -0.7, 2.5), -0.7);
  ASSERT_EQ(back.size(), psi.size());
  for (std::size_t k = 0; k < 9; ++k) {
    EXPECT_NEAR(back.node(k), x[k], 1e-15);
    EXPECT_NEAR(back.value(k), v[k], 1e-15);
  }
}

TEST(Functional, HatFunction) {
  const RadialGridFunction hat({0.0, 0.5, 1.0}, {0.0, 1.0, 0.0});
  EXPECT_DOUBLE_EQ(dirichlet_energy(hat), 2.0);
  const SemilinearRHS zero([](double, double) { return 0.0; }, 0.0);
  EXPECT_DOUBLE_EQ(functional_J(hat, zero), 2.0);
  // g == 1: G(nu) = nu, trapezoid weight 1/2 at the single interior node.
  const SemilinearRHS one([](double, double) { return 1.0; }, 1.0);
  EXPECT_NEAR(functional_J(hat, one), 1.5, 1e-14);
}

TEST(Functional, CoercivityBoundFormula) {
  EXPECT_DOUBLE_EQ(coercivity_bound(1.0, 0.0), 2.0);
  EXPECT_NEAR(coercivity_bound(0.0, std::sqrt(2.0 * kPi)), 1.0, 1e-15);
}

TEST(Semilinear, ZeroRhsGivesZero) {
  const SemilinearRHS zero([](double, double) { return 0.0; }, 0.0);
  const auto res = solve_semilinear(zero, 101, 1e-12);
  EXPECT_TRUE(res.converged);
  EXPECT_EQ(res.iterations, 0u);
  for (double v : res.psi.values()) EXPECT_EQ(v, 0.0);
}

TEST(Semilinear, ConstantRhsIsParabola) {
  for (double c : {1.0, -3.0, 0.25}) {
    const SemilinearRHS rhs([c](double, double) { return c; }, std::abs(c));
    const auto res = solve_semilinear(rhs, 1000, 1e-9);
    ASSERT_TRUE(res.converged) << res.message;
    EXPECT_LT(max_error(res.psi, [c](double x) { return c * x * (1.0 - x) / 2.0; }), 1e-10);
    EXPECT_EQ(res.psi.value(0), 0.0);
    EXPECT_EQ(res.psi.value(999), 0.0);
  }
}

TEST(Semilinear, LinearRhsMatchesTridiagonalOracle) {
  const std::size_t n = 401;
  const SemilinearRHS rhs([](double nu, double x) { return -2.0 * nu + std::cos(3.0 * x); }, 1e300);
  const auto res = solve_semilinear(rhs, n, 1e-9);
  ASSERT_TRUE(res.converged) << res.message;
  const double h = 1.0 / (n - 1);
  const std::size_t m = n - 2;
  std::vector<double> a(m, -1.0 / (h * h)), b(m, 2.0 / (h * h) + 2.0), c(m, -1.0 / (h * h)), d(m);
  for (std::size_t i = 0; i < m; ++i) d[i] = std::cos(3.0 * (i + 1) * h);
  const auto ref = oracle::tridiagonal(a, b, c, d);
  for (std::size_t i = 0; i < m; ++i) EXPECT_NEAR(res.psi.value(i + 1), ref[i], 1e-10);
}

TEST(Semilinear, ManufacturedSolutionConvergesAtSecondOrder) {
  const auto rhs = manufactured();
  double prev = 0.0;
  for (std::size_t n : {41u, 81u, 161u, 321u}) {
    const auto res = solve_semilinear(rhs, n, 1e-9);
    ASSERT_TRUE(res.converged) << res.message;
    const double err = max_error(res.psi, [](double x) { return std::sin(kPi * x); });
    if (prev > 0.0) {
      EXPECT_GT(prev / err, 3.8);
      EXPECT_LT(prev / err, 4.2);
    }
    prev = err;
  }
}

TEST(Semilinear, EnergyDecreasesAndCoercivityHolds) {
  // bounded, non-smooth in nu and increasing somewhere: J is not convex
  const SemilinearRHS rhs(
      [](double nu, double x) {
        return 3.0 * std::sin(4.0 * nu) + 2.0 - std::min(1.0, std::abs(nu - x));
      },
      6.0);
  const auto res = solve_semilinear(rhs, 501, 1e-8);
  ASSERT_TRUE(res.converged) << res.message;
  for (std::size_t i = 1; i < res.history.size(); ++i) {
    EXPECT_LE(res.history[i].energy, res.history[i - 1].energy + res.history[i].noise);
  }
  for (const auto& it : res.history)
    EXPECT_LE(it.dirichlet, coercivity_bound(it.energy, rhs.sup_bound()));
  EXPECT_LE(res.history.back().energy, res.history.front().energy);
  // discrete J agrees with the quadrature functional
  EXPECT_NEAR(res.energy, functional_J(res.psi, rhs, 1e-13), 1e-10);
}

TEST(Semilinear, WarmStartFromSolutionIsImmediate) {
  const auto rhs = manufactured();
  const auto first = solve_semilinear(rhs, 201, 1e-10);
  ASSERT_TRUE(first.converged);
  SemilinearOptions opt;
  const auto v = first.psi.values();
  opt.initial = std::vector<double>(v.begin(), v.end());
  const auto second = solve_semilinear(rhs, 201, 1e-10, opt);
  EXPECT_TRUE(second.converged);
  EXPECT_EQ(second.iterations, 0u);
}

TEST(Semilinear, ThreadCountDoesNotChangeResult) {
  const auto rhs = manufactured();
  SemilinearOptions opt;
  opt.threads = 3;
  const auto a = solve_semilinear(rhs, 301, 1e-10);
  const auto b = solve_semilinear(rhs, 301, 1e-10, opt);
  EXPECT_EQ(a.psi, b.psi);
}

TEST(Semilinear, ReportsCapWithoutThrowing) {
  SemilinearOptions opt;
  opt.max_iterations = 1;
  const auto res = solve_semilinear(manufactured(), 101, 1e-14, opt);
  EXPECT_FALSE(res.converged);
  EXPECT_EQ(res.iterations, 1u);
  EXPECT_FALSE(res.message.empty());
}

TEST(Semilinear, Preconditions) {
  const auto rhs = manufactured();
  EXPECT_THROW(solve_semilinear(rhs, 2, 1e-8), PreconditionError);
  EXPECT_THROW(solve_semilinear(rhs, 11, 0.0), PreconditionError);
  SemilinearOptions opt;
  opt.initial = std::vector<double>(5, 0.0);
  EXPECT_THROW(solve_semilinear(rhs, 11, 1e-8, opt), PreconditionError);
}

TEST(AssembleRhs, SymmetricSpeciesGiveZero) {
  const auto f = BoundaryDistribution::box(1.0, 1.0, 1.0);
  const KineticModel model(2.0, f, f);
  const auto phi = RadialGridFunction::constant(uniform_nodes(1.0, 2.0, 33), 0.0);
  const auto params = model.parameters(phi);
  const auto rhs = assemble_rhs(model, params, 0.0, 1.0);
  for (double x : {0.1, 0.5, 0.9}) EXPECT_NEAR(rhs(0.0, x), 0.0, 1e-12);
  const double gb = model.bound(Species::ion) + model.bound(Species::electron);
  EXPECT_NEAR(rhs.sup_bound(), 2.0 * std::log(2.0) * std::log(2.0) * gb, 1e-12);
}

TEST(AssembleRhs, ScalingAndShift) {
  const auto fi = BoundaryDistribution::box(1.0, 1.0, 1.0);
  const KineticModel model(2.0, fi, BoundaryDistribution::zero());
  const auto phi = RadialGridFunction::constant(uniform_nodes(1.0, 2.0, 33), 0.0);
  const auto params = model.parameters(phi);
  const double lambda = 0.5, phi_p = -0.4, x = 0.5;
  const auto rhs = assemble_rhs(model, params, phi_p, lambda);
  const double r = to_r(x, 2.0);
  const double expect = r * std::log(2.0) * std::log(2.0) / (lambda * lambda) *
                        model.gtilde(0.1 + phi_p * (1.0 - x), r, params);
  EXPECT_NEAR(rhs(0.1, x), expect, 1e-14 * std::abs(expect));
  EXPECT_THROW(assemble_rhs(model, params, phi_p, 0.0), PreconditionError);
}

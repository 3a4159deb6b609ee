#include <benchmark/benchmark.h>

#include <random>

#include "langmuir/characteristics.hpp"
#include "langmuir/envelope.hpp"
#include "langmuir/fixedpoint.hpp"
#include "langmuir/kinetics.hpp"
#include "langmuir/poisson.hpp"

using namespace langmuir;

namespace {

RadialGridFunction random_profile(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const auto r = uniform_nodes(1.0, 2.0, n);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return {r, v};
}

RadialGridFunction bump_profile(std::size_t n) {
  return RadialGridFunction::sample(uniform_nodes(1.0, 2.0, n),
                                    [](double r) { return -(r - 1.5) * (r - 1.5) + 0.25; });
}

}  // namespace

static void BM_Dagger(benchmark::State& state) {
  const auto f = random_profile(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(dagger(f));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Dagger)->RangeMultiplier(4)->Range(16, 16384)->Complexity(benchmark::oN);

static void BM_RhoTilde(benchmark::State& state) {
  const Envelope env(random_profile(static_cast<std::size_t>(state.range(0)), 2));
  const double lo = env.profile().value(env.profile().size() - 1), hi = env.height();
  double level = lo;
  for (auto _ : state) {
    benchmark::DoNotOptimize(env.crossing(level));
    level = level + 1e-3 > hi ? lo : level + 1e-3;
  }
}
BENCHMARK(BM_RhoTilde)->Arg(65)->Arg(1025);

static void BM_DensityG(benchmark::State& state) {
  const auto f = BoundaryDistribution::box();
  const QuadratureSpec quad;
  const auto phi = bump_profile(static_cast<std::size_t>(state.range(0)));
  const auto params = species_parameters(Species::ion, phi, f, quad);
  double nu = -0.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(density_g(Species::ion, nu, 1.3, params, f, quad));
    nu = nu > 0.5 ? -0.5 : nu + 0.01;
  }
}
BENCHMARK(BM_DensityG)->Arg(33)->Arg(129)->Unit(benchmark::kMicrosecond);

static void BM_UpdateParameters(benchmark::State& state) {
  const KineticModel model(2.0, BoundaryDistribution::box(), BoundaryDistribution::half_maxwellian());
  const auto phi = bump_profile(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(update_parameters(model, phi));
}
BENCHMARK(BM_UpdateParameters)->Arg(33)->Arg(129)->Unit(benchmark::kMillisecond);

static void BM_SolveSemilinear(benchmark::State& state) {
  const KineticModel model(2.0, BoundaryDistribution::box(), BoundaryDistribution::box());
  const auto start = recover_phi(RadialGridFunction::constant(uniform_nodes(0.0, 1.0, 33), 0.0), -1.0, 2.0);
  const auto params = model.parameters(start);
  const auto rhs = assemble_rhs(model, params, -1.0, 1.0);
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(solve_semilinear(rhs, n, 1e-8));
}
BENCHMARK(BM_SolveSemilinear)->Arg(33)->Arg(65)->Unit(benchmark::kMillisecond);

static void BM_Characteristic(benchmark::State& state) {
  const Potential phi(bump_profile(65));
  IntegratorOptions o;
  o.dt = 1e-3;
  for (auto _ : state)
    benchmark::DoNotOptimize(integrate_characteristic({2.0, -0.6, 0.3, Species::ion}, phi, o));
}
BENCHMARK(BM_Characteristic)->Unit(benchmark::kMicrosecond);

static void BM_McDensity(benchmark::State& state) {
  const auto phi = bump_profile(65);
  const auto f = BoundaryDistribution::box();
  std::uint64_t seed = 1;
  for (auto _ : state)
    benchmark::DoNotOptimize(mc_density(1.5, phi, Species::ion, f, 100000, seed++));
  state.SetItemsProcessed(state.iterations() * 100000);
}
BENCHMARK(BM_McDensity)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

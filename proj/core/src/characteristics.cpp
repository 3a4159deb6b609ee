#include "langmuir/characteristics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>

#include "langmuir/parallel.hpp"
#include "langmuir/quadrature.hpp"

namespace langmuir {
namespace {

using State = std::array<double, 3>;  // r, v_r, v_theta

State rhs(const State& y, double s, const Potential& phi, std::size_t piece) {
  const double r = y[0], vr = y[1], vt = y[2];
  return {vr, vt * vt / r - s * phi.piece_derivative(piece, r), -vr * vt / r};
}

State rk4(const State& y, double h, double s, const Potential& phi, std::size_t piece) {
  auto add = [](const State& a, const State& b, double c) {
    return State{a[0] + c * b[0], a[1] + c * b[1], a[2] + c * b[2]};
  };
  const State k1 = rhs(y, s, phi, piece);
  const State k2 = rhs(add(y, k1, 0.5 * h), s, phi, piece);
  const State k3 = rhs(add(y, k2, 0.5 * h), s, phi, piece);
  const State k4 = rhs(add(y, k3, h), s, phi, piece);
  State out;
  for (int i = 0; i < 3; ++i) out[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  return out;
}

bool finite(const State& y) {
  return std::isfinite(y[0]) && std::isfinite(y[1]) && std::isfinite(y[2]) && y[0] > 0.0;
}

double bump(double y, double c, double h) {
  const double z = (y - c) / h;
  if (std::abs(z) >= 1.0) return 0.0;
  const double q = 1.0 - z * z;
  return q * q;
}

double bump_prime(double y, double c, double h) {
  const double z = (y - c) / h;
  if (std::abs(z) >= 1.0) return 0.0;
  return -4.0 * z * (1.0 - z * z) / h;
}

// Effective potential of the piecewise-linear phi at the nodes and at r.
struct EffectiveProfile {
  double at_r, barrier, suffix, at_rb;
};

EffectiveProfile effective_profile(const PhasePoint& p, const RadialGridFunction& phi) {
  const double s = charge_sign(p.species);
  const double l = p.r * p.v_theta;
  const double half_l2 = 0.5 * l * l;
  EffectiveProfile out;
  out.at_r = half_l2 / (p.r * p.r) + s * phi(p.r);
  out.barrier = -std::numeric_limits<double>::infinity();
  out.suffix = out.at_r;
  // L^2/2r^2 + s phi is convex on every segment: extrema over intervals sit at nodes or at r
  for (std::size_t k = 0; k < phi.size(); ++k) {
    const double rk = phi.node(k);
    const double u = half_l2 / (rk * rk) + s * phi.value(k);
    out.barrier = std::max(out.barrier, u);
    if (rk > p.r) out.suffix = std::max(out.suffix, u);
  }
  out.barrier = std::max(out.barrier, out.at_r);
  const double rb = phi.back();
  out.at_rb = half_l2 / (rb * rb) + s * phi.value(phi.size() - 1);
  return out;
}

std::seed_seq seeds(std::uint64_t seed, std::uint64_t stream) {
  return std::seed_seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                       static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
}

struct Accum {
  double sum = 0.0, var = 0.0;
};

}  // namespace

PhasePoint reversed(const PhasePoint& p) { return {p.r, -p.v_r, -p.v_theta, p.species}; }

Potential::Potential(RadialGridFunction phi) : grid_(std::move(phi)), r_b_(grid_->back()) {}

Potential::Potential(Fn value, Fn derivative, double r_b)
    : value_(std::move(value)), derivative_(std::move(derivative)), r_b_(r_b) {
  if (!value_ || !derivative_) throw PreconditionError("Potential: empty function");
  if (!(r_b_ > 1.0)) throw PreconditionError("Potential: r_b must exceed 1");
}

double Potential::operator()(double r) const { return grid_ ? (*grid_)(r) : value_(r); }

double Potential::derivative(double r) const {
  return piece_derivative(piece_at(r, 1.0), r);
}

std::size_t Potential::pieces() const { return grid_ ? grid_->size() - 1 : 1; }

std::size_t Potential::piece_at(double r, double direction) const {
  if (!grid_) return 0;
  const auto x = grid_->nodes();
  std::size_t k = static_cast<std::size_t>(std::upper_bound(x.begin(), x.end(), r) - x.begin());
  k = std::clamp<std::size_t>(k, 1, grid_->size() - 1) - 1;
  if (direction < 0.0 && k > 0 && r == x[k]) --k;
  return k;
}

std::pair<double, double> Potential::piece_bounds(std::size_t k) const {
  if (!grid_) return {1.0, r_b_};
  return {grid_->node(k), grid_->node(k + 1)};
}

double Potential::piece_derivative(std::size_t k, double r) const {
  if (!grid_) return derivative_(r);
  const auto& g = *grid_;
  return (g.value(k + 1) - g.value(k)) / (g.node(k + 1) - g.node(k));
}

double particle_energy(const PhasePoint& p, const Potential& phi) {
  return 0.5 * (p.v_r * p.v_r + p.v_theta * p.v_theta) + charge_sign(p.species) * phi(p.r);
}

double angular_momentum(const PhasePoint& p) { return p.r * p.v_theta; }

const char* to_string(Exit e) {
  switch (e) {
    case Exit::probe: return "probe";
    case Exit::outer: return "outer";
    case Exit::timeout: return "timeout";
  }
  return "?";
}

const char* to_string(Origin o) {
  return o == Origin::FromOuterBoundary ? "FromOuterBoundary" : "TrappedOrProbe";
}

Trajectory integrate_characteristic(const PhasePoint& p0, const Potential& phi,
                                    const IntegratorOptions& opt) {
  if (!(opt.dt > 0.0) || !(opt.t_max > 0.0))
    throw PreconditionError("integrate_characteristic: dt and t_max must be positive");
  const double r_b = phi.r_b();
  if (!(p0.r >= 1.0 && p0.r <= r_b) || !std::isfinite(p0.v_r) || !std::isfinite(p0.v_theta))
    throw PreconditionError("integrate_characteristic: start point outside the domain");
  const double s = charge_sign(p0.species);
  auto as_point = [&](const State& y) { return PhasePoint{y[0], y[1], y[2], p0.species}; };
  auto sample = [&](double t, const State& y) {
    const PhasePoint p = as_point(y);
    return TrajectorySample{t, y[0], y[1], y[2], particle_energy(p, phi), angular_momentum(p)};
  };

  Trajectory tr;
  State y{p0.r, p0.v_r, p0.v_theta};
  const TrajectorySample first = sample(0.0, y);
  tr.samples.push_back(first);
  double t = 0.0, dt = opt.dt;
  auto track = [&](const TrajectorySample& smp) {
    tr.energy_drift = std::max(tr.energy_drift, std::abs(smp.energy - first.energy));
    tr.momentum_drift = std::max(tr.momentum_drift, std::abs(smp.momentum - first.momentum));
    if (opt.record) tr.samples.push_back(smp);
  };

  while (t < opt.t_max) {
    const std::size_t piece = phi.piece_at(y[0], y[1]);
    const auto [lo_r, hi_r] = phi.piece_bounds(piece);
    const double h = std::min(dt, opt.t_max - t);
    const State next = rk4(y, h, s, phi, piece);
    if (!finite(next)) {
      dt *= 0.5;
      if (dt < opt.min_dt) break;
      continue;
    }
    if (next[0] > hi_r || next[0] < lo_r) {
      // bisection on the step length for the crossing of the piece end
      const double wall = next[0] > hi_r ? hi_r : lo_r;
      const auto beyond = [&](const State& z) { return wall == hi_r ? z[0] > hi_r : z[0] < lo_r; };
      double lo = 0.0, hi = h;
      State at = next;
      for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const State ym = rk4(y, mid, s, phi, piece);
        if (beyond(ym)) {
          hi = mid;
          at = ym;
        } else {
          lo = mid;
        }
      }
      at[0] = wall;
      t += hi;
      y = at;
      track(sample(t, y));
      if (wall == r_b || wall == 1.0) {
        tr.exit = wall == r_b ? Exit::outer : Exit::probe;
        break;
      }
      continue;
    }
    t += h;
    y = next;
    track(sample(t, y));
  }
  tr.time = t;
  tr.end = as_point(y);
  if (!opt.record && tr.samples.size() == 1) tr.samples.push_back(sample(t, y));
  else if (!opt.record) tr.samples.back() = sample(t, y);
  return tr;
}

Origin classify(const PhasePoint& p, const RadialGridFunction& phi) {
  if (!(p.r >= phi.front() && p.r <= phi.back()))
    throw PreconditionError("classify: radius outside the domain");
  const EffectiveProfile u = effective_profile(p, phi);
  const double e = 0.5 * p.v_r * p.v_r + u.at_r;
  const bool from_outer = u.suffix < e && (p.v_r < 0.0 || e < u.barrier);
  return from_outer ? Origin::FromOuterBoundary : Origin::TrappedOrProbe;
}

double evaluate_f(const PhasePoint& p, const RadialGridFunction& phi, const BoundaryDistribution& f_b) {
  if (f_b.is_zero()) return 0.0;
  if (!(p.r >= phi.front() && p.r <= phi.back()))
    throw PreconditionError("evaluate_f: radius outside the domain");
  const EffectiveProfile u = effective_profile(p, phi);
  const double e = 0.5 * p.v_r * p.v_r + u.at_r;
  if (!(u.suffix < e && (p.v_r < 0.0 || e < u.barrier))) return 0.0;
  const double w = -std::sqrt(2.0 * (e - u.at_rb));
  return f_b(w, p.r * p.v_theta / phi.back());
}

McEstimate mc_density(double r, const RadialGridFunction& phi, Species species,
                      const BoundaryDistribution& f_b, std::size_t n_samples, std::uint64_t seed,
                      std::size_t threads) {
  if (n_samples < 1) throw PreconditionError("mc_density: need at least one sample");
  if (!(r >= phi.front() && r <= phi.back())) throw PreconditionError("mc_density: radius outside the domain");
  if (f_b.is_zero()) return {};
  const QuadratureSpec quad{};
  const double w_max = truncation_w(f_b, quad), l_max = truncation_l(f_b, quad);
  double phi_sup = 0.0;
  for (double v : phi.values()) phi_sup = std::max(phi_sup, std::abs(v));
  const double vt_max = phi.back() * l_max / r;
  const double vr_max = std::sqrt(w_max * w_max + l_max * l_max + 2.0 * phi_sup);

  const std::size_t per = n_samples >= 8 ? 4 : n_samples;
  const auto k = std::max<std::size_t>(1, static_cast<std::size_t>(std::sqrt(double(n_samples / per))));
  const double hr = 2.0 * vr_max / k, ht = 2.0 * vt_max / k;
  std::vector<Accum> rows(k);
  parallel_for(k, threads, [&](std::size_t i) {
    auto sq = seeds(seed, i);
    std::mt19937_64 rng(sq);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Accum acc;
    for (std::size_t j = 0; j < k; ++j) {
      double s1 = 0.0, s2 = 0.0;
      for (std::size_t m = 0; m < per; ++m) {
        const double vr = -vr_max + (i + u(rng)) * hr;
        const double vt = -vt_max + (j + u(rng)) * ht;
        const double v = evaluate_f({r, vr, vt, species}, phi, f_b);
        s1 += v;
        s2 += v * v;
      }
      const double mean = s1 / per;
      acc.sum += mean;
      if (per > 1) acc.var += std::max(0.0, (s2 - per * mean * mean) / (per - 1)) / per;
    }
    rows[i] = acc;
  });
  const double cell = hr * ht;
  Accum tot;
  for (const auto& a : rows) {
    tot.sum += a.sum;
    tot.var += a.var;
  }
  return {cell * tot.sum, cell * std::sqrt(tot.var)};
}

double TestFunction::operator()(double r, double v_r, double v_theta) const {
  return bump(r, r_center, r_half) * bump(v_r, vr_center, vr_half) *
         bump(v_theta, vt_center, vt_half);
}

double TestFunction::transport(double r, double v_r, double v_theta, double s, double dphi) const {
  const double a = bump(r, r_center, r_half), da = bump_prime(r, r_center, r_half);
  const double b = bump(v_r, vr_center, vr_half), db = bump_prime(v_r, vr_center, vr_half);
  const double c = bump(v_theta, vt_center, vt_half), dc = bump_prime(v_theta, vt_center, vt_half);
  return v_r * da * b * c + (v_theta * v_theta / r - s * dphi) * a * db * c -
         v_r / r * a * b * (c + v_theta * dc);
}

bool TestFunction::admissible(double r_b) const {
  if (!(r_half > 0.0 && vr_half > 0.0 && vt_half > 0.0)) return false;
  if (r_center + r_half <= 1.0 || r_center - r_half >= r_b) return false;
  if (std::abs(r_b - r_center) < r_half && vr_center + vr_half > 0.0) return false;
  if (std::abs(1.0 - r_center) < r_half && vr_center - vr_half < 0.0) return false;
  return true;
}

std::vector<TestFunction> default_test_functions(double r_b, double w, double l) {
  const double d = r_b - 1.0;
  std::vector<TestFunction> t{
      {1.0 + 0.5 * d, 0.3 * d, 0.0, 0.8 * w, 0.0, 0.8 * l},
      {1.0 + 0.3 * d, 0.2 * d, -0.4 * w, 0.5 * w, 0.3 * l, 0.5 * l},
      {1.0 + 0.7 * d, 0.2 * d, 0.3 * w, 0.5 * w, -0.4 * l, 0.6 * l},
      {r_b, 0.4 * d, -0.5 * w, 0.45 * w, 0.0, l},
      {r_b - 0.1 * d, 0.3 * d, -0.3 * w, 0.3 * w, 0.5 * l, 0.5 * l},
      {1.0, 0.4 * d, 0.5 * w, 0.45 * w, 0.0, l},
      {1.0 + 0.1 * d, 0.3 * d, 0.3 * w, 0.3 * w, -0.3 * l, 0.5 * l},
      {1.0 + 0.5 * d, 0.5 * d, 0.0, 1.2 * w, 0.0, 1.2 * l},
      {1.0 + 0.4 * d, 0.15 * d, -0.8 * w, 0.4 * w, 0.8 * l, 0.4 * l},
      {1.0 + 0.85 * d, 0.14 * d, 0.1 * w, 0.9 * w, 0.0, 0.3 * l},
  };
  for (const auto& f : t)
    if (!f.admissible(r_b)) throw PreconditionError("default_test_functions: inadmissible member");
  return t;
}

WeakResidual weak_form_residual(const PhaseDensity& f, const RadialGridFunction& phi,
                                Species species, const BoundaryDistribution& f_b,
                                const TestFunction& test, std::size_t n_samples,
                                std::uint64_t seed, std::size_t threads) {
  const double r_b = phi.back();
  if (!test.admissible(r_b)) throw PreconditionError("weak_form_residual: test function is not admissible");
  if (n_samples < 1) throw PreconditionError("weak_form_residual: need at least one sample");
  const double s = charge_sign(species);
  const Potential pot(phi);
  WeakResidual out;

  // interior term by stratified Monte Carlo over the support box
  const double r0 = std::max(1.0, test.r_center - test.r_half);
  const double r1 = std::min(r_b, test.r_center + test.r_half);
  const double a0 = test.vr_center - test.vr_half, b0 = test.vt_center - test.vt_half;
  const std::size_t per = n_samples >= 16 ? 4 : n_samples;
  const auto k = std::max<std::size_t>(1, static_cast<std::size_t>(std::cbrt(double(n_samples / per))));
  const double hr = (r1 - r0) / k, ha = 2.0 * test.vr_half / k, hb = 2.0 * test.vt_half / k;
  std::vector<Accum> rows(k);
  parallel_for(k, threads, [&](std::size_t i) {
    auto sq = seeds(seed, i);
    std::mt19937_64 rng(sq);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Accum acc;
    for (std::size_t j = 0; j < k; ++j)
      for (std::size_t q = 0; q < k; ++q) {
        double s1 = 0.0, s2 = 0.0;
        for (std::size_t m = 0; m < per; ++m) {
          const double r = r0 + (i + u(rng)) * hr;
          const double vr = a0 + (j + u(rng)) * ha;
          const double vt = b0 + (q + u(rng)) * hb;
          const double tv = test.transport(r, vr, vt, s, pot.derivative(r));
          const double v = tv == 0.0 ? 0.0 : f({r, vr, vt, species}) * tv;
          s1 += v;
          s2 += v * v;
        }
        const double mean = s1 / per;
        acc.sum += mean;
        if (per > 1) acc.var += std::max(0.0, (s2 - per * mean * mean) / (per - 1)) / per;
      }
    rows[i] = acc;
  });
  const double cell = hr * ha * hb;
  Accum tot;
  for (const auto& a : rows) {
    tot.sum += a.sum;
    tot.var += a.var;
  }
  out.interior = cell * tot.sum;
  out.std_error = cell * std::sqrt(tot.var);

  // boundary term at r_b over v_r < 0, split at the distribution's breakpoints
  const double ar = bump(r_b, test.r_center, test.r_half);
  if (ar != 0.0 && !f_b.is_zero()) {
    std::vector<double> wb(f_b.w_breaks().begin(), f_b.w_breaks().end());
    std::vector<double> lb;
    for (double x : f_b.l_breaks()) {
      lb.push_back(x);
      lb.push_back(-x);
    }
    const auto wp = clip_breakpoints(wb, a0, std::min(0.0, test.vr_center + test.vr_half));
    const auto lp = clip_breakpoints(lb, b0, test.vt_center + test.vt_half);
    const GaussRule& g = gauss_legendre(12);
    constexpr int kPanels = 8;
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < wp.size(); ++i)
      for (std::size_t j = 0; j + 1 < lp.size(); ++j) {
        const double hw = (wp[i + 1] - wp[i]) / kPanels, hl = (lp[j + 1] - lp[j]) / kPanels;
        for (int pi = 0; pi < kPanels; ++pi)
          for (int pj = 0; pj < kPanels; ++pj)
            for (std::size_t a = 0; a < g.x.size(); ++a)
              for (std::size_t b = 0; b < g.x.size(); ++b) {
                const double w = wp[i] + hw * (pi + 0.5 + 0.5 * g.x[a]);
                const double l = lp[j] + hl * (pj + 0.5 + 0.5 * g.x[b]);
                sum += 0.25 * hw * hl * g.w[a] * g.w[b] * f_b(w, l) * test(r_b, w, l) * w;
              }
      }
    out.boundary = sum;
  }
  out.residual = out.interior - out.boundary;
  return out;
}

std::vector<WeakResidual> weak_form_residual(const RadialGridFunction& phi, Species species,
                                             const BoundaryDistribution& f_b,
                                             const std::vector<TestFunction>& tests,
                                             std::size_t n_samples, std::uint64_t seed,
                                             std::size_t threads) {
  const PhaseDensity f = [&](const PhasePoint& p) { return evaluate_f(p, phi, f_b); };
  std::vector<WeakResidual> out;
  for (std::size_t i = 0; i < tests.size(); ++i)
    out.push_back(weak_form_residual(f, phi, species, f_b, tests[i], n_samples, seed + i, threads));
  return out;
}

}  // namespace langmuir

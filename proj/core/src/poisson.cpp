#include "langmuir/poisson.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "langmuir/parallel.hpp"
#include "langmuir/quadrature.hpp"

namespace langmuir {
namespace {

struct Increment {
  double integral;
  double fb;
};

double simpson_rec(const std::function<double(double)>& f, double a, double b, double fa,
                   double fm, double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double flm = f(0.5 * (a + m)), frm = f(0.5 * (m + b));
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

// int_a^b f with f(a) = fa known; also returns f(b).
// Tolerance is tol * |b - a|: the computed g carries quadrature noise, so an
// absolute tolerance would refine without bound.
Increment simpson_increment(const std::function<double(double)>& f, double a, double b, double fa,
                            double tol, int depth) {
  if (a == b) return {0.0, fa};
  const double fb = f(b), fm = f(0.5 * (a + b));
  const double lo = std::min(a, b), hi = std::max(a, b);
  const double flo = a < b ? fa : fb, fhi = a < b ? fb : fa;
  const double whole = (hi - lo) / 6.0 * (flo + 4.0 * fm + fhi);
  const double v = simpson_rec(f, lo, hi, flo, fm, fhi, whole, tol * (hi - lo), depth);
  return {a < b ? v : -v, fb};
}

// Thomas algorithm for a symmetric tridiagonal system with constant off-diagonal.
bool solve_tridiagonal(std::vector<double> diag, double off, std::vector<double>& rhs) {
  const std::size_t n = rhs.size();
  for (std::size_t i = 1; i < n; ++i) {
    if (diag[i - 1] == 0.0) return false;
    const double m = off / diag[i - 1];
    diag[i] -= m * off;
    rhs[i] -= m * rhs[i - 1];
  }
  if (n == 0) return true;
  if (diag[n - 1] == 0.0) return false;
  rhs[n - 1] /= diag[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) rhs[i] = (rhs[i] - off * rhs[i + 1]) / diag[i];
  return std::all_of(rhs.begin(), rhs.end(), [](double v) { return std::isfinite(v); });
}

}  // namespace

double to_x(double r, double r_b) {
  if (!(r_b > 1.0)) throw PreconditionError("to_x: r_b must exceed 1");
  return std::log(r) / std::log(r_b);
}

double to_r(double x, double r_b) {
  if (!(r_b > 1.0)) throw PreconditionError("to_r: r_b must exceed 1");
  return std::pow(r_b, x);
}

RadialGridFunction recover_phi(const RadialGridFunction& psi, double phi_p, double r_b) {
  if (psi.front() != 0.0 || psi.back() != 1.0)
    throw PreconditionError("recover_phi: psi must live on [0, 1]");
  if (psi.value(0) != 0.0 || psi.value(psi.size() - 1) != 0.0)
    throw PreconditionError("recover_phi: psi must vanish at both ends");
  const std::size_t n = psi.size();
  std::vector<double> r(n), v(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double x = psi.node(k);
    r[k] = to_r(x, r_b);
    v[k] = psi.value(k) + phi_p * (1.0 - x);
  }
  r.front() = 1.0;
  r.back() = r_b;
  v.front() = phi_p;
  v.back() = 0.0;
  return {std::move(r), std::move(v)};
}

RadialGridFunction to_psi(const RadialGridFunction& phi, double phi_p) {
  const double r_b = phi.back();
  const std::size_t n = phi.size();
  std::vector<double> x(n), v(n);
  for (std::size_t k = 0; k < n; ++k) {
    x[k] = to_x(phi.node(k), r_b);
    v[k] = phi.value(k) - phi_p * (1.0 - x[k]);
  }
  x.front() = 0.0;
  x.back() = 1.0;
  v.front() = 0.0;
  v.back() = 0.0;
  return {std::move(x), std::move(v)};
}

SemilinearRHS::SemilinearRHS(Evaluator g, double sup_bound)
    : g_(std::move(g)), sup_bound_(sup_bound) {
  if (!g_) throw PreconditionError("SemilinearRHS: empty evaluator");
  if (!(sup_bound_ >= 0.0)) throw PreconditionError("SemilinearRHS: bound must be >= 0");
}

SemilinearRHS assemble_rhs(const KineticModel& model, const ParameterSet& params, double phi_p,
                           double lambda) {
  if (!(lambda > 0.0)) throw PreconditionError("assemble_rhs: lambda must be positive");
  const double r_b = model.r_b();
  const double log2 = std::log(r_b) * std::log(r_b);
  const double scale = log2 / (lambda * lambda);
  const double bound = r_b * scale * (model.bound(Species::ion) + model.bound(Species::electron));
  auto g = [&model, params, phi_p, r_b, scale](double nu, double x) {
    const double r = to_r(x, r_b);
    return r * scale * model.gtilde(nu + phi_p * (1.0 - x), r, params);
  };
  return {g, bound};
}

double dirichlet_energy(const RadialGridFunction& psi) {
  double e = 0.0;
  for (std::size_t k = 0; k + 1 < psi.size(); ++k) {
    const double d = psi.value(k + 1) - psi.value(k);
    e += d * d / (psi.node(k + 1) - psi.node(k));
  }
  return 0.5 * e;
}

double functional_J(const RadialGridFunction& psi, const SemilinearRHS& rhs, double tol) {
  const std::size_t n = psi.size();
  if (psi.value(0) != 0.0 || psi.value(n - 1) != 0.0)
    throw PreconditionError("functional_J: psi must vanish at both ends");
  double g_part = 0.0;
  for (std::size_t k = 1; k + 1 < n; ++k) {
    const double x = psi.node(k);
    const double w = 0.5 * (psi.node(k + 1) - psi.node(k - 1));
    auto gk = [&](double nu) { return rhs(nu, x); };
    g_part += w * adaptive_simpson(gk, 0.0, psi.value(k), tol);
  }
  return dirichlet_energy(psi) - g_part;
}

double coercivity_bound(double J, double sup_g) {
  return 2.0 * J + sup_g * sup_g / (2.0 * std::numbers::pi);
}

SemilinearResult solve_semilinear(const SemilinearRHS& rhs, std::size_t n_nodes, double tol,
                                  const SemilinearOptions& opt) {
  if (n_nodes < 3) throw PreconditionError("solve_semilinear: need at least 3 nodes");
  if (!(tol > 0.0)) throw PreconditionError("solve_semilinear: tol must be positive");
  const std::size_t n = n_nodes, m = n - 2;
  const std::vector<double> x = uniform_nodes(0.0, 1.0, n);
  const double h = 1.0 / static_cast<double>(n - 1);
  const double h2 = h * h;

  std::vector<double> u(n, 0.0);
  if (opt.initial) {
    if (opt.initial->size() != n)
      throw PreconditionError("solve_semilinear: initial guess has the wrong size");
    u = *opt.initial;
    u.front() = 0.0;
    u.back() = 0.0;
  }

  auto g_at = [&](std::size_t k) {
    return std::function<double(double)>([&rhs, xk = x[k]](double nu) { return rhs(nu, xk); });
  };
  std::vector<double> gv(n, 0.0), G(n, 0.0), F(m);
  parallel_for(m, opt.threads, [&](std::size_t i) {
    const std::size_t k = i + 1;
    const auto inc = simpson_increment(g_at(k), 0.0, u[k], rhs(0.0, x[k]), opt.simpson_tol,
                                         opt.simpson_depth);
    G[k] = inc.integral;
    gv[k] = inc.fb;
  });

  auto residual = [&](const std::vector<double>& uu, const std::vector<double>& gg,
                      std::vector<double>& out) {
    double r = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t k = i + 1;
      out[i] = (2.0 * uu[k] - uu[k - 1] - uu[k + 1]) / h2 - gg[k];
      r = std::max(r, std::abs(out[i]));
    }
    return r;
  };
  auto dirichlet = [&](const std::vector<double>& uu) {
    double e = 0.0;
    for (std::size_t k = 0; k + 1 < n; ++k) e += (uu[k + 1] - uu[k]) * (uu[k + 1] - uu[k]);
    return 0.5 * e / h;
  };
  auto energy = [&](const std::vector<double>& uu, const std::vector<double>& GG) {
    double s = 0.0;
    for (std::size_t k = 1; k + 1 < n; ++k) s += GG[k];
    return dirichlet(uu) - h * s;
  };
  // rounding in J plus the quadrature tolerance of the G increments over a step d
  auto noise_floor = [&](const std::vector<double>& uu, const std::vector<double>& GG,
                         double step_l1, double quad_tol) {
    double s = 0.0;
    for (std::size_t k = 1; k + 1 < n; ++k) s += std::abs(GG[k]);
    return 64.0 * std::numeric_limits<double>::epsilon() * (dirichlet(uu) + h * s) +
           h * quad_tol * step_l1;
  };

  SemilinearResult out{RadialGridFunction(x, u), false, 0, 0.0, 0.0, {}, {}};
  double res = residual(u, gv, F);
  double J = energy(u, G);
  out.history.push_back({res, J, dirichlet(u), 0.0, noise_floor(u, G, 0.0, 0.0), true});

  std::vector<double> gp(n), d(m), trial(n), Gt(n), gt(n);
  std::size_t it = 0;
  for (; it < opt.max_iterations && !(res <= tol); ++it) {
    // centered differences for g_nu
    parallel_for(m, opt.threads, [&](std::size_t i) {
      const std::size_t k = i + 1;
      const double dl = opt.fd_step * std::max(1.0, std::abs(u[k]));
      gp[k] = (rhs(u[k] + dl, x[k]) - rhs(u[k] - dl, x[k])) / (2.0 * dl);
    });
    std::vector<double> diag(m);
    for (std::size_t i = 0; i < m; ++i) diag[i] = 2.0 / h2 - gp[i + 1];
    for (std::size_t i = 0; i < m; ++i) d[i] = -F[i];
    bool newton = solve_tridiagonal(diag, -1.0 / h2, d);
    double slope = 0.0;
    for (std::size_t i = 0; newton && i < m; ++i) slope += h * F[i] * d[i];
    if (!newton || !(slope < 0.0)) newton = false;

    double noise = 0.0;
    bool accepted = false;
    double alpha = 1.0;
    for (int attempt = 0; attempt < 2 && !accepted; ++attempt) {
      if (!newton) {
        // H1 gradient direction: -(Laplacian)^{-1} F, always a descent direction
        for (std::size_t i = 0; i < m; ++i) d[i] = -F[i];
        solve_tridiagonal(std::vector<double>(m, 2.0 / h2), -1.0 / h2, d);
        slope = 0.0;
        for (std::size_t i = 0; i < m; ++i) slope += h * F[i] * d[i];
      }
      double d_l1 = 0.0;
      for (double v : d) d_l1 += std::abs(v);
      // G increments only need to resolve J to a small fraction of the expected decrease
      const double tol_density =
          std::max(opt.simpson_tol, d_l1 > 0.0 ? 1e-3 * std::abs(slope) / (h * d_l1) : 0.0);
      // a Newton direction that needs tiny steps is abandoned for the gradient early
      const double floor = newton ? std::max(opt.min_step, 1e-4) : opt.min_step;
      for (alpha = 1.0; alpha >= floor; alpha *= 0.5) {
        noise = noise_floor(u, G, alpha * d_l1, tol_density);
        trial = u;
        for (std::size_t i = 0; i < m; ++i) trial[i + 1] = u[i + 1] + alpha * d[i];
        parallel_for(m, opt.threads, [&](std::size_t i) {
          const std::size_t k = i + 1;
          const auto inc = simpson_increment(g_at(k), u[k], trial[k], gv[k], tol_density,
                                           opt.simpson_depth);
          Gt[k] = G[k] + inc.integral;
          gt[k] = inc.fb;
        });
        const double Jt = energy(trial, Gt);
        if (std::isfinite(Jt) && Jt <= J + opt.armijo * alpha * slope + noise) {
          accepted = true;
          break;
        }
      }
      if (!accepted && newton) newton = false;
      else break;
    }
    if (!accepted) {
      out.message = "line search failed to decrease J";
      break;
    }
    u.swap(trial);
    G.swap(Gt);
    gv.swap(gt);
    res = residual(u, gv, F);
    J = energy(u, G);
    out.history.push_back({res, J, dirichlet(u), alpha, noise, newton});
  }

  if (it > 0) {
    // the cached G carries the coarser line-search increments; report J from scratch
    parallel_for(m, opt.threads, [&](std::size_t i) {
      const std::size_t k = i + 1;
      G[k] = simpson_increment(g_at(k), 0.0, u[k], rhs(0.0, x[k]), opt.simpson_tol,
                               opt.simpson_depth)
                 .integral;
    });
    J = energy(u, G);
    out.history.back().energy = J;
  }
  out.psi = RadialGridFunction(x, u);
  out.converged = res <= tol;
  out.iterations = it;
  out.residual = res;
  out.energy = J;
  if (out.converged)
    out.message = "converged";
  else if (out.message.empty())
    out.message = "iteration cap reached";
  return out;
}

}  // namespace langmuir

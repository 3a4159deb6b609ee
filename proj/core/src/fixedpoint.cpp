#include "langmuir/fixedpoint.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include <Eigen/Dense>

#include "langmuir/parallel.hpp"

namespace langmuir {
namespace {

void check_options(const KineticModel& model, const FixedPointOptions& o) {
  if (!std::isfinite(o.phi_p)) throw PreconditionError("iterate: phi_p must be finite");
  if (!(o.lambda > 0.0)) throw PreconditionError("iterate: lambda must be positive");
  if (!(o.mu > 0.0 && o.mu <= 1.0)) throw PreconditionError("iterate: mu must lie in (0, 1]");
  if (o.nodes < 3) throw PreconditionError("iterate: need at least 3 nodes");
  if (!(o.tol_outer > 0.0 && o.tol_inner > 0.0 && o.tol_consistency > 0.0))
    throw PreconditionError("iterate: tolerances must be positive");
  if (o.max_outer < 1) throw PreconditionError("iterate: max_outer must be >= 1");
  if (!(o.omega > 0.0 && o.omega <= 1.0)) throw PreconditionError("iterate: omega must lie in (0, 1]");
  if (o.initial_phi) {
    const auto& p = *o.initial_phi;
    if (p.size() != o.nodes || p.front() != 1.0 || p.back() != model.r_b() ||
        p.value(0) != o.phi_p || p.value(p.size() - 1) != 0.0)
      throw PreconditionError("iterate: initial phi must match the grid and boundary data");
  }
}

void merge(ConsistencyResidual& into, const ConsistencyResidual& r) {
  into.heights = std::max(into.heights, r.heights);
  into.radii = std::max(into.radii, r.radii);
  into.combined = std::max(into.combined, r.combined);
}

ConsistencyResidual compare(const SpeciesParameters& stored, const SpeciesParameters& fresh,
                            double r_b) {
  ConsistencyResidual out;
  const auto& a = stored.max_table();
  const auto& b = fresh.max_table();
  if (a.size() != b.size() || stored.barrier_table().size() != fresh.barrier_table().size())
    throw PreconditionError("self_consistency_residual: parameter tables do not match");
  double scale = 1.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    // +-inf sentinels compare equal to themselves
    if (a[i] != b[i]) out.heights = std::max(out.heights, std::abs(a[i] - b[i]));
    if (std::isfinite(b[i])) scale = std::max(scale, std::abs(b[i]));
  }
  const auto& ra = stored.barrier_table();
  const auto& rb = fresh.barrier_table();
  for (std::size_t i = 0; i < ra.size(); ++i) out.radii = std::max(out.radii, std::abs(ra[i] - rb[i]));
  out.combined = std::max(out.heights / scale, out.radii / (r_b - 1.0));
  return out;
}

RadialGridFunction relax(const RadialGridFunction& prev, const RadialGridFunction& next,
                         double omega) {
  if (omega == 1.0) return next;
  std::vector<double> v(next.size());
  for (std::size_t k = 0; k < v.size(); ++k)
    v[k] = (1.0 - omega) * prev.value(k) + omega * next.value(k);
  v.front() = next.value(0);
  v.back() = 0.0;
  return {std::vector<double>(next.nodes().begin(), next.nodes().end()), std::move(v)};
}

double sup_gap(const RadialGridFunction& a, const RadialGridFunction& b) {
  double d = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) d = std::max(d, std::abs(a.value(k) - b.value(k)));
  return d;
}

double second_difference_sup(const RadialGridFunction& psi) {
  const double h = psi.node(1) - psi.node(0);
  double s = 0.0;
  for (std::size_t k = 1; k + 1 < psi.size(); ++k)
    s = std::max(s, std::abs(psi.value(k - 1) - 2.0 * psi.value(k) + psi.value(k + 1)) / (h * h));
  return s;
}

RadialGridFunction density_profile(const KineticModel& model, Species s,
                                   const RadialGridFunction& phi, const ParameterSet& params,
                                   std::size_t threads) {
  std::vector<double> v(phi.size());
  parallel_for(v.size(), threads, [&](std::size_t k) {
    v[k] = model.density(s, phi.value(k), phi.node(k), params) / phi.node(k);
  });
  return {std::vector<double>(phi.nodes().begin(), phi.nodes().end()), std::move(v)};
}

RadialGridFunction with_interior(const std::vector<double>& x, const Eigen::VectorXd& u,
                                 double phi_p, double r_b) {
  std::vector<double> v(x.size(), 0.0);
  for (Eigen::Index k = 0; k < u.size(); ++k) v[static_cast<std::size_t>(k) + 1] = u[k];
  return recover_phi(RadialGridFunction(x, std::move(v)), phi_p, r_b);
}

// Damped Newton on the direct residual in the interior psi values. Stops at
// tol, on a failed line search (the residual is at its quadrature floor) or
// at the cap; returns the best iterate.
RadialGridFunction predict(const KineticModel& model, const FixedPointOptions& o,
                           const RadialGridFunction& start, double tol,
                           std::vector<double>& history) {
  const std::size_t threads = std::max<std::size_t>(1, o.inner.threads);
  const RadialGridFunction psi0 = to_psi(start, o.phi_p);
  const std::vector<double> x(psi0.nodes().begin(), psi0.nodes().end());
  const auto m = static_cast<Eigen::Index>(x.size() - 2);
  const auto residual = [&](const Eigen::VectorXd& u, std::size_t th) {
    const auto r = direct_residual_vector(model, with_interior(x, u, o.phi_p, model.r_b()),
                                          o.phi_p, o.lambda, th);
    return Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(r.data(), m));
  };

  Eigen::VectorXd u(m);
  for (Eigen::Index k = 0; k < m; ++k) u[k] = psi0.value(static_cast<std::size_t>(k) + 1);
  Eigen::VectorXd F = residual(u, threads);
  history.push_back(F.lpNorm<Eigen::Infinity>());

  const PredictorOptions& p = o.predictor;
  for (std::size_t it = 0; it < p.max_iterations && history.back() > tol; ++it) {
    Eigen::MatrixXd jac(m, m);
    parallel_for(static_cast<std::size_t>(m), threads, [&](std::size_t j) {
      Eigen::VectorXd up = u, um = u;
      const auto c = static_cast<Eigen::Index>(j);
      up[c] += p.fd_step;
      um[c] -= p.fd_step;
      jac.col(c) = (residual(up, 1) - residual(um, 1)) / (2.0 * p.fd_step);
    });
    const Eigen::VectorXd d = jac.partialPivLu().solve(-F);
    if (!d.allFinite()) break;
    const double merit = F.squaredNorm();
    bool accepted = false;
    for (double a = 1.0; a >= p.min_step; a *= 0.5) {
      const Eigen::VectorXd trial = u + a * d;
      const Eigen::VectorXd Ft = residual(trial, threads);
      if (Ft.allFinite() && Ft.squaredNorm() < (1.0 - 1e-4 * a) * merit) {
        u = trial;
        F = Ft;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
    history.push_back(F.lpNorm<Eigen::Infinity>());
  }
  return with_interior(x, u, o.phi_p, model.r_b());
}

}  // namespace

ParameterSet update_parameters(const KineticModel& model, const RadialGridFunction& phi) {
  return model.parameters(phi);
}

ConsistencyResidual self_consistency_residual(const KineticModel& model,
                                              const RadialGridFunction& phi,
                                              const ParameterSet& params) {
  const ParameterSet fresh = model.parameters(phi);
  ConsistencyResidual out = compare(params.ion, fresh.ion, model.r_b());
  merge(out, compare(params.electron, fresh.electron, model.r_b()));
  return out;
}

std::vector<double> direct_residual_vector(const KineticModel& model, const RadialGridFunction& phi,
                                           double phi_p, double lambda, std::size_t threads) {
  const ParameterSet params = model.parameters(phi);
  const SemilinearRHS rhs = assemble_rhs(model, params, phi_p, lambda);
  const RadialGridFunction psi = to_psi(phi, phi_p);
  const std::size_t n = psi.size();
  const double h = 1.0 / static_cast<double>(n - 1);
  std::vector<double> res(n - 2, 0.0);
  parallel_for(n - 2, threads, [&](std::size_t i) {
    const std::size_t k = i + 1;
    const double x = static_cast<double>(k) * h;
    const double lap = (2.0 * psi.value(k) - psi.value(k - 1) - psi.value(k + 1)) / (h * h);
    res[i] = lap - rhs(psi.value(k), x);
  });
  return res;
}

double direct_poisson_residual(const KineticModel& model, const RadialGridFunction& phi,
                               double phi_p, double lambda, std::size_t threads) {
  double m = 0.0;
  for (double v : direct_residual_vector(model, phi, phi_p, lambda, threads))
    m = std::max(m, std::abs(v));
  return m;
}

SolveReport iterate(const KineticModel& model, const FixedPointOptions& o) {
  check_options(model, o);
  const auto start = std::chrono::steady_clock::now();
  const double r_b = model.r_b();
  const auto x = uniform_nodes(0.0, 1.0, o.nodes);

  RadialGridFunction phi = o.initial_phi
                               ? *o.initial_phi
                               : recover_phi(RadialGridFunction::constant(x, 0.0), o.phi_p, r_b);
  SolveReport rep{phi, phi, {}, {}, {}, 0.0, 0.0, phi, phi, phi, phi, false, {}, {}, 0.0};
  if (o.initializer == Initializer::newton) {
    try {
      phi = predict(model, o, phi, o.tol_inner, rep.predictor_history);
    } catch (const std::exception& e) {
      rep.message = std::string("predictor failed: ") + e.what() + "; ";
    }
  }
  RadialGridFunction psi = to_psi(phi, o.phi_p);
  rep.psi = psi;
  SemilinearOptions inner = o.inner;
  bool aborted = false;

  for (std::size_t n = 0; n < o.max_outer; ++n) {
    ParameterSet params;
    SemilinearResult sol{psi, false, 0, 0.0, 0.0, {}, {}};
    try {
      params = model.parameters(phi);
      const SemilinearRHS rhs = assemble_rhs(model, params, o.phi_p, o.lambda);
      rep.psi_second_bound = rhs.sup_bound();
      const auto v = psi.values();
      inner.initial = std::vector<double>(v.begin(), v.end());
      sol = solve_semilinear(rhs, o.nodes, o.tol_inner, inner);
    } catch (const std::exception& e) {
      rep.message += std::string("outer iteration ") + std::to_string(n + 1) + ": " + e.what();
      aborted = true;
      break;
    }
    rep.params = params;
    if (!sol.converged) {
      rep.message += "inner solve failed at outer iteration " + std::to_string(n + 1) + ": " +
                    sol.message + " (residual " + std::to_string(sol.residual) + ")";
      aborted = true;
      break;
    }
    const RadialGridFunction next = relax(phi, recover_phi(sol.psi, o.phi_p, r_b), o.omega);

    OuterIterate it;
    it.delta = sup_gap(next, phi);
    it.consistency = self_consistency_residual(model, next, params);
    it.inner_iterations = sol.iterations;
    it.inner_residual = sol.residual;
    it.energy = sol.energy;
    it.psi_second_sup = second_difference_sup(sol.psi);
    rep.history.push_back(it);
    if (o.on_iterate) o.on_iterate(n + 1, it);

    phi = next;
    psi = to_psi(phi, o.phi_p);
    rep.consistency = it.consistency;
    if (it.delta <= o.tol_outer && it.consistency.combined <= o.tol_consistency) {
      rep.converged = true;
      break;
    }
  }

  rep.phi = phi;
  rep.psi = psi;
  if (rep.converged) {
    rep.message = "converged";
  } else if (!aborted) {
    rep.message += "outer iteration cap reached";
  }
  try {
    const std::size_t threads = std::max<std::size_t>(1, o.inner.threads);
    rep.direct_residual = direct_poisson_residual(model, phi, o.phi_p, o.lambda, threads);
    const ParameterSet fresh = model.parameters(phi);
    rep.n_i = density_profile(model, Species::ion, phi, fresh, threads);
    rep.n_e = density_profile(model, Species::electron, phi, fresh, threads);
    rep.j_i = current_density(Species::ion, phi, model.distribution(Species::ion), 1.0, model.quad());
    rep.j_e = current_density(Species::electron, phi, model.distribution(Species::electron), o.mu,
                              model.quad());
  } catch (const std::exception& e) {
    rep.converged = false;
    rep.message += std::string("; diagnostics failed: ") + e.what();
  }
  rep.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

}  // namespace langmuir

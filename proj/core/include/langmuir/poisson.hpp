#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "langmuir/grid_function.hpp"
#include "langmuir/kinetics.hpp"

namespace langmuir {

/// x = log r / log r_b.
double to_x(double r, double r_b);
/// r = r_b^x.
double to_r(double x, double r_b);

/// phi(r) = psi(x) + phi_p (1 - x) on the nodes r_k = to_r(x_k).
/// Requires psi(0) = psi(1) = 0.
RadialGridFunction recover_phi(const RadialGridFunction& psi, double phi_p, double r_b);

/// Inverse of recover_phi: psi(x_k) = phi(r_k) - phi_p (1 - x_k), on the x-nodes of phi's grid.
RadialGridFunction to_psi(const RadialGridFunction& phi, double phi_p);

/// Right-hand side g(nu, x) of -psi'' = g(psi, x) together with a bound on sup |g|.
class SemilinearRHS {
 public:
  using Evaluator = std::function<double(double nu, double x)>;

  SemilinearRHS(Evaluator g, double sup_bound);

  double operator()(double nu, double x) const { return g_(nu, x); }
  double sup_bound() const { return sup_bound_; }

 private:
  Evaluator g_;
  double sup_bound_;
};

/// g(nu, x) = r_b^x log(r_b)^2 gtilde(nu + phi_p (1 - x), r_b^x) / lambda^2 for frozen parameters.
/// The bound is r_b log(r_b)^2 (g_bound_i + g_bound_e) / lambda^2. Keeps a reference to model.
SemilinearRHS assemble_rhs(const KineticModel& model, const ParameterSet& params, double phi_p,
                           double lambda);

/// 1/2 int |psi'|^2 for the piecewise-linear interpolant.
double dirichlet_energy(const RadialGridFunction& psi);

/// Trapezoidal int_0^1 (1/2 |psi'|^2 - G(psi(x), x)) dx, G(nu, x) = int_0^nu g(s, x) ds
/// by adaptive Simpson to absolute tolerance tol per node.
double functional_J(const RadialGridFunction& psi, const SemilinearRHS& rhs, double tol = 1e-12);

/// Coercivity right-hand side 2 J + sup|g|^2 / (2 pi), to compare with dirichlet_energy.
double coercivity_bound(double J, double sup_g);

struct SemilinearOptions {
  std::size_t max_iterations = 100;
  double armijo = 1e-4;
  double fd_step = 1e-7;           ///< relative step of the centered difference for g_nu
  double simpson_tol = 1e-9;       ///< G increments: tolerance per unit length in nu (floor)
  int simpson_depth = 12;          ///< recursion cap of the G increments
  double min_step = 1e-10;
  std::size_t threads = 1;
  std::optional<std::vector<double>> initial;  ///< nodal psi0; default psi0 = 0
};

struct SemilinearIterate {
  double residual = 0.0;   ///< max |-psi'' - g(psi, x)| at interior nodes
  double energy = 0.0;     ///< discrete J
  double dirichlet = 0.0;  ///< 1/2 int |psi'|^2
  double step = 0.0;       ///< accepted damping factor (0 for the initial state)
  double noise = 0.0;      ///< floating-point resolution of J used by the line search
  bool newton = true;      ///< false when the H1 gradient direction was used
};

struct SemilinearResult {
  RadialGridFunction psi;
  bool converged = false;
  std::size_t iterations = 0;
  double residual = 0.0;
  double energy = 0.0;
  std::vector<SemilinearIterate> history;  ///< initial state, then every accepted iterate
  std::string message;
};

/// Damped Newton on the discrete Euler-Lagrange system of J on a uniform
/// grid of n_nodes points, Armijo backtracking on J. Converged when the
/// residual is at most tol; non-convergence is reported, never thrown.
SemilinearResult solve_semilinear(const SemilinearRHS& rhs, std::size_t n_nodes, double tol,
                                  const SemilinearOptions& options = {});

}  // namespace langmuir

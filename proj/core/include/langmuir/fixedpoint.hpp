#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "langmuir/grid_function.hpp"
#include "langmuir/kinetics.hpp"
#include "langmuir/poisson.hpp"

namespace langmuir {

/// Parameters frozen from phi (both species).
ParameterSet update_parameters(const KineticModel& model, const RadialGridFunction& phi);

/// Gap between stored parameters and the ones recomputed from phi, on the
/// reference tables. Heights in energy units, radii in radius units.
struct ConsistencyResidual {
  double heights = 0.0;
  double radii = 0.0;
  /// max(heights / max(1, max |M_L|), radii / (r_b - 1))
  double combined = 0.0;
};

ConsistencyResidual self_consistency_residual(const KineticModel& model,
                                              const RadialGridFunction& phi,
                                              const ParameterSet& params);

/// How phi_0 is chosen. newton: damped Newton (finite-difference Jacobian) on the
/// direct residual, started from the start profile; the outer loop then starts there.
enum class Initializer { linear, newton };

struct PredictorOptions {
  std::size_t max_iterations = 30;
  double fd_step = 1e-6;           ///< absolute step of the centered Jacobian columns
  double min_step = 1e-6;          ///< smallest damping factor before giving up
};

struct FixedPointOptions {
  double phi_p = 0.0;
  double lambda = 1.0;
  double mu = 1.0 / 1836.0;
  std::size_t nodes = 129;         ///< x-nodes of the Poisson grid
  double tol_outer = 1e-10;        ///< on ||phi_{n+1} - phi_n||_inf
  double tol_consistency = 1e-6;   ///< on the combined self-consistency residual
  double tol_inner = 1e-8;         ///< on the semilinear residual
  std::size_t max_outer = 200;
  double omega = 1.0;              ///< relaxation phi <- (1 - omega) phi + omega phi_new
  SemilinearOptions inner{};       ///< initial is managed by the loop
  Initializer initializer = Initializer::linear;
  PredictorOptions predictor{};
  std::optional<RadialGridFunction> initial_phi;  ///< replaces the linear start profile
  std::function<void(std::size_t, const struct OuterIterate&)> on_iterate;  ///< progress hook
};

struct OuterIterate {
  double delta = 0.0;              ///< ||phi_{n+1} - phi_n||_inf
  ConsistencyResidual consistency; ///< params(phi_n) against phi_{n+1}
  std::size_t inner_iterations = 0;
  double inner_residual = 0.0;
  double energy = 0.0;
  double psi_second_sup = 0.0;     ///< max |psi''| of the inner solution
};

struct SolveReport {
  RadialGridFunction phi;
  RadialGridFunction psi;
  ParameterSet params;             ///< parameters used by the last inner solve
  std::vector<OuterIterate> history;
  ConsistencyResidual consistency;
  double direct_residual = 0.0;    ///< Poisson residual with parameters recomputed from phi
  double psi_second_bound = 0.0;   ///< sup bound of the rhs (ceiling for |psi''|)
  RadialGridFunction n_i, n_e, j_i, j_e;
  bool converged = false;
  std::string message;
  std::vector<double> predictor_history;  ///< direct residual per predictor iterate
  double wall_seconds = 0.0;
};

/// Max over interior nodes of |-psi'' - g(psi, x)| for the rhs built from
/// parameters recomputed from phi itself.
double direct_poisson_residual(const KineticModel& model, const RadialGridFunction& phi,
                               double phi_p, double lambda, std::size_t threads = 1);

/// Signed direct residual at the interior nodes (size n - 2).
std::vector<double> direct_residual_vector(const KineticModel& model, const RadialGridFunction& phi,
                                           double phi_p, double lambda, std::size_t threads = 1);

/// Outer loop: params(phi_n) -> rhs -> solve_semilinear (warm start) -> recover_phi -> relax.
/// Converged when the update is at most tol_outer and the consistency residual at most
/// tol_consistency. Inner failures end the loop and are recorded; nothing is thrown
/// after the options are validated.
SolveReport iterate(const KineticModel& model, const FixedPointOptions& options);

}  // namespace langmuir

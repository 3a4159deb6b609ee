#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "langmuir/distributions.hpp"
#include "langmuir/grid_function.hpp"
#include "langmuir/types.hpp"

namespace langmuir {

struct PhasePoint {
  double r = 1.0;
  double v_r = 0.0;
  double v_theta = 0.0;
  Species species = Species::ion;
};

/// Same point with both velocity components reversed: its forward
/// characteristic is the backward characteristic of p.
PhasePoint reversed(const PhasePoint& p);

/// Radial potential with its derivative. Piecewise-linear grid functions use
/// the exact segment slope (right segment at interior nodes).
class Potential {
 public:
  using Fn = std::function<double(double)>;

  explicit Potential(RadialGridFunction phi);
  Potential(Fn value, Fn derivative, double r_b);

  double operator()(double r) const;
  double derivative(double r) const;
  double r_b() const { return r_b_; }

  /// Intervals on which phi is smooth: the grid segments, or [1, r_b] for an analytic potential.
  std::size_t pieces() const;
  /// Piece containing r; at a shared node the one on the side of direction.
  std::size_t piece_at(double r, double direction) const;
  std::pair<double, double> piece_bounds(std::size_t k) const;
  /// phi' of piece k, extended beyond its ends.
  double piece_derivative(std::size_t k, double r) const;

 private:
  std::optional<RadialGridFunction> grid_;
  Fn value_, derivative_;
  double r_b_;
};

/// (v_r^2 + v_theta^2)/2 +- phi(r).
double particle_energy(const PhasePoint& p, const Potential& phi);
/// r v_theta.
double angular_momentum(const PhasePoint& p);

enum class Exit { probe, outer, timeout };
const char* to_string(Exit e);

struct TrajectorySample {
  double t, r, v_r, v_theta, energy, momentum;
};

struct Trajectory {
  std::vector<TrajectorySample> samples;  ///< only the end points unless recorded
  Exit exit = Exit::timeout;
  double time = 0.0;
  PhasePoint end;
  double energy_drift = 0.0;    ///< max |e(t) - e(0)|
  double momentum_drift = 0.0;  ///< max |L(t) - L(0)|
};

struct IntegratorOptions {
  double dt = 1e-3;
  double t_max = 100.0;
  bool record = false;
  double min_dt = 1e-12;  ///< floor of the step halving on non-finite steps
};

/// RK4 for r' = v_r, v_r' = v_theta^2/r -+ phi'(r), v_theta' = -v_r v_theta / r
/// until r leaves (1, r_b) or t_max. Steps never straddle a kink of phi: a step
/// leaving the current smooth piece is shortened by bisection onto its end,
/// and so is the exit.
Trajectory integrate_characteristic(const PhasePoint& p0, const Potential& phi,
                                    const IntegratorOptions& options = {});

enum class Origin { FromOuterBoundary, TrappedOrProbe };
const char* to_string(Origin o);

/// Membership in the sets of characteristics coming from r_b, for the
/// piecewise-linear potential phi (phi(r_b) = 0):
///   v_r < 0 and e > max U_L, or e < max U_L and U_L < e on [r, r_b],
/// with e = v_r^2/2 + U_L(r), U_L = L^2/2r^2 +- phi. Boundary cases are TrappedOrProbe.
Origin classify(const PhasePoint& p, const RadialGridFunction& phi);

/// f at p: 0 on TrappedOrProbe, else f_b(-sqrt(2 (e - U_L(r_b))), L / r_b).
double evaluate_f(const PhasePoint& p, const RadialGridFunction& phi, const BoundaryDistribution& f_b);

struct McEstimate {
  double value = 0.0;
  double std_error = 0.0;
};

/// Stratified Monte-Carlo estimate of n(r) = int int f dv_r dv_theta over a box
/// covering the support of f at r. Deterministic for a given seed.
McEstimate mc_density(double r, const RadialGridFunction& phi, Species species,
                      const BoundaryDistribution& f_b, std::size_t n_samples, std::uint64_t seed,
                      std::size_t threads = 1);

/// psi(r, v_r, v_theta) = a(r) b(v_r) c(v_theta), each factor (1 - z^2)^2 on |z| < 1.
/// Must vanish on the outgoing boundary: at r_b unless supp b is in v_r < 0,
/// at r = 1 unless supp b is in v_r > 0.
struct TestFunction {
  double r_center, r_half;
  double vr_center, vr_half;
  double vt_center, vt_half;

  double operator()(double r, double v_r, double v_theta) const;
  /// v_r d_r psi + (v_theta^2/r - s phi') d_vr psi - (v_r / r) d_vtheta (v_theta psi)
  double transport(double r, double v_r, double v_theta, double s, double dphi) const;
  bool admissible(double r_b) const;
};

/// Ten admissible test functions spread over [1, r_b] and the velocity box.
std::vector<TestFunction> default_test_functions(double r_b, double w_max, double l_max);

struct WeakResidual {
  double interior = 0.0;   ///< int f Psi (Monte Carlo)
  double boundary = 0.0;   ///< int f_b psi(r_b) v_r (deterministic quadrature)
  double residual = 0.0;   ///< interior - boundary
  double std_error = 0.0;
};

using PhaseDensity = std::function<double(const PhasePoint&)>;

/// Residual of the weak Vlasov formulation for one test function and an
/// arbitrary phase-space density f.
WeakResidual weak_form_residual(const PhaseDensity& f, const RadialGridFunction& phi,
                                Species species, const BoundaryDistribution& f_b,
                                const TestFunction& test, std::size_t n_samples,
                                std::uint64_t seed, std::size_t threads = 1);

/// Same for f built from f_b along the characteristics of phi; one entry per test function.
std::vector<WeakResidual> weak_form_residual(const RadialGridFunction& phi, Species species,
                                             const BoundaryDistribution& f_b,
                                             const std::vector<TestFunction>& tests,
                                             std::size_t n_samples, std::uint64_t seed,
                                             std::size_t threads = 1);

}  // namespace langmuir

#pragma once

#include <optional>
#include <vector>

#include "langmuir/distributions.hpp"
#include "langmuir/envelope.hpp"
#include "langmuir/grid_function.hpp"
#include "langmuir/line_envelope.hpp"
#include "langmuir/quadrature.hpp"

namespace langmuir {

/// beta(nu, r, L) = 2 nu + L^2 (1/r^2 - 1/r_b^2).
double beta(double nu, double r, double l, double r_b);

/// (w)_- / sqrt(w^2 - beta) if w^2 > beta, else 0.
double gamma_kernel(double nu, double r, double w, double l, double r_b);

/// Angular-momentum nodes on [0, r_b L_max] with weights doubled for the
/// mirror half L < 0. Used for the tabulated parameters.
struct LNodeSet {
  std::vector<double> l;
  std::vector<double> weight;
};

LNodeSet make_l_nodes(const BoundaryDistribution& f, double r_b, const QuadratureSpec& quad);

/// Frozen max- and barrier-parameters of one species.
///
/// Both are stored through the frozen effective potential
/// U_L(r_j) = offset_j + L^2/(2 r_j^2) on the radial nodes, which is affine in
/// lambda = L^2 at every node:
///   M_L      = max_j U_L(r_j)                      (or a constant, +-inf allowed)
///   D_L(r)   = (U_L)^dag(r)                         (or none: R == 1)
///   R(w, L)  = rho_tilde[U_L](w^2/2 + L^2/2r_b^2)   = crossing of D_L with that level.
/// The indicator r >= R(w, L) is evaluated as D_L(r) <= w^2/2 + L^2/2r_b^2.
/// Tables of M_L and R on reference nodes are materialized for reporting
/// and for the self-consistency residual.
class SpeciesParameters {
 public:
  SpeciesParameters() = default;

  /// Parameters frozen from a potential phi on [1, r_b].
  static SpeciesParameters from_potential(Species species, const RadialGridFunction& phi,
                                          const BoundaryDistribution& f, const QuadratureSpec& quad);
  /// R == 1 and a constant M_L (+-infinity allowed as sentinels).
  static SpeciesParameters open(Species species, double r_b, const BoundaryDistribution& f,
                                const QuadratureSpec& quad, double max_height);

  /// Same barrier heights, barrier profile frozen from another potential.
  SpeciesParameters with_barrier(const RadialGridFunction& phi) const;
  /// Same barrier heights, no barrier (R == 1).
  SpeciesParameters without_barrier() const;

  Species species() const { return species_; }
  double r_b() const { return r_b_; }
  bool has_barrier() const { return !barrier_radii_.empty(); }

  double max_height(double l) const;
  /// M_L as a function of lambda = L^2 (empty when M_L is constant).
  const LineEnvelope& max_lines() const { return max_lines_; }
  double max_constant() const { return max_constant_; }

  /// D_L(r) as a function of lambda = L^2 (requires has_barrier()).
  LineEnvelope barrier_lines(double r) const;
  double barrier_level(double r, double l) const;
  /// rho_tilde of the frozen U_L at energy w^2/2 + U_L(r_b).
  double barrier_radius(double w, double l) const;
  /// Frozen U_L on the radial nodes (requires has_barrier()).
  RadialGridFunction barrier_potential(double l) const;

  const std::vector<double>& reference_l() const { return reference_l_; }
  const std::vector<double>& reference_w() const { return reference_w_; }
  const std::vector<double>& max_table() const { return max_table_; }
  /// R at [l_index * reference_w().size() + w_index].
  const std::vector<double>& barrier_table() const { return barrier_table_; }

 private:
  void set_max_from(const RadialGridFunction& phi);
  void set_barrier_from(const RadialGridFunction& phi);
  void tabulate();

  Species species_ = Species::ion;
  double r_b_ = 2.0;
  LineEnvelope max_lines_;
  double max_constant_ = 0.0;
  std::vector<double> barrier_radii_, barrier_offset_;
  std::vector<LineEnvelope> suffix_;  // suffix_[k]: max over nodes j >= k
  std::vector<double> reference_l_, reference_w_, max_table_, barrier_table_;
};

struct ParameterSet {
  double r_b = 2.0;
  SpeciesParameters ion;
  SpeciesParameters electron;

  const SpeciesParameters& of(Species s) const { return s == Species::ion ? ion : electron; }
};

SpeciesParameters species_parameters(Species species, const RadialGridFunction& phi,
                                     const BoundaryDistribution& f, const QuadratureSpec& quad);
SpeciesParameters open_parameters(Species species, const BoundaryDistribution& f, double r_b,
                                  const QuadratureSpec& quad, double max_height);

/// Thrown when a density quadrature produces a non-finite value.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double r, double nu)
      : std::runtime_error(what), r_(r), nu_(nu) {}
  double r() const { return r_; }
  double nu() const { return nu_; }

 private:
  double r_, nu_;
};

/// r times the species density for frozen parameters:
///   int int Gamma(+-nu, r, w, L) f(w, L/r_b) (1 + 1{w^2 + L^2/r_b^2 < 2 M_L}) 1{r >= R(w, L)} dw dL
/// with +nu for ions and -nu for electrons. Reflected particles count twice.
double density_g(Species species, double nu, double r, const SpeciesParameters& params,
                 const BoundaryDistribution& f, const QuadratureSpec& quad);

/// g_i - g_e.
double gtilde(double nu, double r, const ParameterSet& params, const BoundaryDistribution& f_i,
              const BoundaryDistribution& f_e, const QuadratureSpec& quad);

/// 2 ||f||_1 + 4 ||f||_{L1_L(Linf_w(w dw))}.
double norm_bound(const BoundaryDistribution& f, const QuadratureSpec& quad);

/// Ceiling for density_g over all (nu, r): norm_bound applied to
/// f(w, L/r_b) (a factor r_b) times the maximal multiplicity 2.
double g_bound(const BoundaryDistribution& f, const QuadratureSpec& quad, double r_b);

/// Radial current of the species for the potential phi (phi(r_b) is the reference):
///   j(r) = (1/r) int int_{w < -sqrt(2 (max U_L - U_L(r_b)))} f(w, L/r_b) w dw dL,
/// divided by sqrt(mu) for electrons.
RadialGridFunction current_density(Species species, const RadialGridFunction& phi,
                                   const BoundaryDistribution& f, double mu,
                                   const QuadratureSpec& quad);

/// Bundles the radius, both distributions and the quadrature layout.
class KineticModel {
 public:
  KineticModel(double r_b, BoundaryDistribution ions, BoundaryDistribution electrons,
               QuadratureSpec quad = {});

  double r_b() const { return r_b_; }
  const QuadratureSpec& quad() const { return quad_; }
  const BoundaryDistribution& distribution(Species s) const {
    return s == Species::ion ? ions_ : electrons_;
  }
  double bound(Species s) const { return s == Species::ion ? bound_i_ : bound_e_; }

  ParameterSet parameters(const RadialGridFunction& phi) const;
  double density(Species s, double nu, double r, const ParameterSet& p) const {
    return density_g(s, nu, r, p.of(s), distribution(s), quad_);
  }
  double gtilde(double nu, double r, const ParameterSet& p) const {
    return langmuir::gtilde(nu, r, p, ions_, electrons_, quad_);
  }

 private:
  double r_b_;
  BoundaryDistribution ions_, electrons_;
  QuadratureSpec quad_;
  double bound_i_ = 0.0, bound_e_ = 0.0;
};

}  // namespace langmuir

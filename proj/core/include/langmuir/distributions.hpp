#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "langmuir/grid_function.hpp"
#include "langmuir/quadrature.hpp"
#include "langmuir/types.hpp"

namespace langmuir {

/// Truncation radii beyond which the distribution's mass is at most tail_mass.
struct DecayBox {
  double w_max = 1.0;
  double l_max = 1.0;
  double tail_mass = 0.0;
};

/// Non-negative incoming distribution f(w, L) on w < 0, even in L.
///
/// The evaluator is only ever called with w < 0 and L >= 0; evenness in L
/// is enforced by folding. Breakpoints list |w| and L values where f (or
/// its derivative) jumps, so quadrature panels never straddle them.
class BoundaryDistribution {
 public:
  using Evaluator = std::function<double(double w, double l)>;

  BoundaryDistribution(std::string family, Evaluator eval, DecayBox box,
                       std::vector<double> w_breaks = {}, std::vector<double> l_breaks = {},
                       std::map<std::string, double> params = {});

  double operator()(double w, double l) const {
    if (zero_ || w >= 0.0) return 0.0;
    return eval_(w, l < 0.0 ? -l : l);
  }

  const std::string& family() const { return family_; }
  const DecayBox& decay() const { return box_; }
  const std::vector<double>& w_breaks() const { return w_breaks_; }
  const std::vector<double>& l_breaks() const { return l_breaks_; }
  const std::map<std::string, double>& params() const { return params_; }
  bool is_zero() const { return zero_; }

  /// c * f with the same box and breakpoints.
  BoundaryDistribution scaled(double c) const;

  static BoundaryDistribution zero();
  /// height on (-w_extent, 0) x (-l_half, l_half).
  static BoundaryDistribution box(double height = 1.0, double w_extent = 1.0, double l_half = 1.0);
  /// amplitude * exp(-((w - drift)^2 + L^2) / (2 temperature)), drift <= 0.
  static BoundaryDistribution half_maxwellian(double amplitude = 1.0, double temperature = 1.0,
                                              double drift = 0.0);
  /// amplitude / (|w| + L^2 + 1) restricted to |w| < w_max, |L| < l_max.
  static BoundaryDistribution witness(double amplitude = 1.0, double w_max = 8.0,
                                      double l_max = 4.0);
  /// Smooth compact bump amplitude * b((w - center)/half_width) * b(L/l_half), b(z) = (1-z^2)^2.
  static BoundaryDistribution bump(double amplitude = 1.0, double center = -1.0,
                                   double half_width = 0.5, double l_half = 1.0);
  /// Rectilinear CSV table (columns w, L, f), bilinear inside the grid, zero outside.
  /// Rows with L < 0 must mirror rows with L > 0.
  static BoundaryDistribution from_csv(const std::string& path, double tail_mass = 0.0);

 private:
  std::string family_;
  Evaluator eval_;
  DecayBox box_;
  std::vector<double> w_breaks_;
  std::vector<double> l_breaks_;
  std::map<std::string, double> params_;
  bool zero_ = false;
};

/// Thrown when a distribution fails an admissibility gate (negative or non-finite values).
class DistributionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Effective truncation (quadrature overrides take precedence over the decay box).
double truncation_w(const BoundaryDistribution& f, const QuadratureSpec& quad);
double truncation_l(const BoundaryDistribution& f, const QuadratureSpec& quad);

/// Integral of |f| over w < 0 inside the truncation box.
double norm_l1(const BoundaryDistribution& f, const QuadratureSpec& quad);
/// Integral over L of sup_w |w f(w, L)|.
double norm_l1l_linfw(const BoundaryDistribution& f, const QuadratureSpec& quad);
/// Integral over w < 0 of sup_L |f(w, L)| / |w|^gamma, 0 < gamma < 1.
double norm_l1w_linfl(const BoundaryDistribution& f, double gamma, const QuadratureSpec& quad);

struct NormReport {
  std::string family;
  double l1 = 0.0;
  double l1l_linfw = 0.0;
  double l1w_linfl = 0.0;
  double gamma = 0.5;
  double tail_mass = 0.0;
  bool finite = false;
};

NormReport compute_norms(const BoundaryDistribution& f, const QuadratureSpec& quad,
                         double gamma = 0.5);

}  // namespace langmuir

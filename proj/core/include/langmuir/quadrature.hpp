#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace langmuir {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
  std::vector<double> x;
  std::vector<double> w;
};

/// Cached rule of the given order (1..64). Thread-safe.
const GaussRule& gauss_legendre(int order);

/// Composite Gauss-Legendre: `panels` equal panels of the given order on [a, b].
template <class F>
double integrate_panels(double a, double b, int panels, int order, F&& f) {
  if (!(b > a)) return 0.0;
  const GaussRule& g = gauss_legendre(order);
  const double h = (b - a) / panels;
  double sum = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double c = a + (p + 0.5) * h;
    double s = 0.0;
    for (std::size_t i = 0; i < g.x.size(); ++i) s += g.w[i] * f(c + 0.5 * h * g.x[i]);
    sum += 0.5 * h * s;
  }
  return sum;
}

/// Integrates over consecutive pieces [breaks[i], breaks[i+1]]; breaks must be sorted.
template <class F>
double integrate_pieces(std::span<const double> breaks, int panels, int order, F&& f) {
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
    sum += integrate_panels(breaks[i], breaks[i + 1], panels, order, f);
  return sum;
}

/// Adaptive Simpson on [a, b] to absolute tolerance tol (signed: a > b allowed).
double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                        int max_depth = 40);

/// Sorted, de-duplicated copy of pts restricted to [lo, hi], with lo and hi included.
std::vector<double> clip_breakpoints(std::vector<double> pts, double lo, double hi);

/// Truncation box and node layout for the (w, L) plane.
struct QuadratureSpec {
  int l_panels = 2;         ///< minimum panels per L piece (pieces split at every integrand kink)
  int l_resolution = 24;    ///< panels spanning the whole L range
  int l_order = 8;
  int w_panels = 1;         ///< minimum panels per velocity piece
  int w_resolution = 16;    ///< panels spanning [0, W_max]
  int w_order = 8;
  bool graded = true;       ///< geometric breakpoints toward the singular locus w^2 = beta
  double grading_floor = 1e-7;  ///< relative scale below which grading stops
  int norm_panels = 64;     ///< panels per piece for the norm integrals
  int norm_order = 10;
  std::size_t sup_nodes = 4001;  ///< dense node count for sup_w / sup_L
  std::size_t reference_w_nodes = 32;  ///< w-nodes of the tabulated barrier radii
  double w_max = 0.0;       ///< 0 = take from the distribution's decay box
  double l_max = 0.0;
  double tail_tolerance = 1e-12;

  /// Throws PreconditionError on non-positive counts or negative extents.
  void validate() const;
};

}  // namespace langmuir

#include "langmuir/quadrature.hpp"

#include <algorithm>
#include <array>
#include <numbers>
#include <string>

#include "langmuir/types.hpp"

namespace langmuir {
namespace {

constexpr int kMaxOrder = 64;

GaussRule build_rule(int n) {
  GaussRule g;
  g.x.resize(n);
  g.w.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
      }
      dp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    g.x[i] = -z;
    g.x[n - 1 - i] = z;
    g.w[i] = g.w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
  if (n % 2 == 1) g.x[n / 2] = 0.0;
  return g;
}

double simpson_step(const std::function<double(double)>& f, double a, double b, double fa,
                    double fm, double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

const GaussRule& gauss_legendre(int order) {
  static const std::array<GaussRule, kMaxOrder + 1> rules = [] {
    std::array<GaussRule, kMaxOrder + 1> r;
    for (int n = 1; n <= kMaxOrder; ++n) r[n] = build_rule(n);
    return r;
  }();
  if (order < 1 || order > kMaxOrder)
    throw PreconditionError("gauss_legendre: order must be in [1, 64], got " +
                            std::to_string(order));
  return rules[order];
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                        int max_depth) {
  if (a == b) return 0.0;
  if (a > b) return -adaptive_simpson(f, b, a, tol, max_depth);
  const double fa = f(a), fb = f(b), m = 0.5 * (a + b), fm = f(m);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_step(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

std::vector<double> clip_breakpoints(std::vector<double> pts, double lo, double hi) {
  std::erase_if(pts, [&](double p) { return !(p > lo && p < hi); });
  pts.push_back(lo);
  pts.push_back(hi);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

void QuadratureSpec::validate() const {
  if (l_panels < 1 || w_panels < 1 || norm_panels < 1 || l_resolution < 1 || w_resolution < 1)
    throw PreconditionError("quadrature: panel counts must be positive");
  if (l_order < 1 || l_order > 64 || w_order < 1 || w_order > 64 || norm_order < 1 ||
      norm_order > 64)
    throw PreconditionError("quadrature: Gauss orders must be in [1, 64]");
  if (sup_nodes < 2 || reference_w_nodes < 1)
    throw PreconditionError("quadrature: node counts too small");
  if (w_max < 0.0 || l_max < 0.0 || tail_tolerance < 0.0 || !(grading_floor > 0.0))
    throw PreconditionError("quadrature: extents and tolerances must be non-negative");
}

}  // namespace langmuir

#include "langmuir/kinetics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <sstream>

namespace langmuir {
namespace {

// Appends s * 2^k (k >= 0) inside (lo, hi), starting no lower than floor.
void add_graded(std::vector<double>& pts, double s, double lo, double hi, double floor) {
  double p = std::max(s, floor);
  if (!(p > 0.0) || !std::isfinite(p)) return;
  for (; p < hi; p *= 2.0)
    if (p > lo) pts.push_back(p);
}

double integrate_sorted(std::vector<double>& pts, const auto& piece_integrand) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) sum += piece_integrand(pts[i], pts[i + 1]);
  return sum;
}

// One L-slice of density_g: int over |w| of Gamma * f * multiplicity * barrier indicator.
// barrier_level is D_L(r), or -inf without a barrier.
double slice_density(double nu_s, double r, double l, double max_height, double barrier_level,
                     const BoundaryDistribution& f, const QuadratureSpec& q, double r_b,
                     double w_top) {
  const double lr = l / r_b;
  const double lr2 = lr * lr;
  const double b = beta(nu_s, r, l, r_b);
  const double lo2 = std::max({b, 0.0, 2.0 * barrier_level - lr2});
  const double w2 = w_top * w_top;
  if (lo2 >= w2) return 0.0;
  const double c2 = 2.0 * max_height - lr2;
  const double lo = std::sqrt(lo2);

  std::vector<double> ub{lo, w_top};
  if (c2 > lo2 && c2 < w2) ub.push_back(std::sqrt(c2));
  for (double x : f.w_breaks())
    if (x > lo && x < w_top) ub.push_back(x);
  const double floor = q.grading_floor * w_top;
  const double s = std::sqrt(std::abs(b));
  auto panels_for = [&](double len) {
    return std::max(q.w_panels, static_cast<int>(std::ceil(q.w_resolution * len / w_top)));
  };

  if (b >= 0.0) {
    // |w| = sqrt(b + t^2): Gamma dw = dt
    std::vector<double> tb;
    tb.reserve(ub.size() + 32);
    for (double u : ub) tb.push_back(std::sqrt(std::max(u * u - b, 0.0)));
    const double t_lo = *std::min_element(tb.begin(), tb.end());
    const double t_hi = *std::max_element(tb.begin(), tb.end());
    if (q.graded) add_graded(tb, s, t_lo, t_hi, floor);
    return integrate_sorted(tb, [&](double ta, double tb_) {
      const double tm = 0.5 * (ta + tb_);
      const double mult = b + tm * tm < c2 ? 2.0 : 1.0;
      return mult * integrate_panels(ta, tb_, panels_for(tb_ - ta), q.w_order, [&](double t) {
               return f(-std::sqrt(b + t * t), lr);
             });
    });
  }
  // b < 0: the kernel u / sqrt(u^2 - b) is bounded and smooth on scale sqrt(-b)
  if (q.graded) add_graded(ub, s, lo, w_top, floor);
  return integrate_sorted(ub, [&](double ua, double ub_) {
    const double um = 0.5 * (ua + ub_);
    const double mult = um * um < c2 ? 2.0 : 1.0;
    return mult * integrate_panels(ua, ub_, panels_for(ub_ - ua), q.w_order, [&](double u) {
             return u / std::sqrt(u * u - b) * f(-u, lr);
           });
  });
}

// int_{c}^{W} f(-u, lr) u du, split at the distribution breakpoints.
double slice_flux(double c, double lr, const BoundaryDistribution& f, const QuadratureSpec& q,
                  double w_top) {
  if (c >= w_top) return 0.0;
  std::vector<double> ub{c, w_top};
  for (double x : f.w_breaks())
    if (x > c && x < w_top) ub.push_back(x);
  return integrate_sorted(ub, [&](double a, double b) {
    return integrate_panels(a, b, 2 * q.w_panels, q.w_order,
                            [&](double u) { return u * f(-u, lr); });
  });
}

}  // namespace

double beta(double nu, double r, double l, double r_b) {
  return 2.0 * nu + l * l * (1.0 / (r * r) - 1.0 / (r_b * r_b));
}

double gamma_kernel(double nu, double r, double w, double l, double r_b) {
  if (w >= 0.0) return 0.0;
  const double b = beta(nu, r, l, r_b);
  const double d = w * w - b;
  return d > 0.0 ? -w / std::sqrt(d) : 0.0;
}

LNodeSet make_l_nodes(const BoundaryDistribution& f, double r_b, const QuadratureSpec& quad) {
  const double top = r_b * truncation_l(f, quad);
  std::vector<double> breaks;
  for (double x : f.l_breaks()) breaks.push_back(r_b * x);
  breaks = clip_breakpoints(breaks, 0.0, top);
  const GaussRule& g = gauss_legendre(quad.l_order);
  LNodeSet out;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double h = (breaks[i + 1] - breaks[i]) / quad.l_panels;
    for (int p = 0; p < quad.l_panels; ++p) {
      const double c = breaks[i] + (p + 0.5) * h;
      for (std::size_t k = 0; k < g.x.size(); ++k) {
        out.l.push_back(c + 0.5 * h * g.x[k]);
        out.weight.push_back(h * g.w[k]);  // 2 * (h/2) * w_k
      }
    }
  }
  return out;
}

namespace {

std::vector<double> reference_nodes(const BoundaryDistribution& f, const QuadratureSpec& quad) {
  const double W = truncation_w(f, quad);
  const std::size_t n = quad.reference_w_nodes;
  std::vector<double> w(n);
  for (std::size_t k = 0; k < n; ++k) w[k] = -W * (static_cast<double>(k) + 0.5) / n;
  return w;
}

std::vector<double> half_inverse_squares(std::span<const double> r) {
  std::vector<double> b(r.size());
  for (std::size_t j = 0; j < r.size(); ++j) b[j] = 0.5 / (r[j] * r[j]);
  return b;
}

}  // namespace

SpeciesParameters SpeciesParameters::from_potential(Species species, const RadialGridFunction& phi,
                                                    const BoundaryDistribution& f,
                                                    const QuadratureSpec& quad) {
  SpeciesParameters p;
  p.species_ = species;
  p.r_b_ = phi.back();
  p.reference_l_ = make_l_nodes(f, p.r_b_, quad).l;
  p.reference_w_ = reference_nodes(f, quad);
  p.set_max_from(phi);
  p.set_barrier_from(phi);
  p.tabulate();
  return p;
}

SpeciesParameters SpeciesParameters::open(Species species, double r_b,
                                          const BoundaryDistribution& f,
                                          const QuadratureSpec& quad, double max_height) {
  if (!(r_b > 1.0)) throw PreconditionError("r_b must exceed 1");
  if (std::isnan(max_height)) throw PreconditionError("barrier height must not be NaN");
  SpeciesParameters p;
  p.species_ = species;
  p.r_b_ = r_b;
  p.max_constant_ = max_height;
  p.reference_l_ = make_l_nodes(f, r_b, quad).l;
  p.reference_w_ = reference_nodes(f, quad);
  p.tabulate();
  return p;
}

SpeciesParameters SpeciesParameters::with_barrier(const RadialGridFunction& phi) const {
  if (phi.back() != r_b_) throw PreconditionError("with_barrier: potential on a different domain");
  SpeciesParameters p = *this;
  p.set_barrier_from(phi);
  p.tabulate();
  return p;
}

SpeciesParameters SpeciesParameters::without_barrier() const {
  SpeciesParameters p = *this;
  p.barrier_radii_.clear();
  p.barrier_offset_.clear();
  p.suffix_.clear();
  p.tabulate();
  return p;
}

void SpeciesParameters::set_max_from(const RadialGridFunction& phi) {
  const double s = charge_sign(species_);
  std::vector<double> a(phi.size());
  for (std::size_t j = 0; j < phi.size(); ++j) a[j] = s * phi.value(j);
  max_lines_ = LineEnvelope(a, half_inverse_squares(phi.nodes()));
}

void SpeciesParameters::set_barrier_from(const RadialGridFunction& phi) {
  const double s = charge_sign(species_);
  const std::size_t n = phi.size();
  barrier_radii_.assign(phi.nodes().begin(), phi.nodes().end());
  barrier_offset_.resize(n);
  for (std::size_t j = 0; j < n; ++j) barrier_offset_[j] = s * phi.value(j);
  const std::vector<double> b = half_inverse_squares(barrier_radii_);
  suffix_.assign(n, LineEnvelope{});
  for (std::size_t k = 0; k < n; ++k)
    suffix_[k] = LineEnvelope(std::span(barrier_offset_).subspan(k), std::span(b).subspan(k));
}

void SpeciesParameters::tabulate() {
  const std::size_t nl = reference_l_.size(), nw = reference_w_.size();
  max_table_.resize(nl);
  barrier_table_.assign(nl * nw, 1.0);
  for (std::size_t j = 0; j < nl; ++j) {
    max_table_[j] = max_height(reference_l_[j]);
    if (!has_barrier()) continue;
    const Envelope env(barrier_potential(reference_l_[j]));
    const double lr = reference_l_[j] / r_b_;
    for (std::size_t k = 0; k < nw; ++k) {
      const double w = reference_w_[k];
      barrier_table_[j * nw + k] = env.crossing(0.5 * w * w + 0.5 * lr * lr + barrier_offset_.back());
    }
  }
}

double SpeciesParameters::max_height(double l) const {
  return max_lines_.empty() ? max_constant_ : max_lines_(l * l);
}

LineEnvelope SpeciesParameters::barrier_lines(double r) const {
  if (!has_barrier()) throw PreconditionError("barrier_lines: parameters carry no barrier");
  const auto& x = barrier_radii_;
  if (r <= x.front()) return suffix_.front();
  if (r >= x.back()) return suffix_.back();
  const std::size_t k =
      static_cast<std::size_t>(std::upper_bound(x.begin(), x.end(), r) - x.begin()) - 1;
  if (r == x[k]) return suffix_[k];
  // U_L(r) (interpolated phi, exact L^2/2r^2) joins the node values to the right of r;
  // U_L is convex on the segment, so nothing in between exceeds both ends
  const double t = (r - x[k]) / (x[k + 1] - x[k]);
  const double a = (1.0 - t) * barrier_offset_[k] + t * barrier_offset_[k + 1];
  const double b = 0.5 / (r * r);
  const LineEnvelope& right = suffix_[k + 1];
  std::vector<double> as(right.intercepts().begin(), right.intercepts().end());
  std::vector<double> bs(right.slopes().begin(), right.slopes().end());
  as.push_back(a);
  bs.push_back(b);
  return LineEnvelope(as, bs);
}

double SpeciesParameters::barrier_level(double r, double l) const {
  return barrier_lines(r)(l * l);
}

RadialGridFunction SpeciesParameters::barrier_potential(double l) const {
  if (!has_barrier()) throw PreconditionError("barrier_potential: parameters carry no barrier");
  std::vector<double> v(barrier_radii_.size());
  for (std::size_t j = 0; j < v.size(); ++j)
    v[j] = 0.5 * l * l / (barrier_radii_[j] * barrier_radii_[j]) + barrier_offset_[j];
  return {barrier_radii_, std::move(v)};
}

double SpeciesParameters::barrier_radius(double w, double l) const {
  if (!has_barrier()) return 1.0;
  const double lr = l / r_b_;
  return rho_tilde(barrier_potential(l), 0.5 * w * w + 0.5 * lr * lr + barrier_offset_.back());
}

SpeciesParameters species_parameters(Species species, const RadialGridFunction& phi,
                                     const BoundaryDistribution& f, const QuadratureSpec& quad) {
  return SpeciesParameters::from_potential(species, phi, f, quad);
}

SpeciesParameters open_parameters(Species species, const BoundaryDistribution& f, double r_b,
                                  const QuadratureSpec& quad, double max_height) {
  return SpeciesParameters::open(species, r_b, f, quad, max_height);
}

namespace {

// Kinks of the L-slice integrand: lambda = L^2 where two of the piecewise-linear
// thresholds beta, 2 D_L(r) - lambda/r_b^2, 2 M_L - lambda/r_b^2, 0, W^2, (w breaks)^2
// cross, plus the kinks of D and M themselves and the distribution's L breaks.
std::vector<double> slice_kinks(double nu_s, double r, const SpeciesParameters& p,
                                const LineEnvelope* dl, const BoundaryDistribution& f,
                                double w_top, double lambda_top) {
  const double r_b = p.r_b();
  const double kappa = 1.0 / (r * r) - 1.0 / (r_b * r_b);
  const double inv = 1.0 / (r_b * r_b);
  const LineEnvelope& ml = p.max_lines();
  const bool m_lines = !ml.empty();
  const bool m_finite = m_lines || std::isfinite(p.max_constant());

  std::vector<double> lam{0.0, lambda_top};
  auto add = [&](std::span<const double> pts) {
    for (double x : pts)
      if (x > 0.0 && x < lambda_top) lam.push_back(x);
  };
  if (dl) add(dl->breaks());
  if (m_lines) add(ml.breaks());
  for (double lb : f.l_breaks()) {
    const double x = r_b * lb * r_b * lb;
    if (x > 0.0 && x < lambda_top) lam.push_back(x);
  }
  std::sort(lam.begin(), lam.end());
  lam.erase(std::unique(lam.begin(), lam.end()), lam.end());

  std::vector<double> consts{0.0, w_top * w_top};
  for (double x : f.w_breaks()) consts.push_back(x * x);
  auto values = [&](double x, std::vector<double>& out) {
    out.clear();
    out.push_back(2.0 * nu_s + kappa * x);
    if (dl) out.push_back(2.0 * (*dl)(x) - inv * x);
    if (m_finite) out.push_back(2.0 * (m_lines ? ml(x) : p.max_constant()) - inv * x);
    out.insert(out.end(), consts.begin(), consts.end());
  };

  std::vector<double> roots = lam;
  std::vector<double> va, vb;
  for (std::size_t i = 0; i + 1 < lam.size(); ++i) {
    const double xa = lam[i], xb = lam[i + 1];
    values(xa, va);
    values(xb, vb);
    for (std::size_t p1 = 0; p1 < va.size(); ++p1)
      for (std::size_t p2 = p1 + 1; p2 < va.size(); ++p2) {
        const double da = va[p1] - va[p2], db = vb[p1] - vb[p2];
        if ((da < 0.0 && db > 0.0) || (da > 0.0 && db < 0.0)) {
          const double x = xa + (xb - xa) * (da / (da - db));
          if (x > xa && x < xb) roots.push_back(x);
        }
      }
  }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
  for (double& x : roots) x = std::sqrt(x);
  return roots;
}

}  // namespace

double density_g(Species species, double nu, double r, const SpeciesParameters& params,
                 const BoundaryDistribution& f, const QuadratureSpec& quad) {
  if (f.is_zero()) return 0.0;
  const double r_b = params.r_b();
  const double nu_s = charge_sign(species) * nu;
  const double w_top = truncation_w(f, quad);
  const double l_top = r_b * truncation_l(f, quad);
  std::optional<LineEnvelope> dl;
  if (params.has_barrier()) dl = params.barrier_lines(r);
  const auto kinks =
      slice_kinks(nu_s, r, params, dl ? &*dl : nullptr, f, w_top, l_top * l_top);

  const GaussRule& g = gauss_legendre(quad.l_order);
  const double ninf = -std::numeric_limits<double>::infinity();
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < kinks.size(); ++i) {
    const double la = kinks[i], len = kinks[i + 1] - kinks[i];
    if (!(len > 0.0)) continue;
    // L = la + len q(s), q(s) = s^2 (3 - 2s): square-root behaviour at the kinks becomes smooth
    const int panels = std::max(
        quad.l_panels, static_cast<int>(std::ceil(quad.l_resolution * len / l_top)));
    const double hs = 1.0 / panels;
    for (int pnl = 0; pnl < panels; ++pnl) {
      const double c = (pnl + 0.5) * hs;
      for (std::size_t k = 0; k < g.x.size(); ++k) {
        const double sv = c + 0.5 * hs * g.x[k];
        const double q = sv * sv * (3.0 - 2.0 * sv);
        const double dq = 6.0 * sv * (1.0 - sv);
        const double l = la + len * q;
        const double lam = l * l;
        const double level = dl ? (*dl)(lam) : ninf;
        const double mh = params.max_height(l);
        sum += 0.5 * hs * g.w[k] * len * dq *
               slice_density(nu_s, r, l, mh, level, f, quad, r_b, w_top);
      }
    }
  }
  sum *= 2.0;
  if (!std::isfinite(sum)) {
    std::ostringstream os;
    os << "density quadrature for " << to_string(species) << "s is not finite at r=" << r
       << ", nu=" << nu;
    throw QuadratureError(os.str(), r, nu);
  }
  return sum;
}

double gtilde(double nu, double r, const ParameterSet& params, const BoundaryDistribution& f_i,
              const BoundaryDistribution& f_e, const QuadratureSpec& quad) {
  return density_g(Species::ion, nu, r, params.ion, f_i, quad) -
         density_g(Species::electron, nu, r, params.electron, f_e, quad);
}

double norm_bound(const BoundaryDistribution& f, const QuadratureSpec& quad) {
  return 2.0 * norm_l1(f, quad) + 4.0 * norm_l1l_linfw(f, quad);
}

double g_bound(const BoundaryDistribution& f, const QuadratureSpec& quad, double r_b) {
  return 2.0 * r_b * norm_bound(f, quad);
}

RadialGridFunction current_density(Species species, const RadialGridFunction& phi,
                                   const BoundaryDistribution& f, double mu,
                                   const QuadratureSpec& quad) {
  if (!(mu > 0.0 && mu <= 1.0)) throw PreconditionError("current_density: mu must lie in (0, 1]");
  const double r_b = phi.back();
  double total = 0.0;
  if (!f.is_zero()) {
    const double s = charge_sign(species);
    const double w_top = truncation_w(f, quad);
    const double tol = 1e-13 * std::max(1.0, w_top * w_top * truncation_l(f, quad));
    // integrand in L >= 0; the barrier height is piecewise quadratic in L
    auto per_l = [&](double l) {
      const double l2 = 0.5 * l * l;
      double top = -std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < phi.size(); ++k) {
        const double r = phi.node(k);
        top = std::max(top, l2 / (r * r) + s * phi.value(k));
      }
      const double edge = l2 / (r_b * r_b) + s * phi.value(phi.size() - 1);
      const double c = std::sqrt(std::max(2.0 * (top - edge), 0.0));
      return slice_flux(c, l / r_b, f, quad, w_top);
    };
    std::vector<double> breaks;
    for (double x : f.l_breaks()) breaks.push_back(r_b * x);
    breaks = clip_breakpoints(breaks, 0.0, r_b * truncation_l(f, quad));
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
      total += 2.0 * adaptive_simpson(per_l, breaks[i], breaks[i + 1], tol, 30);
  }
  const double scale = species == Species::electron ? 1.0 / std::sqrt(mu) : 1.0;
  std::vector<double> j(phi.size());
  for (std::size_t k = 0; k < phi.size(); ++k) j[k] = -scale * total / phi.node(k);
  return {std::vector<double>(phi.nodes().begin(), phi.nodes().end()), std::move(j)};
}

KineticModel::KineticModel(double r_b, BoundaryDistribution ions, BoundaryDistribution electrons,
                           QuadratureSpec quad)
    : r_b_(r_b), ions_(std::move(ions)), electrons_(std::move(electrons)), quad_(quad) {
  if (!(r_b_ > 1.0)) throw PreconditionError("r_b must exceed 1");
  quad_.validate();
  bound_i_ = g_bound(ions_, quad_, r_b_);
  bound_e_ = g_bound(electrons_, quad_, r_b_);
}

ParameterSet KineticModel::parameters(const RadialGridFunction& phi) const {
  if (phi.front() != 1.0 || phi.back() != r_b_)
    throw PreconditionError("parameters: potential must live on [1, r_b]");
  return {r_b_, SpeciesParameters::from_potential(Species::ion, phi, ions_, quad_),
          SpeciesParameters::from_potential(Species::electron, phi, electrons_, quad_)};
}

}  // namespace langmuir

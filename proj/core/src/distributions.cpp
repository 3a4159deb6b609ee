#include "langmuir/distributions.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace langmuir {
namespace {

double bump_profile(double z) {
  if (std::abs(z) >= 1.0) return 0.0;
  const double s = 1.0 - z * z;
  return s * s;
}

void check_sample(double v, double w, double l) {
  if (!std::isfinite(v) || v < 0.0) {
    std::ostringstream os;
    os << "distribution value " << v << " at (w=" << w << ", L=" << l
       << ") is negative or not finite";
    throw DistributionError(os.str());
  }
}

// Dense abscissae for sup-type norms: a uniform set plus points just inside each breakpoint.
std::vector<double> sup_set(double hi, const std::vector<double>& breaks, std::size_t n) {
  std::vector<double> pts = uniform_nodes(0.0, hi, n);
  auto add = [&](double b) {
    for (double off : {-1e-12, 1e-12}) {
      const double p = b * (1.0 + off);
      if (p > 0.0 && p < hi) pts.push_back(p);
    }
  };
  for (double b : breaks) add(b);
  add(hi);
  std::sort(pts.begin(), pts.end());
  return pts;
}

// Largest value of g over the sorted abscissae, refined by a golden-section
// search around the best node. Only actual function values are returned.
template <class G>
double sup_over(const std::vector<double>& pts, G&& g) {
  std::size_t best = 0;
  double s = -1.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double v = g(pts[i]);
    if (v > s) {
      s = v;
      best = i;
    }
  }
  if (best == 0 || best + 1 >= pts.size() || s <= 0.0) return std::max(s, 0.0);
  double a = pts[best - 1], b = pts[best + 1];
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
  double f1 = g(x1), f2 = g(x2);
  for (int it = 0; it < 60; ++it) {
    s = std::max({s, f1, f2});
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = g(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = g(x1);
    }
  }
  return std::max({s, f1, f2});
}

double parse_double(const std::string& tok, const std::string& path, std::size_t line) {
  try {
    std::size_t used = 0;
    double v = std::stod(tok, &used);
    if (tok.find_first_not_of(" \t\r", used) != std::string::npos) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw DistributionError(path + ":" + std::to_string(line) + ": cannot parse '" + tok + "'");
  }
}

}  // namespace

BoundaryDistribution::BoundaryDistribution(std::string family, Evaluator eval, DecayBox box,
                                           std::vector<double> w_breaks,
                                           std::vector<double> l_breaks,
                                           std::map<std::string, double> params)
    : family_(std::move(family)),
      eval_(std::move(eval)),
      box_(box),
      params_(std::move(params)) {
  if (!(box_.w_max > 0.0) || !(box_.l_max > 0.0) || box_.tail_mass < 0.0)
    throw PreconditionError("distribution '" + family_ + "': decay box must be positive");
  zero_ = !eval_;
  auto tidy = [](std::vector<double> b, double hi) {
    for (double& x : b) x = std::abs(x);
    std::erase_if(b, [hi](double x) { return !(x > 0.0 && x < hi); });
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
    return b;
  };
  w_breaks_ = tidy(std::move(w_breaks), box_.w_max);
  l_breaks_ = tidy(std::move(l_breaks), box_.l_max);
}

BoundaryDistribution BoundaryDistribution::scaled(double c) const {
  if (!(c >= 0.0)) throw PreconditionError("distribution scale must be non-negative");
  BoundaryDistribution out = *this;
  if (!zero_) {
    Evaluator inner = eval_;
    out.eval_ = [inner, c](double w, double l) { return c * inner(w, l); };
  }
  out.box_.tail_mass *= c;
  out.params_["scale"] = c * (params_.count("scale") ? params_.at("scale") : 1.0);
  return out;
}

BoundaryDistribution BoundaryDistribution::zero() {
  return {"zero", nullptr, DecayBox{1.0, 1.0, 0.0}};
}

BoundaryDistribution BoundaryDistribution::box(double height, double w_extent, double l_half) {
  if (!(height >= 0.0) || !(w_extent > 0.0) || !(l_half > 0.0))
    throw PreconditionError("box distribution: height >= 0 and positive extents required");
  auto eval = [=](double w, double l) { return (w > -w_extent && l < l_half) ? height : 0.0; };
  return {"box", eval, DecayBox{w_extent, l_half, 0.0}, {}, {},
          {{"height", height}, {"w_extent", w_extent}, {"l_half", l_half}}};
}

BoundaryDistribution BoundaryDistribution::half_maxwellian(double amplitude, double temperature,
                                                           double drift) {
  if (!(amplitude >= 0.0) || !(temperature > 0.0) || drift > 0.0)
    throw PreconditionError("half-Maxwellian: amplitude >= 0, temperature > 0, drift <= 0");
  const double s = std::sqrt(2.0 * temperature);
  const double w_max = -drift + 6.0 * s;
  const double l_max = 6.0 * s;
  const double gw = std::sqrt(std::numbers::pi * temperature / 2.0);
  const double w_in = gw * (std::erf(-drift / s) - std::erf((-w_max - drift) / s));
  const double w_out = gw * std::erfc((w_max + drift) / s);
  const double l_full = std::sqrt(2.0 * std::numbers::pi * temperature);
  const double l_out = l_full * std::erfc(l_max / s);
  const double tail = amplitude * (w_out * l_full + w_in * l_out);
  auto eval = [=](double w, double l) {
    const double d = w - drift;
    return amplitude * std::exp(-(d * d + l * l) / (2.0 * temperature));
  };
  return {"maxwellian", eval, DecayBox{w_max, l_max, tail}, {-drift}, {},
          {{"amplitude", amplitude}, {"temperature", temperature}, {"drift", drift}}};
}

BoundaryDistribution BoundaryDistribution::witness(double amplitude, double w_max, double l_max) {
  if (!(amplitude >= 0.0) || !(w_max > 0.0) || !(l_max > 0.0))
    throw PreconditionError("witness distribution: amplitude >= 0 and positive box required");
  auto eval = [=](double w, double l) {
    return (w > -w_max && l < l_max) ? amplitude / (-w + l * l + 1.0) : 0.0;
  };
  return {"witness", eval, DecayBox{w_max, l_max, 0.0}, {}, {},
          {{"amplitude", amplitude}, {"w_max", w_max}, {"l_max", l_max}}};
}

BoundaryDistribution BoundaryDistribution::bump(double amplitude, double center,
                                                double half_width, double l_half) {
  if (!(amplitude >= 0.0) || !(half_width > 0.0) || !(l_half > 0.0) ||
      !(center + half_width <= 0.0))
    throw PreconditionError("bump distribution: support must lie in w < 0");
  auto eval = [=](double w, double l) {
    return amplitude * bump_profile((w - center) / half_width) * bump_profile(l / l_half);
  };
  return {"bump", eval, DecayBox{-center + half_width, l_half, 0.0},
          {-center, -center - half_width}, {},
          {{"amplitude", amplitude}, {"center", center}, {"half_width", half_width},
           {"l_half", l_half}}};
}

BoundaryDistribution BoundaryDistribution::from_csv(const std::string& path, double tail_mass) {
  std::ifstream in(path);
  if (!in) throw DistributionError("cannot open distribution table '" + path + "'");
  std::vector<std::array<double, 3>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> tok;
    std::stringstream ss(line);
    for (std::string t; std::getline(ss, t, ',');) tok.push_back(t);
    if (tok.size() != 3) throw DistributionError(path + ":" + std::to_string(lineno) +
                                                 ": expected 3 columns w,L,f");
    if (rows.empty() && tok[0].find_first_of("0123456789") == std::string::npos) continue;
    rows.push_back({parse_double(tok[0], path, lineno), parse_double(tok[1], path, lineno),
                    parse_double(tok[2], path, lineno)});
  }
  if (rows.empty()) throw DistributionError("distribution table '" + path + "' is empty");

  std::vector<double> ws, ls;
  for (const auto& r : rows) {
    if (!(r[0] < 0.0)) throw DistributionError(path + ": w values must be negative");
    check_sample(r[2], r[0], r[1]);
    ws.push_back(r[0]);
    if (r[1] >= 0.0) ls.push_back(r[1]);
  }
  for (auto* v : {&ws, &ls}) {
    std::sort(v->begin(), v->end());
    v->erase(std::unique(v->begin(), v->end()), v->end());
  }
  if (ws.size() < 2 || ls.size() < 2)
    throw DistributionError(path + ": need at least two distinct w and L >= 0 values");

  const std::size_t nw = ws.size(), nl = ls.size();
  std::vector<double> grid(nw * nl, std::nan(""));
  auto index = [](const std::vector<double>& v, double x) {
    return static_cast<std::size_t>(std::lower_bound(v.begin(), v.end(), x) - v.begin());
  };
  for (const auto& r : rows)
    if (r[1] >= 0.0) grid[index(ws, r[0]) * nl + index(ls, r[1])] = r[2];
  for (const auto& r : rows) {
    if (r[1] >= 0.0) continue;
    const std::size_t j = index(ls, -r[1]);
    if (j >= nl || ls[j] != -r[1] || grid[index(ws, r[0]) * nl + j] != r[2])
      throw DistributionError(path + ": table is not symmetric in L");
  }
  if (std::any_of(grid.begin(), grid.end(), [](double v) { return std::isnan(v); }))
    throw DistributionError(path + ": table is not a full rectilinear (w, L) grid");

  auto eval = [ws, ls, grid, nl](double w, double l) {
    if (w < ws.front() || w > ws.back() || l < ls.front() || l > ls.back()) return 0.0;
    auto seg = [](const std::vector<double>& v, double x) {
      std::size_t k = static_cast<std::size_t>(std::upper_bound(v.begin(), v.end(), x) - v.begin());
      return std::min(k == 0 ? 0 : k - 1, v.size() - 2);
    };
    const std::size_t i = seg(ws, w), j = seg(ls, l);
    const double tw = (w - ws[i]) / (ws[i + 1] - ws[i]);
    const double tl = (l - ls[j]) / (ls[j + 1] - ls[j]);
    const double f00 = grid[i * nl + j], f01 = grid[i * nl + j + 1];
    const double f10 = grid[(i + 1) * nl + j], f11 = grid[(i + 1) * nl + j + 1];
    return (1 - tw) * ((1 - tl) * f00 + tl * f01) + tw * ((1 - tl) * f10 + tl * f11);
  };
  std::vector<double> wb, lb;
  if (nw <= 64)
    for (double w : ws) wb.push_back(-w);
  if (nl <= 64) lb = ls;
  DecayBox box{-ws.front(), ls.back(), tail_mass};
  return {"table", eval, box, wb, lb, {{"w_nodes", double(nw)}, {"l_nodes", double(nl)}}};
}

double truncation_w(const BoundaryDistribution& f, const QuadratureSpec& quad) {
  return quad.w_max > 0.0 ? quad.w_max : f.decay().w_max;
}

double truncation_l(const BoundaryDistribution& f, const QuadratureSpec& quad) {
  return quad.l_max > 0.0 ? quad.l_max : f.decay().l_max;
}

double norm_l1(const BoundaryDistribution& f, const QuadratureSpec& quad) {
  if (f.is_zero()) return 0.0;
  const double W = truncation_w(f, quad), Lm = truncation_l(f, quad);
  const auto wb = clip_breakpoints(f.w_breaks(), 0.0, W);
  const auto lb = clip_breakpoints(f.l_breaks(), 0.0, Lm);
  const double total = integrate_pieces(wb, quad.norm_panels, quad.norm_order, [&](double a) {
    return integrate_pieces(lb, quad.norm_panels, quad.norm_order, [&](double l) {
      const double v = f(-a, l);
      check_sample(v, -a, l);
      return v;
    });
  });
  return 2.0 * total;
}

double norm_l1l_linfw(const BoundaryDistribution& f, const QuadratureSpec& quad) {
  if (f.is_zero()) return 0.0;
  const double W = truncation_w(f, quad), Lm = truncation_l(f, quad);
  const auto ws = sup_set(W, f.w_breaks(), quad.sup_nodes);
  const auto lb = clip_breakpoints(f.l_breaks(), 0.0, Lm);
  const double half = integrate_pieces(lb, quad.norm_panels, quad.norm_order, [&](double l) {
    return sup_over(ws, [&](double a) {
      const double v = f(-a, l);
      check_sample(v, -a, l);
      return a * v;
    });
  });
  return 2.0 * half;
}

double norm_l1w_linfl(const BoundaryDistribution& f, double gamma, const QuadratureSpec& quad) {
  if (!(gamma > 0.0 && gamma < 1.0))
    throw PreconditionError("norm_l1w_linfl: gamma must lie in (0, 1)");
  if (f.is_zero()) return 0.0;
  const double W = truncation_w(f, quad), Lm = truncation_l(f, quad);
  const auto ls = sup_set(Lm, f.l_breaks(), quad.sup_nodes);
  const double p = 1.0 - gamma;
  // u = |w|^(1-gamma) turns dw / |w|^gamma into du / (1-gamma)
  std::vector<double> ub;
  for (double b : f.w_breaks()) ub.push_back(std::pow(b, p));
  ub = clip_breakpoints(ub, 0.0, std::pow(W, p));
  const double total = integrate_pieces(ub, quad.norm_panels, quad.norm_order, [&](double u) {
    const double a = std::pow(u, 1.0 / p);
    return sup_over(ls, [&](double l) {
      const double v = f(-a, l);
      check_sample(v, -a, l);
      return v;
    });
  });
  return total / p;
}

NormReport compute_norms(const BoundaryDistribution& f, const QuadratureSpec& quad, double gamma) {
  NormReport r;
  r.family = f.family();
  r.gamma = gamma;
  r.tail_mass = f.decay().tail_mass;
  r.l1 = norm_l1(f, quad);
  r.l1l_linfw = norm_l1l_linfw(f, quad);
  r.l1w_linfl = norm_l1w_linfl(f, gamma, quad);
  r.finite = std::isfinite(r.l1) && std::isfinite(r.l1l_linfw) && std::isfinite(r.l1w_linfl);
  if (!r.finite) throw DistributionError("distribution '" + f.family() + "' has a non-finite norm");
  return r;
}

}  // namespace langmuir

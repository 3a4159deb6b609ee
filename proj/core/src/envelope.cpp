#include "langmuir/envelope.hpp"

#include <algorithm>
#include <vector>

namespace langmuir {

RadialGridFunction dagger(const RadialGridFunction& f) {
  const std::size_t n = f.size();
  std::vector<double> r, v;
  r.reserve(n + n / 2);
  v.reserve(n + n / 2);

  double running = f.value(n - 1);
  r.push_back(f.node(n - 1));
  v.push_back(running);
  for (std::size_t k = n - 1; k-- > 0;) {
    const double a = f.value(k);
    const double b = f.value(k + 1);
    if (a > running) {
      // f climbs through the running max inside (r_k, r_k+1) unless b already equals it
      if (b < running) {
        const double x0 = f.node(k), x1 = f.node(k + 1);
        const double xc = x0 + (a - running) / (a - b) * (x1 - x0);
        if (xc > x0 && xc < x1) {
          r.push_back(xc);
          v.push_back(running);
        }
      }
      running = a;
    }
    r.push_back(f.node(k));
    v.push_back(running);
  }
  std::reverse(r.begin(), r.end());
  std::reverse(v.begin(), v.end());
  return {std::move(r), std::move(v)};
}

double nonincreasing_crossing(const RadialGridFunction& profile, double level) {
  const auto vals = profile.values();
  if (level < vals.back())
    throw PreconditionError("barrier radius: level below the value at the outer boundary");
  auto it = std::partition_point(vals.begin(), vals.end(), [level](double v) { return v > level; });
  const std::size_t k = static_cast<std::size_t>(it - vals.begin());
  if (k == 0 || vals[k] == level) return profile.node(k);
  const double x0 = profile.node(k - 1), x1 = profile.node(k);
  const double a = vals[k - 1], b = vals[k];
  const double x = x0 + (a - level) / (a - b) * (x1 - x0);
  return std::clamp(x, x0, x1);
}

double rho_tilde(const RadialGridFunction& f, double level) {
  if (level < f.value(f.size() - 1))
    throw PreconditionError("rho_tilde: level below f(r_b), the admissible set is empty");
  return nonincreasing_crossing(dagger(f), level);
}

double barrier_height(const RadialGridFunction& f) { return f.max_value(); }

RadialGridFunction effective_potential(const RadialGridFunction& phi, double angular_momentum,
                                       Species species) {
  const double s = charge_sign(species);
  const double l2 = 0.5 * angular_momentum * angular_momentum;
  std::vector<double> v(phi.size());
  for (std::size_t i = 0; i < phi.size(); ++i) {
    const double r = phi.node(i);
    v[i] = l2 / (r * r) + s * phi.value(i);
  }
  return {std::vector<double>(phi.nodes().begin(), phi.nodes().end()), std::move(v)};
}

Envelope::Envelope(const RadialGridFunction& f) : profile_(dagger(f)) {}

double Envelope::crossing(double level) const { return nonincreasing_crossing(profile_, level); }

}  // namespace langmuir

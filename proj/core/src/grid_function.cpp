#include "langmuir/grid_function.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "langmuir/types.hpp"

namespace langmuir {

RadialGridFunction::RadialGridFunction(std::vector<double> nodes, std::vector<double> values)
    : nodes_(std::move(nodes)), values_(std::move(values)) {
  if (nodes_.size() < 2) throw PreconditionError("grid function needs at least two nodes");
  if (nodes_.size() != values_.size())
    throw PreconditionError("grid function: node/value count mismatch");
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (!std::isfinite(nodes_[i]) || !std::isfinite(values_[i]))
      throw PreconditionError("grid function: non-finite entry at index " + std::to_string(i));
    if (i > 0 && !(nodes_[i] > nodes_[i - 1]))
      throw PreconditionError("grid function: nodes not strictly increasing at index " +
                              std::to_string(i));
  }
}

RadialGridFunction RadialGridFunction::sample(std::span<const double> nodes,
                                              const std::function<double(double)>& f) {
  std::vector<double> v(nodes.size());
  std::transform(nodes.begin(), nodes.end(), v.begin(), f);
  return {std::vector<double>(nodes.begin(), nodes.end()), std::move(v)};
}

RadialGridFunction RadialGridFunction::constant(std::span<const double> nodes, double c) {
  return {std::vector<double>(nodes.begin(), nodes.end()), std::vector<double>(nodes.size(), c)};
}

std::size_t RadialGridFunction::segment(double x) const {
  auto it = std::upper_bound(nodes_.begin(), nodes_.end(), x);
  std::size_t k = it == nodes_.begin() ? 0 : static_cast<std::size_t>(it - nodes_.begin()) - 1;
  return std::min(k, nodes_.size() - 2);
}

double RadialGridFunction::operator()(double x) const {
  if (x <= nodes_.front()) return values_.front();
  if (x >= nodes_.back()) return values_.back();
  std::size_t k = segment(x);
  if (x == nodes_[k]) return values_[k];
  double t = (x - nodes_[k]) / (nodes_[k + 1] - nodes_[k]);
  return values_[k] + t * (values_[k + 1] - values_[k]);
}

double RadialGridFunction::slope(double x) const {
  std::size_t k = segment(x);
  return (values_[k + 1] - values_[k]) / (nodes_[k + 1] - nodes_[k]);
}

double RadialGridFunction::max_value() const {
  return *std::max_element(values_.begin(), values_.end());
}

double RadialGridFunction::min_value() const {
  return *std::min_element(values_.begin(), values_.end());
}

bool RadialGridFunction::is_nonincreasing() const {
  return std::adjacent_find(values_.begin(), values_.end(), std::less<>()) == values_.end();
}

std::vector<double> uniform_nodes(double a, double b, std::size_t n) {
  if (n < 2) throw PreconditionError("uniform_nodes: need n >= 2");
  std::vector<double> x(n);
  const double h = (b - a) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) x[i] = a + h * static_cast<double>(i);
  x.back() = b;
  return x;
}

double sup_distance(const RadialGridFunction& f, const RadialGridFunction& g) {
  double d = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) d = std::max(d, std::abs(f.value(i) - g(f.node(i))));
  for (std::size_t i = 0; i < g.size(); ++i) d = std::max(d, std::abs(g.value(i) - f(g.node(i))));
  return d;
}

}  // namespace langmuir

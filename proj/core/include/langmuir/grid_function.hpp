#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace langmuir {

/// Piecewise-linear scalar field on a strictly increasing node set.
///
/// Radial profiles (phi, U_L, densities) live on [1, r_b]; the transformed
/// unknown psi lives on [0, 1]. Both use this type.
class RadialGridFunction {
 public:
  /// Throws PreconditionError unless there are at least two strictly
  /// increasing nodes and every value is finite.
  RadialGridFunction(std::vector<double> nodes, std::vector<double> values);

  static RadialGridFunction sample(std::span<const double> nodes,
                                   const std::function<double(double)>& f);
  static RadialGridFunction constant(std::span<const double> nodes, double c);

  std::span<const double> nodes() const { return nodes_; }
  std::span<const double> values() const { return values_; }
  std::size_t size() const { return nodes_.size(); }
  double node(std::size_t i) const { return nodes_[i]; }
  double value(std::size_t i) const { return values_[i]; }
  double front() const { return nodes_.front(); }
  double back() const { return nodes_.back(); }

  /// Linear interpolation. Arguments outside [front, back] are clamped.
  /// At a node the stored value is returned bit-exactly.
  double operator()(double x) const;

  /// Index k of the segment [node k, node k+1] containing x (clamped).
  std::size_t segment(double x) const;

  /// Slope of the interpolant on the segment containing x.
  double slope(double x) const;

  double max_value() const;
  double min_value() const;
  bool is_nonincreasing() const;

  friend bool operator==(const RadialGridFunction&, const RadialGridFunction&) = default;

 private:
  std::vector<double> nodes_;
  std::vector<double> values_;
};

/// n equispaced nodes from a to b, with the endpoints stored exactly.
std::vector<double> uniform_nodes(double a, double b, std::size_t n);

/// sup |f - g| over the union of both node sets (exact for piecewise-linear data).
double sup_distance(const RadialGridFunction& f, const RadialGridFunction& g);

}  // namespace langmuir

#pragma once

#include "langmuir/grid_function.hpp"
#include "langmuir/types.hpp"

namespace langmuir {

/// Smallest non-increasing majorant f^dag(r) = max_{r' in [r, r_b]} f(r').
///
/// Computed in one right-to-left pass. Where the running maximum is reached
/// in the interior of a segment, the crossing abscissa is inserted as a new
/// node, so the result is the exact envelope of the interpolant (not just of
/// the node values). Non-increasing input is returned unchanged.
RadialGridFunction dagger(const RadialGridFunction& f);

/// Barrier radius inf{a in [r0, r_b] : f(s) <= level for all s in [a, r_b]}.
/// Throws PreconditionError if level < f(r_b).
double rho_tilde(const RadialGridFunction& f, double level);

/// Global maximum of the interpolant, i.e. dagger(f)(r0).
double barrier_height(const RadialGridFunction& f);

/// Nodewise L^2/(2 r^2) + sign * phi(r), sign = +1 for ions and -1 for electrons.
RadialGridFunction effective_potential(const RadialGridFunction& phi, double angular_momentum,
                                       Species species);

/// A frozen envelope answering many barrier-radius queries in O(log n).
class Envelope {
 public:
  explicit Envelope(const RadialGridFunction& f);

  const RadialGridFunction& profile() const { return profile_; }
  double height() const { return profile_.value(0); }
  double at(double r) const { return profile_(r); }

  /// rho_tilde of the original function at this level.
  double crossing(double level) const;

 private:
  RadialGridFunction profile_;
};

/// Crossing of a non-increasing profile with a level: the left end of
/// {profile <= level}. Ties on a flat piece resolve to its left endpoint.
double nonincreasing_crossing(const RadialGridFunction& profile, double level);

}  // namespace langmuir

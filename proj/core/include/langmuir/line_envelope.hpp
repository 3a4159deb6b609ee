#pragma once

#include <span>
#include <vector>

namespace langmuir {

/// Upper envelope max_j (a_j + b_j * lambda) on lambda >= 0.
///
/// Effective potentials at fixed radii are affine in lambda = L^2, so barrier
/// heights and frozen envelope levels are convex piecewise-linear in lambda.
class LineEnvelope {
 public:
  LineEnvelope() = default;
  LineEnvelope(std::span<const double> intercepts, std::span<const double> slopes);

  bool empty() const { return a_.empty(); }
  double operator()(double lambda) const;
  /// Interior kinks (lambda > 0), increasing.
  std::span<const double> breaks() const { return {start_.data() + (start_.empty() ? 0 : 1),
                                                   start_.empty() ? 0 : start_.size() - 1}; }
  std::span<const double> intercepts() const { return a_; }
  std::span<const double> slopes() const { return b_; }

 private:
  std::vector<double> a_, b_;
  std::vector<double> start_;  // line i is active on [start_[i], start_[i+1])
};

}  // namespace langmuir

#include "langmuir/line_envelope.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "langmuir/types.hpp"

namespace langmuir {

LineEnvelope::LineEnvelope(std::span<const double> intercepts, std::span<const double> slopes) {
  if (intercepts.size() != slopes.size())
    throw PreconditionError("LineEnvelope: intercept/slope count mismatch");
  const std::size_t n = intercepts.size();
  if (n == 0) return;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    if (slopes[i] != slopes[j]) return slopes[i] < slopes[j];
    return intercepts[i] < intercepts[j];
  });

  // convex hull trick with slopes increasing; start_ holds where each line takes over
  const double lo = 0.0;
  for (std::size_t idx : order) {
    const double a = intercepts[idx], b = slopes[idx];
    if (!b_.empty() && b_.back() == b) {  // same slope, larger intercept wins
      a_.pop_back();
      b_.pop_back();
      start_.pop_back();
    }
    double from = lo;
    while (!a_.empty()) {
      // new line overtakes the last one at x
      const double x = (a_.back() - a) / (b - b_.back());
      if (x <= start_.back()) {
        a_.pop_back();
        b_.pop_back();
        start_.pop_back();
        from = lo;
        continue;
      }
      from = x;
      break;
    }
    if (a_.empty()) from = lo;
    a_.push_back(a);
    b_.push_back(b);
    start_.push_back(from);
  }
  // lines overtaken before lambda = 0 were never pushed past; drop a leading line whose range is empty
  while (start_.size() > 1 && start_[1] <= lo) {
    a_.erase(a_.begin());
    b_.erase(b_.begin());
    start_.erase(start_.begin());
    start_[0] = lo;
  }
}

double LineEnvelope::operator()(double lambda) const {
  if (a_.empty()) return -std::numeric_limits<double>::infinity();
  auto it = std::upper_bound(start_.begin(), start_.end(), lambda);
  std::size_t i = it == start_.begin() ? 0 : static_cast<std::size_t>(it - start_.begin()) - 1;
  return a_[i] + b_[i] * lambda;
}

}  // namespace langmuir

#pragma once

#include <algorithm>
#include <functional>
#include <span>
#include <vector>

namespace mar {

/// Euclidean projection of `v` onto {f >= 0, sum f = total}, in place.
/// Sort-based threshold search; O(n log n).
template <typename Real>
void project_onto_simplex(std::span<Real> v, Real total) {
  if (v.empty()) return;
  if (total <= Real(0)) {
    std::fill(v.begin(), v.end(), Real(0));
    return;
  }
  std::vector<Real> sorted(v.begin(), v.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<Real>());
  Real cumulative = 0;
  Real threshold = 0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    cumulative += sorted[i];
    const Real candidate = (cumulative - total) / static_cast<Real>(i + 1);
    if (sorted[i] - candidate > Real(0)) threshold = candidate;
  }
  for (Real& x : v) x = std::max(x - threshold, Real(0));
  // Re-normalize away the rounding left by the subtraction.
  Real sum = 0;
  for (Real x : v) sum += x;
  if (sum > Real(0))
    for (Real& x : v) x *= total / sum;
}

}  // namespace mar

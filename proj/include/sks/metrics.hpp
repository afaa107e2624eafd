#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "sks/sks.hpp"

namespace sks {

struct EvalRecord {
  double ace_po = 0.0;
  double ace_ao = 0.0;
};

/// Average corner error in positional offsets: mean Euclidean distance
/// between the two images of each square corner.
inline double ace_po(const Homography3& h_est, const Homography3& h_gt, const SquareConfig& cfg) {
  double sum = 0.0;
  for (const Point2& corner : cfg.corners())
    sum += distance(apply(h_est, corner), apply(h_gt, corner));
  return 0.25 * sum;
}

/// Average corner error in angular offsets: mean absolute difference of the
/// four cotangent deviations recovered from each homography's kernel.
inline double ace_ao(const Homography3& h_est, const Homography3& h_gt, const SquareConfig& cfg) {
  const AngularOffsets e = kernel_to_angular_offsets(decompose_sks(h_est, cfg).ker);
  const AngularOffsets g = kernel_to_angular_offsets(decompose_sks(h_gt, cfg).ker);
  return 0.25 * (std::abs(e.d_theta - g.d_theta) + std::abs(e.d_alpha - g.d_alpha) +
                 std::abs(e.d_beta - g.d_beta) + std::abs(e.d_gamma - g.d_gamma));
}

struct FiveNumberSummary {
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
};

namespace detail {

inline double median_of_sorted(const std::vector<double>& v, std::size_t lo, std::size_t hi) {
  const std::size_t n = hi - lo;
  const std::size_t mid = lo + n / 2;
  return (n % 2 == 1) ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

}  // namespace detail

/// Five-number summary with inclusive (median-split) quartiles: each half
/// contains the median element when the count is odd.
inline FiveNumberSummary quartile_summary(std::vector<double> values) {
  if (values.empty()) throw Error(errc::empty_input, "quartile_summary of empty list");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return {values.front(), detail::median_of_sorted(values, 0, (n + 1) / 2),
          detail::median_of_sorted(values, 0, n), detail::median_of_sorted(values, n / 2, n),
          values.back()};
}

}  // namespace sks

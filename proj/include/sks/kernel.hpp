#pragma once

#include <cmath>
#include <utility>

#include "sks/geometry.hpp"

namespace sks {

/// The 4-DOF kernel transformation acting between the canonical frames,
///
///         [ da+1    u     b   ]
///   H_K = [  0      1     0   ]
///         [  b      v    da+1 ]
///
/// It fixes the anchor points (-1, 0) and (1, 0) and carries all projective
/// distortion between the two similarity-normalized planes.
struct KernelParams {
  double delta_a = 0.0;
  double b = 0.0;
  double u = 0.0;
  double v = 0.0;
};

/// Deviations of the cotangents of the four quadrilateral angles from
/// cot 45 deg = 1.
struct AngularOffsets {
  double d_theta = 0.0;
  double d_alpha = 0.0;
  double d_beta = 0.0;
  double d_gamma = 0.0;
};

inline void check_kernel_invariants(const KernelParams& k) {
  const double a = k.delta_a + 1.0;
  if (std::abs(a + k.v) <= EPS_COMPARE || std::abs(a - k.v) <= EPS_COMPARE)
    throw Error(errc::degenerate_kernel, "kernel denominator vanishes");
  if (std::abs(a * a - k.b * k.b) < EPS_SINGULAR)
    throw Error(errc::degenerate_kernel, "kernel matrix is singular");
}

inline Homography3 kernel_to_matrix(const KernelParams& k) {
  check_kernel_invariants(k);
  const double a = k.delta_a + 1.0;
  return Homography3({a, k.u, k.b, 0, 1, 0, k.b, k.v, a});
}

/// Reads kernel parameters back from a matrix. The pattern is checked after
/// rescaling the middle element to 1, which makes the read scale-invariant.
inline KernelParams matrix_to_kernel(const Homography3& h, double pattern_tol = 1e-8) {
  Mat3 m = h.mat();
  const double mid = m[4];
  if (std::abs(mid) < EPS_SINGULAR * mat3_frobenius(m))
    throw Error(errc::not_a_kernel, "middle element vanishes");
  for (double& e : m) e /= mid;
  const double residual = std::max(
      {std::abs(m[3]), std::abs(m[5]), std::abs(m[0] - m[8]), std::abs(m[2] - m[6])});
  if (residual > pattern_tol)
    throw Error(errc::not_a_kernel,
                "kernel pattern residual " + std::to_string(residual));
  const KernelParams k{0.5 * (m[0] + m[8]) - 1.0, 0.5 * (m[2] + m[6]), m[1], m[7]};
  check_kernel_invariants(k);
  return k;
}

/// Images of the canonical points P3 = (0, 1) and Q3 = (0, -1):
///   P2 = ( (b+u)/(da+v+1),  1/(da+v+1) )
///   Q2 = ( (b-u)/(da-v+1), -1/(da-v+1) )
inline std::pair<Point2, Point2> kernel_canonical_images(const KernelParams& k) {
  check_kernel_invariants(k);
  const double dp = k.delta_a + k.v + 1.0;
  const double dq = k.delta_a - k.v + 1.0;
  return {Point2{(k.b + k.u) / dp, 1.0 / dp}, Point2{(k.b - k.u) / dq, -1.0 / dq}};
}

/// cot(theta) for the angle at M2 = (-1, 0) between M2->P2 and the M2->N2
/// baseline; equals da + b + u + v + 1.
inline double cot_theta(const KernelParams& k) {
  check_kernel_invariants(k);
  return k.delta_a + k.b + k.u + k.v + 1.0;
}

/// The linear map from kernel parameters to the four angular offsets. Theta
/// and beta sit at M2 (toward P2 and Q2), alpha and gamma at N2.
inline AngularOffsets kernel_to_angular_offsets(const KernelParams& k) {
  return {k.delta_a + k.b + k.u + k.v, k.delta_a - k.b - k.u + k.v,
          k.delta_a + k.b - k.u - k.v, k.delta_a - k.b + k.u - k.v};
}

/// Inverse of kernel_to_angular_offsets; the map matrix is orthogonal up to
/// a factor 4, so the inverse is its transpose over 4.
inline KernelParams angular_offsets_to_kernel(const AngularOffsets& a) {
  const KernelParams k{0.25 * (a.d_theta + a.d_alpha + a.d_beta + a.d_gamma),
                       0.25 * (a.d_theta - a.d_alpha + a.d_beta - a.d_gamma),
                       0.25 * (a.d_theta - a.d_alpha - a.d_beta + a.d_gamma),
                       0.25 * (a.d_theta + a.d_alpha - a.d_beta - a.d_gamma)};
  check_kernel_invariants(k);
  return k;
}

/// Whether the warped quadrilateral M2 P2 N2 Q2 is strictly convex. Reported
/// as a diagnostic; the parameter space is constrained only by the
/// denominator and determinant invariants.
inline bool warped_quad_convex(const KernelParams& k) {
  const auto [p2, q2] = kernel_canonical_images(k);
  const Point2 m2{-1.0, 0.0};
  const Point2 n2{1.0, 0.0};
  const std::array<Point2, 4> cycle{m2, p2, n2, q2};
  double first = 0.0;
  for (int i = 0; i < 4; ++i) {
    const double c = cross2(cycle[i], cycle[(i + 1) % 4], cycle[(i + 2) % 4]);
    if (std::abs(c) <= EPS_COMPARE) return false;
    if (i == 0)
      first = c;
    else if (c * first < 0.0)
      return false;
  }
  return true;
}

}  // namespace sks

#pragma once

#include <cmath>

#include "sks/geometry.hpp"

namespace sks {

/// Similarity transformation in the square-centered frame,
///
///         [ da+1   -b    u ]
///   H_S = [  b    da+1   v ]
///         [  0     0     1 ]
///
/// i.e. isotropic scale s and rotation t with da+1 = s*cos(t), b = s*sin(t),
/// plus translation (u, v).
struct SimilarityParams {
  double delta_a = 0.0;
  double b = 0.0;
  double u = 0.0;
  double v = 0.0;
};

/// Positional offsets of the two diagonal corners M and N, sign convention
/// offset = source corner - transformed corner.
struct PositionalOffsets2 {
  double dx_m = 0.0;
  double dy_m = 0.0;
  double dx_n = 0.0;
  double dy_n = 0.0;
};

/// H_T: moves the square center to the origin.
inline Homography3 translation_normalizer(const SquareConfig& cfg) {
  return Homography3::translation(-cfg.center.x, -cfg.center.y);
}

inline Homography3 similarity_to_matrix(const SimilarityParams& p) {
  const double a = p.delta_a + 1.0;
  if (a * a + p.b * p.b <= 1e-18)
    throw Error(errc::degenerate_similarity, "similarity scale is zero");
  return Homography3({a, -p.b, p.u, p.b, a, p.v, 0, 0, 1});
}

inline SimilarityParams matrix_to_similarity(const Homography3& h) {
  const Mat3& m = h.mat();
  const double residual =
      std::max({std::abs(m[6]), std::abs(m[7]), std::abs(m[0] - m[4]), std::abs(m[1] + m[3]),
                std::abs(m[8] - 1.0)});
  if (residual > EPS_COMPARE)
    throw Error(errc::not_a_similarity,
                "matrix lacks the similarity pattern (residual " + std::to_string(residual) + ")");
  return {0.5 * (m[0] + m[4]) - 1.0, 0.5 * (m[3] - m[1]), m[2], m[5]};
}

/// Full-image similarity H_T^-1 * H_S * H_T. Scale and rotation equal those
/// of H_S; only the translation picks up the square center.
inline Homography3 lift_similarity(const SimilarityParams& p, const SquareConfig& cfg) {
  const Mat3 hs = similarity_to_matrix(p).mat();
  const Mat3 ht = mat3_translation(-cfg.center.x, -cfg.center.y);
  const Mat3 ht_inv = mat3_translation(cfg.center.x, cfg.center.y);
  return Homography3(mat3_mul(ht_inv, mat3_mul(hs, ht)));
}

/// Linear map from similarity parameters to the M/N corner offsets:
///   dx_M =  r*da + r*b - u        dy_M = -r*da + r*b - v
///   dx_N = -r*da - r*b - u        dy_N =  r*da - r*b - v
inline PositionalOffsets2 params_to_offsets(const SimilarityParams& p, double r) {
  if (!(r > 0.0)) throw Error(errc::invalid_argument, "half side must be positive");
  return {r * p.delta_a + r * p.b - p.u, -r * p.delta_a + r * p.b - p.v,
          -r * p.delta_a - r * p.b - p.u, r * p.delta_a - r * p.b - p.v};
}

/// Exact inverse of params_to_offsets; the 4x4 map is invertible for any r > 0.
inline SimilarityParams offsets_to_params(const PositionalOffsets2& o, double r) {
  if (!(r > 0.0)) throw Error(errc::invalid_argument, "half side must be positive");
  const double sum = o.dx_m - o.dx_n;
  const double dif = o.dy_n - o.dy_m;
  return {(sum + dif) / (4.0 * r), (sum - dif) / (4.0 * r), -0.5 * (o.dx_m + o.dx_n),
          -0.5 * (o.dy_m + o.dy_n)};
}

/// The unique orientation-preserving similarity mapping m_src -> m_dst and
/// n_src -> n_dst. Solved in closed form via the complex ratio
/// (m_dst - n_dst) / (m_src - n_src).
inline Homography3 solve_similarity_two_points(Point2 m_src, Point2 n_src, Point2 m_dst,
                                               Point2 n_dst) {
  const double dx = m_src.x - n_src.x;
  const double dy = m_src.y - n_src.y;
  const double len2 = dx * dx + dy * dy;
  if (std::sqrt(len2) <= EPS_COMPARE)
    throw Error(errc::degenerate_point_pair, "source points coincide");
  if (distance(m_dst, n_dst) <= EPS_COMPARE)
    throw Error(errc::degenerate_point_pair, "target points coincide");
  const double ex = m_dst.x - n_dst.x;
  const double ey = m_dst.y - n_dst.y;
  const double a = (ex * dx + ey * dy) / len2;
  const double b = (ey * dx - ex * dy) / len2;
  const double u = m_dst.x - a * m_src.x + b * m_src.y;
  const double v = m_dst.y - b * m_src.x - a * m_src.y;
  const Homography3 h({a, -b, u, b, a, v, 0, 0, 1});
  const double scale = std::max({1.0, std::abs(m_dst.x), std::abs(m_dst.y), std::abs(n_dst.x),
                                 std::abs(n_dst.y)});
  if (distance(apply(h, m_src), m_dst) > EPS_COMPARE * scale ||
      distance(apply(h, n_src), n_dst) > EPS_COMPARE * scale)
    throw Error(errc::numerical_failure, "two-point similarity residual check failed");
  return h;
}

}  // namespace sks

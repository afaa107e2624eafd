#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <vector>

#include "sks/error.hpp"

namespace sks {

/// Entries smaller than this (relative to the matrix scale) count as zero.
constexpr double EPS_SINGULAR = 1e-12;
/// Tolerance for geometric comparisons between computed quantities.
constexpr double EPS_COMPARE = 1e-9;

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  Point2() = default;
  Point2(double px, double py) : x(px), y(py) {
    if (!std::isfinite(px) || !std::isfinite(py))
      throw Error(errc::invalid_argument, "Point2 coordinates must be finite");
  }
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }

inline double distance(Point2 a, Point2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

/// z-component of the cross product (b - a) x (c - a); twice the signed
/// triangle area.
inline double cross2(Point2 a, Point2 b, Point2 c) {
  return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

/// Row-major 3x3 matrix: m[3*row + col].
using Mat3 = std::array<double, 9>;

constexpr Mat3 mat3_identity() { return {1, 0, 0, 0, 1, 0, 0, 0, 1}; }

constexpr Mat3 mat3_translation(double tx, double ty) { return {1, 0, tx, 0, 1, ty, 0, 0, 1}; }

inline Mat3 mat3_mul(const Mat3& a, const Mat3& b) {
  Mat3 r{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      r[3 * i + j] = a[3 * i] * b[j] + a[3 * i + 1] * b[3 + j] + a[3 * i + 2] * b[6 + j];
  return r;
}

constexpr double mat3_det(const Mat3& m) {
  return m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) +
         m[2] * (m[3] * m[7] - m[4] * m[6]);
}

/// adj(A), so that A * adj(A) = det(A) * I. Projectively this is A^-1.
inline Mat3 mat3_adjugate(const Mat3& m) {
  return {m[4] * m[8] - m[5] * m[7], m[2] * m[7] - m[1] * m[8], m[1] * m[5] - m[2] * m[4],
          m[5] * m[6] - m[3] * m[8], m[0] * m[8] - m[2] * m[6], m[2] * m[3] - m[0] * m[5],
          m[3] * m[7] - m[4] * m[6], m[1] * m[6] - m[0] * m[7], m[0] * m[4] - m[1] * m[3]};
}

inline double mat3_frobenius(const Mat3& m) {
  double s = 0.0;
  for (double e : m) s += e * e;
  return std::sqrt(s);
}

/// Canonical scale representative of a projective matrix: m22 = 1 whenever
/// m22 carries weight relative to the Frobenius norm, otherwise unit
/// Frobenius norm with the first non-negligible entry positive. Idempotent
/// bit-for-bit.
inline Mat3 canonicalize(Mat3 m) {
  const double frob = mat3_frobenius(m);
  if (!(frob > 0.0) || !std::isfinite(frob))
    throw Error(errc::singular_matrix, "matrix is zero or non-finite");
  if (std::abs(m[8]) >= EPS_SINGULAR * frob) {
    const double s = m[8];
    for (double& e : m) e /= s;
  } else {
    if (std::abs(frob - 1.0) > 1e-14)
      for (double& e : m) e /= frob;
    for (double e : m) {
      if (std::abs(e) > EPS_SINGULAR) {
        if (e < 0.0)
          for (double& f : m) f = -f;
        break;
      }
    }
  }
  return m;
}

/// Invertible 3x3 projective transformation stored in canonical scale.
class Homography3 {
 public:
  explicit Homography3(const Mat3& raw) : m_(canonicalize(raw)) {
    if (std::abs(mat3_det(m_)) < EPS_SINGULAR)
      throw Error(errc::singular_matrix, "homography must be invertible");
  }

  static Homography3 identity() { return Homography3(mat3_identity()); }
  static Homography3 translation(double tx, double ty) {
    return Homography3(mat3_translation(tx, ty));
  }

  const Mat3& mat() const { return m_; }
  double operator()(int row, int col) const { return m_[3 * row + col]; }

 private:
  Mat3 m_;
};

/// Dehomogenized image of p under h.
inline Point2 apply(const Homography3& h, Point2 p) {
  const Mat3& m = h.mat();
  const double w = m[6] * p.x + m[7] * p.y + m[8];
  if (std::abs(w) < EPS_SINGULAR)
    throw Error(errc::point_at_infinity, "point maps to the line at infinity");
  return {(m[0] * p.x + m[1] * p.y + m[2]) / w, (m[3] * p.x + m[4] * p.y + m[5]) / w};
}

/// a after b: apply(compose(a, b), p) == apply(a, apply(b, p)).
inline Homography3 compose(const Homography3& a, const Homography3& b) {
  return Homography3(mat3_mul(a.mat(), b.mat()));
}

inline Homography3 invert(const Homography3& h) {
  return Homography3(mat3_adjugate(h.mat()));
}

/// Frobenius norm of the difference of canonical representatives; zero iff
/// the two transforms are equal up to scale.
inline double projective_distance(const Homography3& a, const Homography3& b) {
  double s = 0.0;
  for (int i = 0; i < 9; ++i) {
    const double d = a.mat()[i] - b.mat()[i];
    s += d * d;
  }
  return std::sqrt(s);
}

/// Axis-aligned square given by center O and half side r, with the fixed
/// corner labeling used throughout:
///   M = O + (-r,  r)   N = O + ( r, -r)   P = O + ( r,  r)   Q = O + (-r, -r)
struct SquareConfig {
  Point2 center;
  double half_side;

  SquareConfig(Point2 o, double r) : center(o), half_side(r) {
    if (!(r > 0.0) || !std::isfinite(r))
      throw Error(errc::invalid_argument, "SquareConfig requires half_side > 0");
  }

  Point2 corner_m() const { return {center.x - half_side, center.y + half_side}; }
  Point2 corner_n() const { return {center.x + half_side, center.y - half_side}; }
  Point2 corner_p() const { return {center.x + half_side, center.y + half_side}; }
  Point2 corner_q() const { return {center.x - half_side, center.y - half_side}; }

  /// In M, N, P, Q order.
  std::array<Point2, 4> corners() const {
    return {corner_m(), corner_n(), corner_p(), corner_q()};
  }
};

struct Correspondence {
  Point2 source;
  Point2 target;
};

/// Ordered point pairs with pairwise-distinct source points.
class CorrespondenceSet {
 public:
  CorrespondenceSet() = default;
  explicit CorrespondenceSet(std::vector<Correspondence> pairs) : pairs_(std::move(pairs)) {
    check_distinct_sources(pairs_);
  }

  std::size_t size() const { return pairs_.size(); }
  const Correspondence& operator[](std::size_t i) const { return pairs_[i]; }
  const std::vector<Correspondence>& pairs() const { return pairs_; }
  auto begin() const { return pairs_.begin(); }
  auto end() const { return pairs_.end(); }

 private:
  static void check_distinct_sources(const std::vector<Correspondence>& ps) {
    std::vector<std::size_t> order(ps.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return ps[a].source.x < ps[b].source.x;
    });
    for (std::size_t i = 0; i < order.size(); ++i) {
      for (std::size_t j = i + 1; j < order.size(); ++j) {
        if (ps[order[j]].source.x - ps[order[i]].source.x > EPS_COMPARE) break;
        if (distance(ps[order[i]].source, ps[order[j]].source) <= EPS_COMPARE)
          throw Error(errc::degenerate_point_pair, "coincident source points in correspondence set");
      }
    }
  }

  std::vector<Correspondence> pairs_;
};

}  // namespace sks

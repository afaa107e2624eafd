#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "sks/geometry.hpp"
#include "sks/kernel.hpp"
#include "sks/similarity.hpp"

namespace sks {

/// The eight decoupled geometric parameters of a homography: four in the
/// mid-chain similarity and four in the kernel transformation.
struct HomographyParams8 {
  SimilarityParams sim;
  KernelParams ker;
};

/// Offsets of all four corners M, N, P, Q (offset = source - transformed).
struct PositionalOffsets4 {
  double dx_m = 0.0;
  double dy_m = 0.0;
  double dx_n = 0.0;
  double dy_n = 0.0;
  double dx_p = 0.0;
  double dy_p = 0.0;
  double dx_q = 0.0;
  double dy_q = 0.0;
};

namespace detail {

/// N_sr: similarity mapping the centered corners to the canonical anchors,
/// (-r, r) -> (-1, 0) and (r, -r) -> (1, 0); P and Q land on (0, +-1).
inline Mat3 diamond_normalizer(double r) {
  const double s = 0.5 / r;
  return {s, -s, 0, s, s, 0, 0, 0, 1};
}

/// Closed-form inverse of diamond_normalizer.
inline Mat3 diamond_normalizer_inv(double r) { return {r, r, 0, -r, r, 0, 0, 0, 1}; }

}  // namespace detail

/// H_S2 = N_sr * H_T: maps the square corners M, N, P, Q to the canonical
/// points (-1,0), (1,0), (0,1), (0,-1).
inline Homography3 canonical_normalizer(const SquareConfig& cfg) {
  return Homography3(mat3_mul(detail::diamond_normalizer(cfg.half_side),
                              mat3_translation(-cfg.center.x, -cfg.center.y)));
}

/// Assembles the homography H = H_T^-1 H_S H_T H_S2^-1 H_K H_S2 by fixed-size
/// matrix products only; with H_S2 = N_sr * H_T the inner H_T H_S2^-1
/// collapses to N_sr^-1, whose inverse is closed-form. No linear system is
/// solved anywhere in the chain.
inline Homography3 compose_sks(const HomographyParams8& p, const SquareConfig& cfg) {
  check_kernel_invariants(p.ker);
  const double as = p.sim.delta_a + 1.0;
  if (as * as + p.sim.b * p.sim.b <= 1e-18)
    throw Error(errc::degenerate_similarity, "similarity scale is zero");
  const double ak = p.ker.delta_a + 1.0;
  const Mat3 hs = {as, -p.sim.b, p.sim.u, p.sim.b, as, p.sim.v, 0, 0, 1};
  const Mat3 hk = {ak, p.ker.u, p.ker.b, 0, 1, 0, p.ker.b, p.ker.v, ak};
  const Mat3 ht = mat3_translation(-cfg.center.x, -cfg.center.y);
  const Mat3 ht_inv = mat3_translation(cfg.center.x, cfg.center.y);
  const Mat3 nsr = detail::diamond_normalizer(cfg.half_side);
  const Mat3 nsr_inv = detail::diamond_normalizer_inv(cfg.half_side);
  Mat3 m = mat3_mul(nsr, ht);
  m = mat3_mul(hk, m);
  m = mat3_mul(nsr_inv, m);
  m = mat3_mul(hs, m);
  m = mat3_mul(ht_inv, m);
  return Homography3(m);
}

/// Recovers the eight parameters from a homography. The similarity factor is
/// pinned by the images of M and N (the kernel chain fixes both), and the
/// kernel is whatever conjugation residue remains.
inline HomographyParams8 decompose_sks(const Homography3& h, const SquareConfig& cfg) {
  const Point2 src_m = cfg.corner_m();
  const Point2 src_n = cfg.corner_n();
  const Point2 img_m = apply(h, src_m);
  const Point2 img_n = apply(h, src_n);
  if (distance(img_m, img_n) <= EPS_COMPARE)
    throw Error(errc::not_decomposable, "images of M and N coincide");
  const Homography3 hs1 = solve_similarity_two_points(src_m, src_n, img_m, img_n);

  const Mat3 ht = mat3_translation(-cfg.center.x, -cfg.center.y);
  const Mat3 ht_inv = mat3_translation(cfg.center.x, cfg.center.y);
  const SimilarityParams sim =
      matrix_to_similarity(Homography3(mat3_mul(ht, mat3_mul(hs1.mat(), ht_inv))));

  const Homography3 hs2 = canonical_normalizer(cfg);
  const Mat3 k_raw = mat3_mul(
      hs2.mat(), mat3_mul(invert(hs1).mat(), mat3_mul(h.mat(), invert(hs2).mat())));
  KernelParams ker;
  try {
    ker = matrix_to_kernel(Homography3(k_raw), 1e-6);
  } catch (const Error& e) {
    if (e.code() == errc::not_a_kernel)
      throw Error(errc::not_decomposable, e.what());
    throw;
  }
  return {sim, ker};
}

/// Closed-form corner offsets of the composed homography. M and N reduce to
/// the similarity map; P and Q keep the kernel fractions with denominators
/// da_K + 1 +- v_K:
///   dx_P =  r - u_S - r*((as+bs)*(b_K+u_K) + (as-bs)) / (da_K+1+v_K)
///   dy_P =  r - v_S - r*((bs-as)*(b_K+u_K) + (as+bs)) / (da_K+1+v_K)
///   dx_Q = -r - u_S - r*((as+bs)*(b_K-u_K) - (as-bs)) / (da_K+1-v_K)
///   dy_Q = -r - v_S - r*((bs-as)*(b_K-u_K) - (as+bs)) / (da_K+1-v_K)
/// with as = da_S + 1, bs = b_S. The offsets depend on the square only
/// through r; the center cancels out of the conjugated chain.
inline PositionalOffsets4 pq_offsets_closed_form(const HomographyParams8& p,
                                                 const SquareConfig& cfg) {
  check_kernel_invariants(p.ker);
  const double r = cfg.half_side;
  const PositionalOffsets2 mn = params_to_offsets(p.sim, r);
  const double as = p.sim.delta_a + 1.0;
  const double bs = p.sim.b;
  const double dp = p.ker.delta_a + 1.0 + p.ker.v;
  const double dq = p.ker.delta_a + 1.0 - p.ker.v;
  const double sp = p.ker.b + p.ker.u;
  const double sq = p.ker.b - p.ker.u;
  return {mn.dx_m,
          mn.dy_m,
          mn.dx_n,
          mn.dy_n,
          r - p.sim.u - (r / dp) * ((as + bs) * sp + (as - bs)),
          r - p.sim.v - (r / dp) * ((bs - as) * sp + (as + bs)),
          -r - p.sim.u - (r / dq) * ((as + bs) * sq - (as - bs)),
          -r - p.sim.v - (r / dq) * ((bs - as) * sq - (as + bs))};
}

namespace detail {

inline void check_no_collinear_triple(const Point2* pts, const char* side) {
  static constexpr int triples[4][3] = {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}};
  for (const auto& t : triples) {
    if (std::abs(cross2(pts[t[0]], pts[t[1]], pts[t[2]])) <= EPS_COMPARE)
      throw Error(errc::degenerate_quad, std::string("collinear ") + side + " points");
  }
}

}  // namespace detail

/// Four-point solver via the similarity-kernel-similarity factorization
/// H = H_S2^-1 H_K H_S1. The first two correspondences anchor the two
/// normalizing similarities; the kernel is recovered from the remaining two
/// in closed form. In the sheared coordinates (x+w, y, x-w) the kernel acts
/// as two decoupled 2x2 affine maps, so each unknown pair comes from one
/// Cramer solve.
inline Homography3 sks_four_point(const CorrespondenceSet& c) {
  if (c.size() != 4)
    throw Error(errc::invalid_argument, "sks_four_point requires exactly 4 correspondences");
  Point2 src[4];
  Point2 dst[4];
  for (int i = 0; i < 4; ++i) {
    src[i] = c[i].source;
    dst[i] = c[i].target;
  }
  detail::check_no_collinear_triple(src, "source");
  detail::check_no_collinear_triple(dst, "target");

  const Homography3 hs1 = solve_similarity_two_points(src[0], src[1], {-1, 0}, {1, 0});
  const Homography3 hs2 = solve_similarity_two_points(dst[0], dst[1], {-1, 0}, {1, 0});
  const Point2 c3 = apply(hs1, src[2]);
  const Point2 c4 = apply(hs1, src[3]);
  const Point2 d3 = apply(hs2, dst[2]);
  const Point2 d4 = apply(hs2, dst[3]);
  if (std::abs(d3.y) < EPS_SINGULAR || std::abs(d4.y) < EPS_SINGULAR ||
      std::abs(c3.y) < EPS_SINGULAR || std::abs(c4.y) < EPS_SINGULAR)
    throw Error(errc::numerical_failure, "normalized point collapses onto the anchor line");
  const double l3 = c3.y / d3.y;
  const double l4 = c4.y / d4.y;

  // (a+b, u+v) from the (x+w) component, (a-b, u-v) from the (x-w) component.
  const double det_p = (c3.x + 1.0) * c4.y - (c4.x + 1.0) * c3.y;
  const double det_m = (c3.x - 1.0) * c4.y - (c4.x - 1.0) * c3.y;
  if (std::abs(det_p) < EPS_SINGULAR || std::abs(det_m) < EPS_SINGULAR)
    throw Error(errc::numerical_failure, "kernel solve is singular");
  const double rp3 = l3 * (d3.x + 1.0);
  const double rp4 = l4 * (d4.x + 1.0);
  const double rm3 = l3 * (d3.x - 1.0);
  const double rm4 = l4 * (d4.x - 1.0);
  const double apb = (rp3 * c4.y - rp4 * c3.y) / det_p;
  const double upv = ((c3.x + 1.0) * rp4 - (c4.x + 1.0) * rp3) / det_p;
  const double amb = (rm3 * c4.y - rm4 * c3.y) / det_m;
  const double umv = ((c3.x - 1.0) * rm4 - (c4.x - 1.0) * rm3) / det_m;

  const double a = 0.5 * (apb + amb);
  const double b = 0.5 * (apb - amb);
  const double u = 0.5 * (upv + umv);
  const double v = 0.5 * (upv - umv);
  const Mat3 hk = {a, u, b, 0, 1, 0, b, v, a};
  const Homography3 h(mat3_mul(invert(hs2).mat(), mat3_mul(hk, hs1.mat())));

  double scale = 1.0;
  for (int i = 0; i < 4; ++i)
    scale = std::max({scale, std::abs(dst[i].x), std::abs(dst[i].y)});
  for (int i = 0; i < 4; ++i) {
    if (distance(apply(h, src[i]), dst[i]) > 1e-8 * scale)
      throw Error(errc::numerical_failure, "four-point residual check failed");
  }
  return h;
}

/// Normalized direct linear transform: isotropic pre-conditioning of both
/// point sets, a 2n x 9 homogeneous system solved by SVD, and
/// de-normalization. Serves as the least-squares baseline and oracle.
inline Homography3 dlt_four_point(const CorrespondenceSet& c) {
  const std::size_t n = c.size();
  if (n < 4)
    throw Error(errc::invalid_argument, "dlt_four_point requires at least 4 correspondences");
  if (n == 4) {
    Point2 src[4];
    Point2 dst[4];
    for (int i = 0; i < 4; ++i) {
      src[i] = c[i].source;
      dst[i] = c[i].target;
    }
    detail::check_no_collinear_triple(src, "source");
    detail::check_no_collinear_triple(dst, "target");
  }

  const auto normalizer = [](const CorrespondenceSet& cs, bool use_target) -> Mat3 {
    double cx = 0.0, cy = 0.0;
    for (const auto& p : cs) {
      const Point2& q = use_target ? p.target : p.source;
      cx += q.x;
      cy += q.y;
    }
    cx /= static_cast<double>(cs.size());
    cy /= static_cast<double>(cs.size());
    double mean_dist = 0.0;
    for (const auto& p : cs) {
      const Point2& q = use_target ? p.target : p.source;
      mean_dist += std::hypot(q.x - cx, q.y - cy);
    }
    mean_dist /= static_cast<double>(cs.size());
    if (mean_dist < EPS_SINGULAR)
      throw Error(errc::rank_deficient, "point set collapses to a single point");
    const double s = std::sqrt(2.0) / mean_dist;
    return {s, 0, -s * cx, 0, s, -s * cy, 0, 0, 1};
  };

  const Mat3 t_src = normalizer(c, false);
  const Mat3 t_dst = normalizer(c, true);

  Eigen::MatrixXd A(2 * static_cast<Eigen::Index>(n), 9);
  for (std::size_t i = 0; i < n; ++i) {
    const Point2& s = c[i].source;
    const Point2& t = c[i].target;
    const double x = t_src[0] * s.x + t_src[1] * s.y + t_src[2];
    const double y = t_src[3] * s.x + t_src[4] * s.y + t_src[5];
    const double xp = t_dst[0] * t.x + t_dst[1] * t.y + t_dst[2];
    const double yp = t_dst[3] * t.x + t_dst[4] * t.y + t_dst[5];
    A.row(2 * i) << 0, 0, 0, -x, -y, -1, yp * x, yp * y, yp;
    A.row(2 * i + 1) << x, y, 1, 0, 0, 0, -xp * x, -xp * y, -xp;
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  if (sv(7) < 1e-10 * sv(0))
    throw Error(errc::rank_deficient, "DLT system is rank deficient");
  const Eigen::VectorXd hvec = svd.matrixV().col(8);
  Mat3 hn;
  for (int i = 0; i < 9; ++i) hn[i] = hvec(i);

  const Mat3 t_dst_inv = mat3_adjugate(t_dst);
  try {
    return Homography3(mat3_mul(t_dst_inv, mat3_mul(hn, t_src)));
  } catch (const Error& e) {
    if (e.code() == errc::singular_matrix)
      throw Error(errc::degenerate_quad, "DLT produced a singular homography");
    throw;
  }
}

struct RansacResult {
  Homography3 homography;
  std::vector<bool> inlier_mask;
  int inlier_count = 0;
  double mean_inlier_error = 0.0;
};

namespace detail {

inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

struct ConsensusScore {
  int count = -1;
  double mean_error = std::numeric_limits<double>::infinity();

  bool better_than(const ConsensusScore& o) const {
    return count > o.count || (count == o.count && mean_error < o.mean_error);
  }
};

/// Symmetric transfer error per pair; points mapping to infinity count as
/// outliers.
inline ConsensusScore score_model(const Homography3& h, const CorrespondenceSet& c,
                                  double threshold, std::vector<bool>& mask) {
  const Homography3 hinv = invert(h);
  ConsensusScore score;
  score.count = 0;
  double err_sum = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    mask[i] = false;
    try {
      const double fwd = distance(apply(h, c[i].source), c[i].target);
      const double bwd = distance(apply(hinv, c[i].target), c[i].source);
      const double e = std::sqrt(fwd * fwd + bwd * bwd);
      if (e < threshold) {
        mask[i] = true;
        ++score.count;
        err_sum += e;
      }
    } catch (const Error&) {
    }
  }
  score.mean_error = score.count > 0 ? err_sum / score.count
                                     : std::numeric_limits<double>::infinity();
  return score;
}

}  // namespace detail

/// Hypothesize-and-verify estimation with sks_four_point as the minimal
/// solver and a DLT refit over the final consensus set. Deterministic for a
/// fixed (input, seed).
inline RansacResult ransac_homography(const CorrespondenceSet& c, int iterations,
                                      double inlier_threshold, std::uint64_t seed) {
  if (c.size() < 4)
    throw Error(errc::invalid_argument, "ransac_homography requires at least 4 correspondences");
  if (iterations < 1)
    throw Error(errc::invalid_argument, "iterations must be >= 1");
  if (!(inlier_threshold > 0.0))
    throw Error(errc::invalid_argument, "inlier threshold must be positive");

  std::mt19937_64 rng(seed);
  const std::size_t n = c.size();
  std::vector<bool> mask(n, false);
  std::vector<bool> best_mask;
  detail::ConsensusScore best;
  bool have_model = false;
  Mat3 best_mat = mat3_identity();

  for (int iter = 0; iter < iterations; ++iter) {
    std::size_t idx[4];
    for (int k = 0; k < 4; ++k) {
      bool fresh;
      do {
        idx[k] = static_cast<std::size_t>(detail::uniform_below(rng, n));
        fresh = true;
        for (int j = 0; j < k; ++j) fresh = fresh && idx[j] != idx[k];
      } while (!fresh);
    }
    std::vector<Correspondence> sample{c[idx[0]], c[idx[1]], c[idx[2]], c[idx[3]]};
    try {
      const Homography3 h = sks_four_point(CorrespondenceSet(std::move(sample)));
      const detail::ConsensusScore score = detail::score_model(h, c, inlier_threshold, mask);
      if (score.better_than(best)) {
        best = score;
        best_mask = mask;
        best_mat = h.mat();
        have_model = true;
      }
    } catch (const Error&) {
    }
  }

  if (!have_model || best.count < 4)
    throw Error(errc::no_consensus, "no model with at least 4 inliers");

  Homography3 model(best_mat);
  std::vector<Correspondence> inliers;
  for (std::size_t i = 0; i < n; ++i)
    if (best_mask[i]) inliers.push_back(c[i]);
  try {
    model = dlt_four_point(CorrespondenceSet(std::move(inliers)));
  } catch (const Error&) {
    // keep the minimal-sample model if the refit degenerates
  }
  const detail::ConsensusScore final_score =
      detail::score_model(model, c, inlier_threshold, mask);
  if (final_score.count < 4)
    throw Error(errc::no_consensus, "refit lost the consensus set");
  return {model, mask, final_score.count, final_score.mean_error};
}

}  // namespace sks

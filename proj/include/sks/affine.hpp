#pragma once

#include <cmath>

#include "sks/kernel.hpp"
#include "sks/similarity.hpp"

namespace sks {

/// Affine transformation in the square-centered frame,
///
///         [ da+1    b     u ]
///   H_A = [  c     dd+1   v ]
///         [  0      0     1 ]
struct AffineParams {
  double delta_a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double delta_d = 0.0;
  double u = 0.0;
  double v = 0.0;
};

/// Kernel transformation degenerated to the affine case, [[1,g,0],[0,h,0],[0,0,1]].
/// Related to the full kernel by g = u_K/(da_K+1), h = 1/(da_K+1).
struct AffineKernelParams {
  double g = 0.0;
  double h = 1.0;
};

/// Offsets of the three corners M, N, P (offset = source - transformed).
struct ThreeCornerOffsets {
  double dx_m = 0.0;
  double dy_m = 0.0;
  double dx_n = 0.0;
  double dy_n = 0.0;
  double dx_p = 0.0;
  double dy_p = 0.0;
};

enum class TransformClass { Similarity, Affine, Projective };

inline const char* to_string(TransformClass c) {
  switch (c) {
    case TransformClass::Similarity: return "similarity";
    case TransformClass::Affine: return "affine";
    case TransformClass::Projective: return "projective";
  }
  return "unknown";
}

/// Default classification thresholds; a parameter error of 0.01 corresponds
/// to roughly 0.3 degrees of angular deviation.
constexpr double DEFAULT_CLASSIFY_THRESHOLD = 0.01;

inline Homography3 affine_to_matrix(const AffineParams& p) {
  const double a = p.delta_a + 1.0;
  const double d = p.delta_d + 1.0;
  if (std::abs(a * d - p.b * p.c) < EPS_SINGULAR)
    throw Error(errc::degenerate_affine, "affine matrix is singular");
  return Homography3({a, p.b, p.u, p.c, d, p.v, 0, 0, 1});
}

inline AffineParams matrix_to_affine(const Homography3& h) {
  const Mat3& m = h.mat();
  const double residual = std::max({std::abs(m[6]), std::abs(m[7]), std::abs(m[8] - 1.0)});
  if (residual > EPS_COMPARE)
    throw Error(errc::degenerate_affine,
                "matrix is not affine (residual " + std::to_string(residual) + ")");
  return {m[0] - 1.0, m[1], m[3], m[4] - 1.0, m[2], m[5]};
}

/// Linear map from the six affine parameters to the M, N, P corner offsets:
///   dx_M =  r*da - r*b - u        dy_M =  r*c - r*dd - v
///   dx_N = -r*da + r*b - u        dy_N = -r*c + r*dd - v
///   dx_P = -r*da - r*b - u        dy_P = -r*c - r*dd - v
inline ThreeCornerOffsets affine_params_to_three_offsets(const AffineParams& p, double r) {
  if (!(r > 0.0)) throw Error(errc::invalid_argument, "half side must be positive");
  return {r * p.delta_a - r * p.b - p.u,  r * p.c - r * p.delta_d - p.v,
          -r * p.delta_a + r * p.b - p.u, -r * p.c + r * p.delta_d - p.v,
          -r * p.delta_a - r * p.b - p.u, -r * p.c - r * p.delta_d - p.v};
}

/// Closed-form inverse of affine_params_to_three_offsets (the 6x6 map splits
/// into two independent 3x3 blocks, each invertible for any r > 0).
inline AffineParams three_offsets_to_affine_params(const ThreeCornerOffsets& o, double r) {
  if (!(r > 0.0)) throw Error(errc::invalid_argument, "half side must be positive");
  const double b = (o.dx_n - o.dx_p) / (2.0 * r);
  const double da = (o.dx_m - o.dx_n) / (2.0 * r) + b;
  const double dd = (o.dy_n - o.dy_p) / (2.0 * r);
  const double c = (o.dy_m - o.dy_n) / (2.0 * r) + dd;
  return {da, b, c, dd, -0.5 * (o.dx_m + o.dx_n), -0.5 * (o.dy_m + o.dy_n)};
}

inline Homography3 affine_kernel_to_matrix(const AffineKernelParams& k) {
  if (std::abs(k.h) < EPS_SINGULAR)
    throw Error(errc::degenerate_affine_kernel, "affine kernel h vanishes");
  return Homography3({1, k.g, 0, 0, k.h, 0, 0, 0, 1});
}

inline AffineKernelParams kernel_to_affine_kernel(const KernelParams& k) {
  const double a = k.delta_a + 1.0;
  if (std::abs(a) < EPS_SINGULAR)
    throw Error(errc::degenerate_affine_kernel, "kernel scale vanishes");
  return {k.u / a, 1.0 / a};
}

inline KernelParams affine_kernel_to_kernel(const AffineKernelParams& k) {
  if (std::abs(k.h) < EPS_SINGULAR)
    throw Error(errc::degenerate_affine_kernel, "affine kernel h vanishes");
  return {1.0 / k.h - 1.0, 0.0, k.g / k.h, 0.0};
}

/// The six effective elements of H_S * N^-1 * H_K^aff * N in closed form.
inline AffineParams affine_core_closed_form(const SimilarityParams& sim,
                                            const AffineKernelParams& k) {
  const double as = sim.delta_a + 1.0;
  const double bs = sim.b;
  const double g = k.g;
  const double h = k.h;
  return {0.5 * (as * (g + h + 1.0) + bs * (g - h + 1.0)) - 1.0,
          0.5 * (as * (g + h - 1.0) + bs * (g - h - 1.0)),
          0.5 * (as * (h - g - 1.0) + bs * (g + h + 1.0)),
          0.5 * (as * (h - g + 1.0) + bs * (g + h - 1.0)) - 1.0,
          sim.u,
          sim.v};
}

/// Full-image affine transformation H_T^-1 * H_A * H_T with the core H_A
/// assembled from the similarity and degenerate-kernel factors. The matrix
/// product and the closed-form elements are both computed and cross-checked.
inline Homography3 compose_affine_sks(const SimilarityParams& sim, const AffineKernelParams& k,
                                      const SquareConfig& cfg) {
  if (std::abs(k.h) < EPS_SINGULAR)
    throw Error(errc::degenerate_affine_kernel, "affine kernel h vanishes");
  const double r = cfg.half_side;
  const double s = 0.5 / r;
  const Mat3 nsr = {s, -s, 0, s, s, 0, 0, 0, 1};
  const Mat3 nsr_inv = {r, r, 0, -r, r, 0, 0, 0, 1};
  const Mat3 hk = {1, k.g, 0, 0, k.h, 0, 0, 0, 1};
  const Mat3 hs = similarity_to_matrix(sim).mat();
  const Mat3 core = mat3_mul(hs, mat3_mul(nsr_inv, mat3_mul(hk, nsr)));

  const AffineParams cf = affine_core_closed_form(sim, k);
  const Mat3 cf_mat = {cf.delta_a + 1.0, cf.b, cf.u, cf.c, cf.delta_d + 1.0, cf.v, 0, 0, 1};
  const double scale = std::max(1.0, mat3_frobenius(core));
  for (int i = 0; i < 9; ++i) {
    if (std::abs(core[i] - cf_mat[i]) > 1e-12 * scale)
      throw Error(errc::numerical_failure, "affine closed form disagrees with matrix product");
  }

  const Mat3 ht = mat3_translation(-cfg.center.x, -cfg.center.y);
  const Mat3 ht_inv = mat3_translation(cfg.center.x, cfg.center.y);
  return Homography3(mat3_mul(ht_inv, mat3_mul(core, ht)));
}

/// Degeneracy classification of kernel parameters. Similarity is tested
/// first (the strictest class); the criteria use absolute values since the
/// parameters are signed.
inline TransformClass classify(const KernelParams& k, double thresh1, double thresh2) {
  if (!(thresh1 > 0.0) || !(thresh2 > 0.0))
    throw Error(errc::invalid_argument, "classification thresholds must be positive");
  const double bk = std::abs(k.b);
  const double vk = std::abs(k.v);
  if (std::max({bk, vk, std::abs(k.delta_a), std::abs(k.u)}) < thresh2)
    return TransformClass::Similarity;
  if (std::max(bk, vk) < thresh1) return TransformClass::Affine;
  return TransformClass::Projective;
}

}  // namespace sks

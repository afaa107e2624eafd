#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "sks/affine.hpp"
#include "sks/sks.hpp"

namespace sks {

enum class Regime { Projective, Affine, Similarity };

inline const char* to_string(Regime r) {
  switch (r) {
    case Regime::Projective: return "projective";
    case Regime::Affine: return "affine";
    case Regime::Similarity: return "similarity";
  }
  return "unknown";
}

/// Corner-perturbation protocol: the square fills the image frame
/// (O = (size/2, size/2), r = size/2) and perturbed corners move by offsets
/// drawn uniformly from [-max_offset, max_offset] per coordinate.
struct PerturbationSpec {
  int image_size = 128;
  double max_offset = 32.0;
  Regime regime = Regime::Projective;
  int count = 1;
  std::uint64_t seed = 0;
};

inline void validate(const PerturbationSpec& s) {
  if (s.image_size <= 0)
    throw Error(errc::invalid_argument, "image_size must be positive");
  if (!(s.max_offset > 0.0) || !(s.max_offset < 0.5 * s.image_size))
    throw Error(errc::invalid_argument, "max_offset must satisfy 0 < max_offset < image_size/2");
  if (s.count < 1) throw Error(errc::invalid_argument, "count must be >= 1");
}

struct Sample {
  SquareConfig cfg;
  CorrespondenceSet correspondences;
  Homography3 gt_homography;
  HomographyParams8 gt_params;
  Regime regime;
};

namespace detail {

/// Per-sample engine derived from (seed, index), so any subset of indices
/// reproduces identical samples.
inline std::mt19937_64 sample_rng(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

inline double uniform_real(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
}

inline SquareConfig frame_square(const PerturbationSpec& s) {
  const double half = 0.5 * s.image_size;
  return SquareConfig({half, half}, half);
}

/// Strict convexity with the given orientation sign over the boundary cycle.
inline bool convex_with_orientation(const std::array<Point2, 4>& cycle, double orientation) {
  for (int i = 0; i < 4; ++i) {
    const double c = cross2(cycle[i], cycle[(i + 1) % 4], cycle[(i + 2) % 4]);
    if (std::abs(c) <= EPS_COMPARE || c * orientation < 0.0) return false;
  }
  return true;
}

constexpr int MAX_REDRAWS = 100;

}  // namespace detail

inline Sample make_projective_sample(const PerturbationSpec& spec, std::uint64_t index) {
  const SquareConfig cfg = detail::frame_square(spec);
  auto rng = detail::sample_rng(spec.seed, index);
  const auto src = cfg.corners();
  // boundary cycle M -> P -> N -> Q; targets must keep the source orientation
  const double orientation = cross2(src[0], src[2], src[1]) < 0.0 ? -1.0 : 1.0;

  for (int attempt = 0; attempt < detail::MAX_REDRAWS; ++attempt) {
    std::array<Point2, 4> dst;
    for (int i = 0; i < 4; ++i) {
      const double dx = detail::uniform_real(rng, -spec.max_offset, spec.max_offset);
      const double dy = detail::uniform_real(rng, -spec.max_offset, spec.max_offset);
      dst[i] = {src[i].x + dx, src[i].y + dy};
    }
    if (!detail::convex_with_orientation({dst[0], dst[2], dst[1], dst[3]}, orientation))
      continue;
    try {
      CorrespondenceSet corrs(std::vector<Correspondence>{
          {src[0], dst[0]}, {src[1], dst[1]}, {src[2], dst[2]}, {src[3], dst[3]}});
      const Homography3 gt = dlt_four_point(corrs);
      const HomographyParams8 params = decompose_sks(gt, cfg);
      return {cfg, std::move(corrs), gt, params, Regime::Projective};
    } catch (const Error&) {
      continue;
    }
  }
  throw Error(errc::exhausted_redraws, "no valid projective sample after 100 redraws");
}

inline Sample make_similarity_sample(const PerturbationSpec& spec, std::uint64_t index) {
  const SquareConfig cfg = detail::frame_square(spec);
  auto rng = detail::sample_rng(spec.seed, index);
  const Point2 src_m = cfg.corner_m();
  const Point2 src_n = cfg.corner_n();

  for (int attempt = 0; attempt < detail::MAX_REDRAWS; ++attempt) {
    const Point2 dst_m = {src_m.x + detail::uniform_real(rng, -spec.max_offset, spec.max_offset),
                          src_m.y + detail::uniform_real(rng, -spec.max_offset, spec.max_offset)};
    const Point2 dst_n = {src_n.x + detail::uniform_real(rng, -spec.max_offset, spec.max_offset),
                          src_n.y + detail::uniform_real(rng, -spec.max_offset, spec.max_offset)};
    try {
      const Homography3 gt = solve_similarity_two_points(src_m, src_n, dst_m, dst_n);
      const Mat3 ht = mat3_translation(-cfg.center.x, -cfg.center.y);
      const Mat3 ht_inv = mat3_translation(cfg.center.x, cfg.center.y);
      const SimilarityParams sim =
          matrix_to_similarity(Homography3(mat3_mul(ht, mat3_mul(gt.mat(), ht_inv))));
      CorrespondenceSet corrs(std::vector<Correspondence>{{src_m, dst_m},
                                                          {src_n, dst_n},
                                                          {cfg.corner_p(), apply(gt, cfg.corner_p())},
                                                          {cfg.corner_q(), apply(gt, cfg.corner_q())}});
      return {cfg, std::move(corrs), gt, HomographyParams8{sim, KernelParams{}},
              Regime::Similarity};
    } catch (const Error&) {
      continue;
    }
  }
  throw Error(errc::exhausted_redraws, "no valid similarity sample after 100 redraws");
}

inline Sample make_affine_sample(const PerturbationSpec& spec, std::uint64_t index) {
  const SquareConfig cfg = detail::frame_square(spec);
  auto rng = detail::sample_rng(spec.seed, index);
  const Point2 src_m = cfg.corner_m();
  const Point2 src_n = cfg.corner_n();
  const Point2 src_p = cfg.corner_p();
  const Point2 src_q = cfg.corner_q();

  for (int attempt = 0; attempt < detail::MAX_REDRAWS; ++attempt) {
    Point2 dst[3];
    const Point2 srcs[3] = {src_m, src_n, src_p};
    for (int i = 0; i < 3; ++i) {
      const double dx = detail::uniform_real(rng, -spec.max_offset, spec.max_offset);
      const double dy = detail::uniform_real(rng, -spec.max_offset, spec.max_offset);
      dst[i] = {srcs[i].x + dx, srcs[i].y + dy};
    }
    if (std::abs(cross2(dst[0], dst[1], dst[2])) <= EPS_COMPARE) continue;
    try {
      const ThreeCornerOffsets offsets{src_m.x - dst[0].x, src_m.y - dst[0].y,
                                       src_n.x - dst[1].x, src_n.y - dst[1].y,
                                       src_p.x - dst[2].x, src_p.y - dst[2].y};
      const AffineParams core = three_offsets_to_affine_params(offsets, cfg.half_side);
      const Mat3 ht = mat3_translation(-cfg.center.x, -cfg.center.y);
      const Mat3 ht_inv = mat3_translation(cfg.center.x, cfg.center.y);
      const Homography3 gt(
          mat3_mul(ht_inv, mat3_mul(affine_to_matrix(core).mat(), ht)));
      CorrespondenceSet corrs(std::vector<Correspondence>{
          {src_m, dst[0]}, {src_n, dst[1]}, {src_p, dst[2]}, {src_q, apply(gt, src_q)}});
      const HomographyParams8 params = decompose_sks(gt, cfg);
      return {cfg, std::move(corrs), gt, params, Regime::Affine};
    } catch (const Error&) {
      continue;
    }
  }
  throw Error(errc::exhausted_redraws, "no valid affine sample after 100 redraws");
}

inline std::vector<Sample> gen_projective(const PerturbationSpec& spec) {
  validate(spec);
  if (spec.regime != Regime::Projective)
    throw Error(errc::invalid_argument, "spec regime must be projective");
  std::vector<Sample> out;
  out.reserve(spec.count);
  for (int i = 0; i < spec.count; ++i)
    out.push_back(make_projective_sample(spec, static_cast<std::uint64_t>(i)));
  return out;
}

inline std::vector<Sample> gen_similarity(const PerturbationSpec& spec) {
  validate(spec);
  if (spec.regime != Regime::Similarity)
    throw Error(errc::invalid_argument, "spec regime must be similarity");
  std::vector<Sample> out;
  out.reserve(spec.count);
  for (int i = 0; i < spec.count; ++i)
    out.push_back(make_similarity_sample(spec, static_cast<std::uint64_t>(i)));
  return out;
}

inline std::vector<Sample> gen_affine(const PerturbationSpec& spec) {
  validate(spec);
  if (spec.regime != Regime::Affine)
    throw Error(errc::invalid_argument, "spec regime must be affine");
  std::vector<Sample> out;
  out.reserve(spec.count);
  for (int i = 0; i < spec.count; ++i)
    out.push_back(make_affine_sample(spec, static_cast<std::uint64_t>(i)));
  return out;
}

inline std::vector<Sample> generate(const PerturbationSpec& spec) {
  switch (spec.regime) {
    case Regime::Projective: return gen_projective(spec);
    case Regime::Affine: return gen_affine(spec);
    case Regime::Similarity: return gen_similarity(spec);
  }
  throw Error(errc::invalid_argument, "unknown regime");
}

}  // namespace sks

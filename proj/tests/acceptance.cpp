// Acceptance suite: runs every release criterion at its pinned tolerance and
// prints one pass/fail line per criterion. Exit code is the number of
// failures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "sks/affine.hpp"
#include "sks/bench.hpp"
#include "sks/datagen.hpp"
#include "sks/metrics.hpp"
#include "sks/serialization.hpp"
#include "sks/sks.hpp"

namespace {

using namespace sks;

int g_failures = 0;

void report(int id, const std::string& label, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %2d: %s (%s)\n", pass ? "PASS" : "FAIL", id, label.c_str(),
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
}

std::array<Point2, 4> random_convex_quad(std::mt19937_64& rng, double lo, double hi,
                                         double min_cross) {
  for (;;) {
    std::array<Point2, 4> q;
    for (auto& p : q) p = {uniform(rng, lo, hi), uniform(rng, lo, hi)};
    double first = 0.0;
    bool ok = true;
    for (int i = 0; i < 4 && ok; ++i) {
      const double c = cross2(q[i], q[(i + 1) % 4], q[(i + 2) % 4]);
      if (std::abs(c) < min_cross || (i > 0 && c * first < 0.0)) ok = false;
      if (i == 0) first = c;
    }
    if (ok) return q;
  }
}

SimilarityParams random_sim(std::mt19937_64& rng, double translation) {
  return {uniform(rng, -0.5, 0.5), uniform(rng, -0.5, 0.5),
          uniform(rng, -translation, translation), uniform(rng, -translation, translation)};
}

KernelParams random_ker(std::mt19937_64& rng, double margin) {
  for (;;) {
    const KernelParams k{uniform(rng, -0.5, 0.5), uniform(rng, -0.5, 0.5),
                         uniform(rng, -0.5, 0.5), uniform(rng, -0.5, 0.5)};
    const double a = k.delta_a + 1.0;
    if (std::abs(a + k.v) >= margin && std::abs(a - k.v) >= margin &&
        std::abs(a + k.b) >= margin && std::abs(a - k.b) >= margin)
      return k;
  }
}

HomographyParams8 random_params8(std::mt19937_64& rng, double translation = 0.5) {
  return {random_sim(rng, translation), random_ker(rng, 0.1)};
}

std::string fmt(const char* format, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), format, a, b);
  return buf;
}

const SquareConfig PROTOCOL_SQUARE({64.0, 64.0}, 64.0);

// --- criterion 1: four-point SKS equals the normalized DLT -----------------

void criterion_sks_equals_dlt() {
  const int N = 10000;
  std::mt19937_64 rng(1001);
  double max_dist = 0.0;
  int bad = 0;
  const auto t0 = std::chrono::steady_clock::now();
  for (int i = 0; i < N; ++i) {
    const auto src = random_convex_quad(rng, -100, 100, 100.0);
    const auto dst = random_convex_quad(rng, -100, 100, 100.0);
    std::vector<Correspondence> pairs;
    for (int k = 0; k < 4; ++k) pairs.push_back({src[k], dst[k]});
    const CorrespondenceSet c(std::move(pairs));
    const double d = projective_distance(sks_four_point(c), dlt_four_point(c));
    max_dist = std::max(max_dist, d);
    if (!(d < 1e-8)) ++bad;
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::ostringstream detail;
  detail << "max distance " << max_dist << ", failures " << bad << "/" << N << ", " << secs
         << " s";
  report(1, "sks_four_point ~ dlt_four_point on 10^4 random convex quads, tol 1e-8",
         bad == 0 && secs < 10.0, detail.str());
}

// --- criterion 2: compose/decompose round trip ------------------------------

void criterion_round_trip() {
  const int N = 10000;
  std::mt19937_64 rng(1002);
  double worst = 0.0;
  int bad = 0;
  for (int i = 0; i < N; ++i) {
    const HomographyParams8 p = random_params8(rng);
    const HomographyParams8 q = decompose_sks(compose_sks(p, PROTOCOL_SQUARE), PROTOCOL_SQUARE);
    const double err = std::max(
        {std::abs(q.sim.delta_a - p.sim.delta_a), std::abs(q.sim.b - p.sim.b),
         std::abs(q.sim.u - p.sim.u), std::abs(q.sim.v - p.sim.v),
         std::abs(q.ker.delta_a - p.ker.delta_a), std::abs(q.ker.b - p.ker.b),
         std::abs(q.ker.u - p.ker.u), std::abs(q.ker.v - p.ker.v)});
    worst = std::max(worst, err);
    if (!(err < 1e-9)) ++bad;
  }
  report(2, "compose/decompose round trip on 10^4 draws, tol 1e-9", bad == 0,
         fmt("max component error %.3e", worst));
}

// --- criterion 3: similarity offset map vs corner warp ----------------------

void criterion_similarity_offsets() {
  const int N = 10000;
  std::mt19937_64 rng(1003);
  double worst_fwd = 0.0;
  double worst_rt = 0.0;
  const double r = PROTOCOL_SQUARE.half_side;
  for (int i = 0; i < N; ++i) {
    const SimilarityParams p = random_sim(rng, 32.0);
    const PositionalOffsets2 o = params_to_offsets(p, r);
    const Homography3 lifted = lift_similarity(p, PROTOCOL_SQUARE);
    const Point2 wm = apply(lifted, PROTOCOL_SQUARE.corner_m());
    const Point2 wn = apply(lifted, PROTOCOL_SQUARE.corner_n());
    worst_fwd = std::max({worst_fwd, std::abs(PROTOCOL_SQUARE.corner_m().x - wm.x - o.dx_m),
                          std::abs(PROTOCOL_SQUARE.corner_m().y - wm.y - o.dy_m),
                          std::abs(PROTOCOL_SQUARE.corner_n().x - wn.x - o.dx_n),
                          std::abs(PROTOCOL_SQUARE.corner_n().y - wn.y - o.dy_n)});
    const SimilarityParams q = offsets_to_params(o, r);
    worst_rt = std::max({worst_rt, std::abs(q.delta_a - p.delta_a), std::abs(q.b - p.b),
                         std::abs(q.u - p.u), std::abs(q.v - p.v)});
  }
  report(3, "similarity params <-> M/N offsets vs warp oracle, tol 1e-12",
         worst_fwd < 1e-12 && worst_rt < 1e-12,
         fmt("warp agreement %.3e, round trip %.3e", worst_fwd, worst_rt));
}

// --- criterion 4: angular offsets vs geometric cotangents --------------------

void criterion_angular_offsets() {
  const int N = 10000;
  std::mt19937_64 rng(1004);
  double worst = 0.0;
  for (int i = 0; i < N; ++i) {
    const KernelParams k = random_ker(rng, 0.1);
    const AngularOffsets a = kernel_to_angular_offsets(k);
    const Homography3 hk = kernel_to_matrix(k);
    const Point2 p2 = apply(hk, {0, 1});
    const Point2 q2 = apply(hk, {0, -1});
    const double cot_t = (p2.x + 1.0) / p2.y;
    const double cot_a = (1.0 - p2.x) / p2.y;
    const double cot_b = (q2.x + 1.0) / -q2.y;
    const double cot_g = (1.0 - q2.x) / -q2.y;
    worst = std::max({worst, std::abs(a.d_theta - (cot_t - 1.0)),
                      std::abs(a.d_alpha - (cot_a - 1.0)), std::abs(a.d_beta - (cot_b - 1.0)),
                      std::abs(a.d_gamma - (cot_g - 1.0))});
  }
  report(4, "angular offsets vs cotangent oracle on 10^4 kernels, tol 1e-9", worst < 1e-9,
         fmt("max deviation %.3e", worst));
}

// --- criterion 5: P/Q closed-form offsets vs corner warp ---------------------

void criterion_pq_offsets() {
  const int N = 10000;
  std::mt19937_64 rng(1005);
  double worst = 0.0;
  for (int i = 0; i < N; ++i) {
    const HomographyParams8 p = random_params8(rng, 32.0);
    const PositionalOffsets4 o = pq_offsets_closed_form(p, PROTOCOL_SQUARE);
    const Homography3 h = compose_sks(p, PROTOCOL_SQUARE);
    const auto corners = PROTOCOL_SQUARE.corners();
    const double got[8] = {o.dx_m, o.dy_m, o.dx_n, o.dy_n, o.dx_p, o.dy_p, o.dx_q, o.dy_q};
    for (int k = 0; k < 4; ++k) {
      const Point2 w = apply(h, corners[k]);
      worst = std::max({worst, std::abs(corners[k].x - w.x - got[2 * k]),
                        std::abs(corners[k].y - w.y - got[2 * k + 1])});
    }
  }
  report(5, "P/Q closed-form offsets vs warp oracle on 10^4 draws, tol 1e-9", worst < 1e-9,
         fmt("max deviation %.3e", worst));
}

// --- criterion 6: kernel invariance under left similarity --------------------

void criterion_similarity_invariance() {
  const int N = 1000;
  std::mt19937_64 rng(1006);
  double worst = 0.0;
  for (int i = 0; i < N; ++i) {
    const Homography3 h = compose_sks(random_params8(rng, 20.0), PROTOCOL_SQUARE);
    const Homography3 s = lift_similarity(random_sim(rng, 20.0), PROTOCOL_SQUARE);
    const KernelParams base = decompose_sks(h, PROTOCOL_SQUARE).ker;
    const KernelParams moved = decompose_sks(compose(s, h), PROTOCOL_SQUARE).ker;
    worst = std::max({worst, std::abs(moved.delta_a - base.delta_a), std::abs(moved.b - base.b),
                      std::abs(moved.u - base.u), std::abs(moved.v - base.v)});
  }
  report(6, "kernel params invariant under left similarity, 10^3 pairs, tol 1e-9", worst < 1e-9,
         fmt("max deviation %.3e", worst));
}

// --- criterion 7: degeneracy classification ---------------------------------

void criterion_degeneracy_classification() {
  const int N = 1000;
  int misclassified = 0;
  double worst_angle = 0.0;

  PerturbationSpec sim_spec;
  sim_spec.regime = Regime::Similarity;
  sim_spec.count = N;
  sim_spec.seed = 1007;
  for (const Sample& s : gen_similarity(sim_spec)) {
    const KernelParams ker = decompose_sks(s.gt_homography, s.cfg).ker;
    if (classify(ker, 1e-6, 1e-6) != TransformClass::Similarity) ++misclassified;
  }

  PerturbationSpec aff_spec;
  aff_spec.regime = Regime::Affine;
  aff_spec.count = N;
  aff_spec.seed = 1008;
  for (const Sample& s : gen_affine(aff_spec)) {
    const KernelParams ker = decompose_sks(s.gt_homography, s.cfg).ker;
    if (classify(ker, 1e-6, 1e-6) != TransformClass::Affine) ++misclassified;
    const AngularOffsets a = kernel_to_angular_offsets(ker);
    worst_angle = std::max({worst_angle, std::abs(a.d_theta - a.d_gamma),
                            std::abs(a.d_alpha - a.d_beta)});
  }

  std::ostringstream detail;
  detail << misclassified << " misclassified of " << 2 * N << ", opposite-angle gap "
         << worst_angle;
  report(7, "similarity/affine classification at 1e-6 plus angular degeneration, tol 1e-9",
         misclassified == 0 && worst_angle < 1e-9, detail.str());
}

// --- criterion 8: affine closed forms ----------------------------------------

void criterion_affine_closed_forms() {
  const int N = 10000;
  std::mt19937_64 rng(1009);
  const double r = PROTOCOL_SQUARE.half_side;
  double worst_core = 0.0;
  double worst_map = 0.0;
  double worst_rt = 0.0;
  for (int i = 0; i < N; ++i) {
    const SimilarityParams sim = random_sim(rng, 0.5);
    AffineKernelParams k{uniform(rng, -0.5, 0.5), uniform(rng, -2.0, 2.0)};
    if (std::abs(k.h) < 0.2) k.h = k.h < 0.0 ? k.h - 0.2 : k.h + 0.2;

    // six-element closed form against the raw matrix product
    const Mat3 nsr = {0.5 / r, -0.5 / r, 0, 0.5 / r, 0.5 / r, 0, 0, 0, 1};
    const Mat3 nsr_inv = {r, r, 0, -r, r, 0, 0, 0, 1};
    const Mat3 hk = {1, k.g, 0, 0, k.h, 0, 0, 0, 1};
    const Mat3 product = mat3_mul(similarity_to_matrix(sim).mat(),
                                  mat3_mul(nsr_inv, mat3_mul(hk, nsr)));
    const AffineParams cf = affine_core_closed_form(sim, k);
    const Mat3 cf_mat = {cf.delta_a + 1.0, cf.b, cf.u, cf.c, cf.delta_d + 1.0, cf.v, 0, 0, 1};
    for (int e = 0; e < 9; ++e)
      worst_core = std::max(worst_core, std::abs(product[e] - cf_mat[e]));

    // three-corner linear map against the warped corners
    AffineParams p{uniform(rng, -0.5, 0.5), uniform(rng, -0.5, 0.5), uniform(rng, -0.5, 0.5),
                   uniform(rng, -0.5, 0.5), uniform(rng, -32, 32), uniform(rng, -32, 32)};
    if (std::abs((p.delta_a + 1.0) * (p.delta_d + 1.0) - p.b * p.c) < 0.05) continue;
    const ThreeCornerOffsets o = affine_params_to_three_offsets(p, r);
    const Mat3 ht = mat3_translation(-PROTOCOL_SQUARE.center.x, -PROTOCOL_SQUARE.center.y);
    const Mat3 ht_inv = mat3_translation(PROTOCOL_SQUARE.center.x, PROTOCOL_SQUARE.center.y);
    const Homography3 lifted(mat3_mul(ht_inv, mat3_mul(affine_to_matrix(p).mat(), ht)));
    const Point2 wm = apply(lifted, PROTOCOL_SQUARE.corner_m());
    const Point2 wn = apply(lifted, PROTOCOL_SQUARE.corner_n());
    const Point2 wp = apply(lifted, PROTOCOL_SQUARE.corner_p());
    worst_map = std::max({worst_map, std::abs(PROTOCOL_SQUARE.corner_m().x - wm.x - o.dx_m),
                          std::abs(PROTOCOL_SQUARE.corner_m().y - wm.y - o.dy_m),
                          std::abs(PROTOCOL_SQUARE.corner_n().x - wn.x - o.dx_n),
                          std::abs(PROTOCOL_SQUARE.corner_n().y - wn.y - o.dy_n),
                          std::abs(PROTOCOL_SQUARE.corner_p().x - wp.x - o.dx_p),
                          std::abs(PROTOCOL_SQUARE.corner_p().y - wp.y - o.dy_p)});
    const AffineParams q = three_offsets_to_affine_params(o, r);
    worst_rt = std::max({worst_rt, std::abs(q.delta_a - p.delta_a), std::abs(q.b - p.b),
                         std::abs(q.c - p.c), std::abs(q.delta_d - p.delta_d),
                         std::abs(q.u - p.u), std::abs(q.v - p.v)});
  }
  std::ostringstream detail;
  detail << "six-element form " << worst_core << ", corner map " << worst_map << ", round trip "
         << worst_rt;
  report(8, "affine closed forms vs matrix products on 10^4 draws, tol 1e-12",
         worst_core < 1e-12 && worst_map < 1e-12 && worst_rt < 1e-12, detail.str());
}

// --- criterion 9: data protocol fidelity -------------------------------------

double ks_statistic_uniform(std::vector<double> values, double lo, double hi) {
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  double d = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double f = (values[i] - lo) / (hi - lo);
    d = std::max(d, std::abs((i + 1) / n - f));
    d = std::max(d, std::abs(f - i / n));
  }
  return d;
}

void criterion_data_protocol() {
  const int N = 10000;
  PerturbationSpec spec;
  spec.count = N;
  spec.seed = 1010;
  const std::vector<Sample> samples = gen_projective(spec);
  std::vector<std::vector<double>> offsets(8);
  for (const Sample& s : samples) {
    for (int corner = 0; corner < 4; ++corner) {
      const Correspondence& c = s.correspondences[corner];
      offsets[2 * corner].push_back(c.target.x - c.source.x);
      offsets[2 * corner + 1].push_back(c.target.y - c.source.y);
    }
  }
  const double critical = 1.6276 / std::sqrt(static_cast<double>(N));
  double worst_ks = 0.0;
  for (const auto& series : offsets)
    worst_ks = std::max(worst_ks, ks_statistic_uniform(series, -spec.max_offset, spec.max_offset));

  const std::vector<Sample> again = gen_projective(spec);
  bool reproducible = again.size() == samples.size();
  for (std::size_t i = 0; reproducible && i < samples.size(); ++i)
    reproducible = to_json(again[i]).dump() == to_json(samples[i]).dump();

  std::ostringstream detail;
  detail << "max KS " << worst_ks << " vs critical " << critical << ", bit-reproducible "
         << (reproducible ? "yes" : "no");
  report(9, "projective protocol: per-corner uniformity (KS at 1%) and reproducibility",
         worst_ks < critical && reproducible, detail.str());
}

// --- criterion 10: structural performance claim ------------------------------

void criterion_benchmark() {
  const BenchReport r = run_solver_bench(2000, 1011);
  std::ostringstream detail;
  detail << "compose " << r.compose_median_us << " us vs dlt " << r.dlt_median_us
         << " us, speedup " << r.speedup << "x, max distance " << r.max_distance;
  report(10, "compose_sks median per-solve time strictly below SVD-based DLT, accuracy 1e-8",
         r.compose_median_us < r.dlt_median_us && r.max_distance < 1e-8, detail.str());
}

// --- criterion 11: metric sanity ---------------------------------------------

void criterion_metric_sanity() {
  const int N = 1000;
  std::mt19937_64 rng(1012);
  bool zero_ok = true;
  double worst_shift = 0.0;
  for (int i = 0; i < N; ++i) {
    const Homography3 h = compose_sks(random_params8(rng, 20.0), PROTOCOL_SQUARE);
    if (ace_po(h, h, PROTOCOL_SQUARE) != 0.0 || ace_ao(h, h, PROTOCOL_SQUARE) != 0.0)
      zero_ok = false;
    const double shifted = ace_po(compose(Homography3::translation(3, 4), h), h, PROTOCOL_SQUARE);
    worst_shift = std::max(worst_shift, std::abs(shifted - 5.0));
  }
  report(11, "ace_po/ace_ao vanish on equal inputs; (3,4) shift scores exactly 5.0, tol 1e-12",
         zero_ok && worst_shift < 1e-12, fmt("max |ace_po - 5| = %.3e", worst_shift));
}

}  // namespace

int main() {
  criterion_sks_equals_dlt();
  criterion_round_trip();
  criterion_similarity_offsets();
  criterion_angular_offsets();
  criterion_pq_offsets();
  criterion_similarity_invariance();
  criterion_degeneracy_classification();
  criterion_affine_closed_forms();
  criterion_data_protocol();
  criterion_benchmark();
  criterion_metric_sanity();

  if (g_failures == 0)
    std::printf("all 11 acceptance criteria passed\n");
  else
    std::printf("%d acceptance criteria FAILED\n", g_failures);
  return g_failures;
}

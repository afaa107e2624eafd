#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <iomanip>
#include <ostream>
#include <random>
#include <vector>

#include "sks/datagen.hpp"
#include "sks/sks.hpp"

namespace sks {

/// Head-to-head timing of the multiplication-only composition against the
/// SVD-based DLT on identical four-point problems.
struct BenchReport {
  int trials = 0;
  double compose_median_us = 0.0;
  double dlt_median_us = 0.0;
  double speedup = 0.0;
  double max_distance = 0.0;
};

namespace detail {

template <class T>
inline void do_not_optimize(const T& value) {
  asm volatile("" : : "r,m"(value) : "memory");
}

/// Parameters bounded by 0.5 with kernel denominators kept at least 0.1 from
/// zero, so every draw composes and decomposes comfortably.
inline HomographyParams8 random_params8(std::mt19937_64& rng) {
  const auto draw = [&rng] { return uniform_real(rng, -0.5, 0.5); };
  HomographyParams8 p;
  p.sim = {draw(), draw(), 32.0 * draw(), 32.0 * draw()};
  for (;;) {
    p.ker = {draw(), draw(), draw(), draw()};
    const double a = p.ker.delta_a + 1.0;
    if (std::abs(a + p.ker.v) >= 0.1 && std::abs(a - p.ker.v) >= 0.1 &&
        std::abs(a + p.ker.b) >= 0.1 && std::abs(a - p.ker.b) >= 0.1)
      return p;
  }
}

}  // namespace detail

inline BenchReport run_solver_bench(int trials, std::uint64_t seed) {
  if (trials < 1) throw Error(errc::invalid_argument, "bench requires at least 1 trial");
  constexpr int REPS = 16;
  const SquareConfig cfg({64.0, 64.0}, 64.0);
  std::mt19937_64 rng(seed);

  std::vector<double> compose_us;
  std::vector<double> dlt_us;
  compose_us.reserve(trials);
  dlt_us.reserve(trials);
  double max_distance = 0.0;

  using clock = std::chrono::steady_clock;
  for (int t = 0; t < trials; ++t) {
    const HomographyParams8 params = detail::random_params8(rng);
    const Homography3 truth = compose_sks(params, cfg);
    std::vector<Correspondence> pairs;
    for (const Point2& corner : cfg.corners()) pairs.push_back({corner, apply(truth, corner)});
    const CorrespondenceSet corrs(std::move(pairs));

    const auto t0 = clock::now();
    for (int r = 0; r < REPS; ++r) {
      const Homography3 h = compose_sks(params, cfg);
      detail::do_not_optimize(h.mat());
    }
    const auto t1 = clock::now();
    for (int r = 0; r < REPS; ++r) {
      const Homography3 h = dlt_four_point(corrs);
      detail::do_not_optimize(h.mat());
    }
    const auto t2 = clock::now();

    compose_us.push_back(std::chrono::duration<double, std::micro>(t1 - t0).count() / REPS);
    dlt_us.push_back(std::chrono::duration<double, std::micro>(t2 - t1).count() / REPS);
    max_distance = std::max(max_distance,
                            projective_distance(compose_sks(params, cfg), dlt_four_point(corrs)));
  }

  const auto median = [](std::vector<double>& v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
  };

  BenchReport report;
  report.trials = trials;
  report.compose_median_us = median(compose_us);
  report.dlt_median_us = median(dlt_us);
  report.speedup = report.dlt_median_us / report.compose_median_us;
  report.max_distance = max_distance;
  return report;
}

inline void print_bench_report(const BenchReport& r, std::ostream& os) {
  os << "solver benchmark, " << r.trials << " trials (median of per-solve wall times)\n";
  os << std::left << std::setw(18) << "method" << std::setw(16) << "median us/solve"
     << "operation class\n";
  os << std::setw(18) << "compose_sks" << std::setw(16) << std::setprecision(4)
     << r.compose_median_us << "fixed 3x3 products, closed-form inverses\n";
  os << std::setw(18) << "dlt_four_point" << std::setw(16) << std::setprecision(4)
     << r.dlt_median_us << "SVD of an 8x9 linear system\n";
  os << "speedup (dlt / compose): " << std::setprecision(4) << r.speedup << "x\n";
  os << "max projective distance between solutions: " << std::setprecision(3) << std::scientific
     << r.max_distance << std::defaultfloat << "\n";
}

}  // namespace sks

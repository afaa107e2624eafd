#pragma once

#include <fstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sks/affine.hpp"
#include "sks/datagen.hpp"
#include "sks/kernel.hpp"
#include "sks/metrics.hpp"
#include "sks/similarity.hpp"
#include "sks/sks.hpp"

namespace sks {

using json = nlohmann::json;

namespace detail {

inline double expect_number(const json& j, const std::string& where) {
  if (!j.is_number())
    throw Error(errc::schema_error, where + " must be a number");
  return j.get<double>();
}

inline const json& expect_field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key))
    throw Error(errc::schema_error, where + " must be an object with field \"" + key + "\"");
  return j.at(key);
}

}  // namespace detail

inline json to_json(const Homography3& h) {
  json a = json::array();
  for (double e : h.mat()) a.push_back(e);
  return a;
}

inline Homography3 homography_from_json(const json& j, const std::string& where = "homography") {
  if (!j.is_array() || j.size() != 9)
    throw Error(errc::schema_error, where + " must be an array of 9 numbers");
  Mat3 m;
  for (int i = 0; i < 9; ++i) m[i] = detail::expect_number(j[i], where);
  return Homography3(m);
}

inline json to_json(const SimilarityParams& p) {
  return json{{"da", p.delta_a}, {"b", p.b}, {"u", p.u}, {"v", p.v}};
}

inline SimilarityParams similarity_params_from_json(const json& j,
                                                    const std::string& where = "sim") {
  return {detail::expect_number(detail::expect_field(j, "da", where), where + ".da"),
          detail::expect_number(detail::expect_field(j, "b", where), where + ".b"),
          detail::expect_number(detail::expect_field(j, "u", where), where + ".u"),
          detail::expect_number(detail::expect_field(j, "v", where), where + ".v")};
}

inline json to_json(const KernelParams& k) {
  return json{{"dak", k.delta_a}, {"bk", k.b}, {"uk", k.u}, {"vk", k.v}};
}

inline KernelParams kernel_params_from_json(const json& j, const std::string& where = "ker") {
  return {detail::expect_number(detail::expect_field(j, "dak", where), where + ".dak"),
          detail::expect_number(detail::expect_field(j, "bk", where), where + ".bk"),
          detail::expect_number(detail::expect_field(j, "uk", where), where + ".uk"),
          detail::expect_number(detail::expect_field(j, "vk", where), where + ".vk")};
}

inline json to_json(const AngularOffsets& a) {
  return json::array({a.d_theta, a.d_alpha, a.d_beta, a.d_gamma});
}

inline AngularOffsets angular_offsets_from_json(const json& j,
                                                const std::string& where = "angular_offsets") {
  if (!j.is_array() || j.size() != 4)
    throw Error(errc::schema_error, where + " must be an array of 4 numbers");
  return {detail::expect_number(j[0], where), detail::expect_number(j[1], where),
          detail::expect_number(j[2], where), detail::expect_number(j[3], where)};
}

inline json to_json(const HomographyParams8& p) {
  return json{{"sim", to_json(p.sim)}, {"ker", to_json(p.ker)}};
}

inline HomographyParams8 params8_from_json(const json& j, const std::string& where = "params") {
  return {similarity_params_from_json(detail::expect_field(j, "sim", where), where + ".sim"),
          kernel_params_from_json(detail::expect_field(j, "ker", where), where + ".ker")};
}

inline json to_json(const SquareConfig& cfg) {
  return json{{"cx", cfg.center.x}, {"cy", cfg.center.y}, {"r", cfg.half_side}};
}

inline SquareConfig square_config_from_json(const json& j, const std::string& where = "cfg") {
  const double cx = detail::expect_number(detail::expect_field(j, "cx", where), where + ".cx");
  const double cy = detail::expect_number(detail::expect_field(j, "cy", where), where + ".cy");
  const double r = detail::expect_number(detail::expect_field(j, "r", where), where + ".r");
  if (!(r > 0.0)) throw Error(errc::schema_error, where + ".r must be positive");
  return SquareConfig({cx, cy}, r);
}

inline json to_json(const CorrespondenceSet& c) {
  json a = json::array();
  for (const auto& p : c)
    a.push_back(json::array({p.source.x, p.source.y, p.target.x, p.target.y}));
  return a;
}

inline CorrespondenceSet correspondences_from_json(const json& j,
                                                   const std::string& where = "correspondences") {
  if (!j.is_array())
    throw Error(errc::schema_error, where + " must be an array of [sx, sy, tx, ty] quadruples");
  std::vector<Correspondence> pairs;
  pairs.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    const json& q = j[i];
    const std::string entry = where + "[" + std::to_string(i) + "]";
    if (!q.is_array() || q.size() != 4)
      throw Error(errc::schema_error, entry + " must be a [sx, sy, tx, ty] quadruple");
    pairs.push_back({Point2{detail::expect_number(q[0], entry), detail::expect_number(q[1], entry)},
                     Point2{detail::expect_number(q[2], entry), detail::expect_number(q[3], entry)}});
  }
  return CorrespondenceSet(std::move(pairs));
}

inline Regime regime_from_string(const std::string& s, const std::string& where = "regime") {
  if (s == "projective") return Regime::Projective;
  if (s == "affine") return Regime::Affine;
  if (s == "similarity") return Regime::Similarity;
  throw Error(errc::schema_error, where + " must be projective, affine, or similarity");
}

inline TransformClass transform_class_from_string(const std::string& s,
                                                  const std::string& where = "class") {
  if (s == "similarity") return TransformClass::Similarity;
  if (s == "affine") return TransformClass::Affine;
  if (s == "projective") return TransformClass::Projective;
  throw Error(errc::schema_error, where + " must be similarity, affine, or projective");
}

inline json to_json(const Sample& s) {
  return json{{"cfg", to_json(s.cfg)},
              {"corr", to_json(s.correspondences)},
              {"H", to_json(s.gt_homography)},
              {"params", to_json(s.gt_params)},
              {"regime", to_string(s.regime)}};
}

inline Sample sample_from_json(const json& j, const std::string& where = "sample") {
  const json& regime = detail::expect_field(j, "regime", where);
  if (!regime.is_string())
    throw Error(errc::schema_error, where + ".regime must be a string");
  return {square_config_from_json(detail::expect_field(j, "cfg", where), where + ".cfg"),
          correspondences_from_json(detail::expect_field(j, "corr", where), where + ".corr"),
          homography_from_json(detail::expect_field(j, "H", where), where + ".H"),
          params8_from_json(detail::expect_field(j, "params", where), where + ".params"),
          regime_from_string(regime.get<std::string>(), where + ".regime")};
}

/// One sample per line, compact JSON.
inline void write_dataset(const std::vector<Sample>& samples, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(errc::io_error, "cannot open " + path + " for writing");
  for (const Sample& s : samples) out << to_json(s).dump() << '\n';
  if (!out) throw Error(errc::io_error, "write failed for " + path);
}

inline std::vector<Sample> read_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(errc::io_error, "cannot open " + path);
  std::vector<Sample> samples;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::string where = path + ":" + std::to_string(line_no);
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw Error(errc::schema_error, where + ": " + e.what());
    }
    samples.push_back(sample_from_json(j, where));
  }
  return samples;
}

inline json to_json(const FiveNumberSummary& s) {
  return json{{"min", s.min}, {"q1", s.q1}, {"median", s.median}, {"q3", s.q3}, {"max", s.max}};
}

}  // namespace sks

#pragma once

#include <stdexcept>
#include <string>

namespace sks {

/// Failure categories surfaced by the library. Names mirror the wire-level
/// identifiers printed by the CLI.
enum class errc {
  point_at_infinity,
  singular_matrix,
  degenerate_similarity,
  not_a_similarity,
  degenerate_point_pair,
  degenerate_kernel,
  not_a_kernel,
  not_decomposable,
  degenerate_quad,
  numerical_failure,
  rank_deficient,
  no_consensus,
  degenerate_affine,
  degenerate_affine_kernel,
  exhausted_redraws,
  empty_input,
  invalid_argument,
  schema_error,
  io_error,
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::point_at_infinity: return "PointAtInfinity";
    case errc::singular_matrix: return "SingularMatrix";
    case errc::degenerate_similarity: return "DegenerateSimilarity";
    case errc::not_a_similarity: return "NotASimilarity";
    case errc::degenerate_point_pair: return "DegeneratePointPair";
    case errc::degenerate_kernel: return "DegenerateKernel";
    case errc::not_a_kernel: return "NotAKernel";
    case errc::not_decomposable: return "NotDecomposable";
    case errc::degenerate_quad: return "DegenerateQuad";
    case errc::numerical_failure: return "NumericalFailure";
    case errc::rank_deficient: return "RankDeficient";
    case errc::no_consensus: return "NoConsensus";
    case errc::degenerate_affine: return "DegenerateAffine";
    case errc::degenerate_affine_kernel: return "DegenerateAffineKernel";
    case errc::exhausted_redraws: return "ExhaustedRedraws";
    case errc::empty_input: return "EmptyInput";
    case errc::invalid_argument: return "InvalidArgument";
    case errc::schema_error: return "SchemaError";
    case errc::io_error: return "IoError";
  }
  return "UnknownError";
}

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

  errc code() const { return code_; }

 private:
  errc code_;
};

/// True for failures caused by malformed input rather than by geometry.
inline bool is_input_error(errc c) {
  return c == errc::schema_error || c == errc::io_error || c == errc::invalid_argument ||
         c == errc::empty_input;
}

}  // namespace sks

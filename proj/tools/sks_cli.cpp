// Command-line surface for solving, composing, decomposing, generating,
// evaluating, and benchmarking planar homographies.
//
// Exit codes: 0 success, 2 input/schema error, 3 numerical/degeneracy error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sks/bench.hpp"
#include "sks/serialization.hpp"

namespace {

constexpr int EXIT_INPUT_ERROR = 2;
constexpr int EXIT_NUMERIC_ERROR = 3;

sks::json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw sks::Error(sks::errc::io_error, "cannot open " + path);
  sks::json j;
  try {
    in >> j;
  } catch (const sks::json::parse_error& e) {
    throw sks::Error(sks::errc::schema_error, path + ": " + e.what());
  }
  return j;
}

struct SolveOptions {
  std::string input;
  std::string method = "sks";
  int iterations = 1000;
  double threshold = 1.0;
  std::uint64_t seed = 0;
};

int run_solve(const SolveOptions& opt) {
  const sks::CorrespondenceSet corrs =
      sks::correspondences_from_json(load_json_file(opt.input), opt.input);
  sks::Homography3 h = sks::Homography3::identity();
  if (opt.method == "sks") {
    h = sks::sks_four_point(corrs);
  } else if (opt.method == "dlt") {
    h = sks::dlt_four_point(corrs);
  } else if (opt.method == "ransac") {
    h = sks::ransac_homography(corrs, opt.iterations, opt.threshold, opt.seed).homography;
  } else {
    throw sks::Error(sks::errc::invalid_argument, "unknown method " + opt.method);
  }
  std::cout << sks::to_json(h).dump() << "\n";
  return 0;
}

struct DecomposeOptions {
  std::string h_path;
  std::string cfg_path;
  double thresh1 = sks::DEFAULT_CLASSIFY_THRESHOLD;
  double thresh2 = sks::DEFAULT_CLASSIFY_THRESHOLD;
};

int run_decompose(const DecomposeOptions& opt) {
  const sks::Homography3 h = sks::homography_from_json(load_json_file(opt.h_path), opt.h_path);
  const sks::SquareConfig cfg =
      sks::square_config_from_json(load_json_file(opt.cfg_path), opt.cfg_path);
  const sks::HomographyParams8 params = sks::decompose_sks(h, cfg);
  sks::json out = sks::to_json(params);
  out["angular_offsets"] = sks::to_json(sks::kernel_to_angular_offsets(params.ker));
  out["class"] = sks::to_string(sks::classify(params.ker, opt.thresh1, opt.thresh2));
  std::cout << out.dump() << "\n";
  return 0;
}

int run_compose(const std::string& params_path, const std::string& cfg_path) {
  const sks::HomographyParams8 params =
      sks::params8_from_json(load_json_file(params_path), params_path);
  const sks::SquareConfig cfg =
      sks::square_config_from_json(load_json_file(cfg_path), cfg_path);
  std::cout << sks::to_json(sks::compose_sks(params, cfg)).dump() << "\n";
  return 0;
}

struct GenerateOptions {
  std::string regime;
  int count = 1;
  std::uint64_t seed = 0;
  std::string out;
  int size = 128;
  double max_offset = 32.0;
};

int run_generate(const GenerateOptions& opt) {
  sks::PerturbationSpec spec;
  spec.regime = sks::regime_from_string(opt.regime, "--regime");
  spec.count = opt.count;
  spec.seed = opt.seed;
  spec.image_size = opt.size;
  spec.max_offset = opt.max_offset;
  sks::write_dataset(sks::generate(spec), opt.out);
  return 0;
}

struct EvaluateOptions {
  std::string data;
  std::string pred;
  std::string out;
};

int run_evaluate(const EvaluateOptions& opt) {
  const std::vector<sks::Sample> samples = sks::read_dataset(opt.data);

  std::ifstream in(opt.pred);
  if (!in) throw sks::Error(sks::errc::io_error, "cannot open " + opt.pred);
  std::map<std::int64_t, sks::Homography3> preds;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::string where = opt.pred + ":" + std::to_string(line_no);
    sks::json j;
    try {
      j = sks::json::parse(line);
    } catch (const sks::json::parse_error& e) {
      throw sks::Error(sks::errc::schema_error, where + ": " + e.what());
    }
    if (!j.is_object() || !j.contains("id") || !j["id"].is_number_integer())
      throw sks::Error(sks::errc::schema_error, where + ": prediction needs an integer \"id\"");
    const std::int64_t id = j["id"].get<std::int64_t>();
    if (!j.contains("H"))
      throw sks::Error(sks::errc::schema_error, where + ": prediction needs an \"H\" matrix");
    preds.emplace(id, sks::homography_from_json(j["H"], where + ".H"));
  }

  std::ofstream csv(opt.out);
  if (!csv) throw sks::Error(sks::errc::io_error, "cannot open " + opt.out + " for writing");
  csv << "sample_id,ace_po,ace_ao\n";
  csv.precision(17);
  std::vector<double> po_values;
  std::vector<double> ao_values;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto it = preds.find(static_cast<std::int64_t>(i));
    if (it == preds.end())
      throw sks::Error(sks::errc::schema_error,
                       "missing prediction for sample id " + std::to_string(i));
    const double po = sks::ace_po(it->second, samples[i].gt_homography, samples[i].cfg);
    const double ao = sks::ace_ao(it->second, samples[i].gt_homography, samples[i].cfg);
    csv << i << "," << po << "," << ao << "\n";
    po_values.push_back(po);
    ao_values.push_back(ao);
  }
  if (!csv) throw sks::Error(sks::errc::io_error, "write failed for " + opt.out);

  sks::json summary;
  summary["ace_po"] = sks::to_json(sks::quartile_summary(po_values));
  summary["ace_ao"] = sks::to_json(sks::quartile_summary(ao_values));
  std::cout << summary.dump() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SKS homography toolkit: decoupled geometric parameterization of planar "
               "homographies"};
  app.require_subcommand(1);

  SolveOptions solve_opt;
  CLI::App* solve = app.add_subcommand("solve", "estimate a homography from correspondences");
  solve->add_option("--input", solve_opt.input, "correspondence JSON ([sx,sy,tx,ty] quadruples)")
      ->required();
  solve->add_option("--method", solve_opt.method, "sks | dlt | ransac")
      ->check(CLI::IsMember({"sks", "dlt", "ransac"}));
  solve->add_option("--iters", solve_opt.iterations, "RANSAC iterations");
  solve->add_option("--thresh", solve_opt.threshold, "RANSAC inlier threshold (pixels)");
  solve->add_option("--seed", solve_opt.seed, "RANSAC seed");

  DecomposeOptions dec_opt;
  CLI::App* dec = app.add_subcommand("decompose", "split a homography into the 8 parameters");
  dec->set_help_flag("--help", "print help");  // frees -h for the matrix argument
  dec->add_option("--h", dec_opt.h_path, "homography JSON (array of 9)")->required();
  dec->add_option("--cfg", dec_opt.cfg_path, "square config JSON {cx, cy, r}")->required();
  dec->add_option("--thresh1", dec_opt.thresh1, "affine classification threshold");
  dec->add_option("--thresh2", dec_opt.thresh2, "similarity classification threshold");

  std::string compose_params, compose_cfg;
  CLI::App* comp = app.add_subcommand("compose", "assemble a homography from the 8 parameters");
  comp->add_option("--params", compose_params, "parameter JSON {sim, ker}")->required();
  comp->add_option("--cfg", compose_cfg, "square config JSON {cx, cy, r}")->required();

  GenerateOptions gen_opt;
  CLI::App* gen = app.add_subcommand("generate", "synthesize a corner-perturbation dataset");
  gen->add_option("--regime", gen_opt.regime, "projective | affine | similarity")->required();
  gen->add_option("--count", gen_opt.count, "number of samples")->required();
  gen->add_option("--seed", gen_opt.seed, "RNG seed");
  gen->add_option("--out", gen_opt.out, "output JSONL path")->required();
  gen->add_option("--size", gen_opt.size, "image side length (pixels)");
  gen->add_option("--max-offset", gen_opt.max_offset, "corner perturbation bound (pixels)");

  EvaluateOptions eval_opt;
  CLI::App* eval = app.add_subcommand("evaluate", "score predictions against a dataset");
  eval->add_option("--data", eval_opt.data, "dataset JSONL")->required();
  eval->add_option("--pred", eval_opt.pred, "predictions JSONL ({id, H} per line)")->required();
  eval->add_option("--out", eval_opt.out, "output CSV path")->required();

  int bench_trials = 1000;
  std::uint64_t bench_seed = 0;
  CLI::App* bench = app.add_subcommand("bench", "time compose_sks against the DLT baseline");
  bench->add_option("--trials", bench_trials, "number of random problems")->required();
  bench->add_option("--seed", bench_seed, "RNG seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : EXIT_INPUT_ERROR;
  }

  try {
    if (solve->parsed()) return run_solve(solve_opt);
    if (dec->parsed()) return run_decompose(dec_opt);
    if (comp->parsed()) return run_compose(compose_params, compose_cfg);
    if (gen->parsed()) return run_generate(gen_opt);
    if (eval->parsed()) return run_evaluate(eval_opt);
    if (bench->parsed()) {
      sks::print_bench_report(sks::run_solver_bench(bench_trials, bench_seed), std::cout);
      return 0;
    }
  } catch (const sks::Error& e) {
    std::cerr << e.what() << "\n";
    return sks::is_input_error(e.code()) ? EXIT_INPUT_ERROR : EXIT_NUMERIC_ERROR;
  } catch (const std::exception& e) {
    std::cerr << "InternalError: " << e.what() << "\n";
    return EXIT_NUMERIC_ERROR;
  }
  return 0;
}

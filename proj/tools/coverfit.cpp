// coverfit: command-line front end for fitting width-1 bodies into circumscribed
// symmetric polytopes.
//
// Exit codes: 0 success, 2 search not converged / verify mismatch, 3 invalid input.

#include "coverfit/coverfit.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

namespace {

using namespace coverfit;
using json = nlohmann::json;

constexpr int kOk = 0;
constexpr int kNotConverged = 2;
constexpr int kInvalid = 3;

void emit(const json& j, const std::string& out_path) {
  const std::string text = j.dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
  } else {
    io::write_text(out_path, text);
  }
}

int worker_count() {
  if (const char* env = std::getenv("COVERFIT_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n >= 1) return n;
    } catch (const std::exception&) {
    }
    std::cerr << "coverfit: ignoring invalid COVERFIT_THREADS='" << env << "'\n";
  }
  return 0;
}

struct GenBodyArgs {
  int dim = 0;
  std::string kind;
  double epsilon = 0.05;
  int degree = 3;
  std::optional<int> k;
  double phase = 0.0;
  std::uint64_t seed = 0;
  std::string out;
};

int run_gen_body(const GenBodyArgs& a) {
  ConvexBody body = make_ball(2);
  if (a.kind == "ball") {
    body = make_ball(a.dim);
  } else if (a.kind == "reuleaux_polygon") {
    if (a.dim != 2) throw InputError("gen-body: reuleaux_polygon requires --dim 2");
    if (!a.k) throw InputError("gen-body: reuleaux_polygon requires --k");
    body = make_reuleaux_polygon(*a.k, a.phase);
  } else if (a.kind == "perturbed_ball") {
    body = make_perturbed_ball(a.dim, a.degree, a.epsilon, a.seed);
  } else {
    throw InputError("gen-body: unknown kind '" + a.kind + "'");
  }
  emit(io::body_to_json(body), a.out);
  return kOk;
}

int run_make_polytope(const std::string& normals, const std::string& preset_name, const std::string& out) {
  if (normals.empty() == preset_name.empty()) throw InputError("make-polytope: give exactly one of --normals or --preset");
  const SymmetricPolytope p = normals.empty() ? preset(preset_name) : io::polytope_from_json(io::read_json(normals));
  emit(io::polytope_to_json(p), out);
  std::cerr << io::polytope_summary(p).dump() << "\n";
  return kOk;
}

struct SolveArgs {
  std::string body;
  std::string polytope;
  std::string preset;
  std::uint64_t seed = 0;
  int restarts = 200;
  double tol = 1e-10;
  int max_iters = 5000;
  std::string out;
};

int run_solve(const SolveArgs& a, const std::string& command_line) {
  if (a.polytope.empty() == a.preset.empty()) throw InputError("solve: give exactly one of --polytope or --preset");
  const auto t0 = std::chrono::steady_clock::now();
  const records::InputRef body_in = records::body_input(a.body);
  const records::InputRef poly_in = records::polytope_input(a.preset.empty() ? a.polytope : a.preset);
  const ConvexBody body = io::body_from_json(body_in.definition);
  const SymmetricPolytope p = io::polytope_from_json(poly_in.definition);
  if (body.dim() != p.dim()) throw InputError("solve: body and polytope dimensions differ");

  SearchConfig cfg;
  cfg.seed = a.seed;
  cfg.restarts = a.restarts;
  cfg.tol = a.tol;
  cfg.max_iters = a.max_iters;
  cfg.threads = worker_count();
  const SearchOutcome outcome = minimize(body, p, cfg);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const json record = records::solve_record(command_line, cfg, body_in, poly_in, p, outcome, wall);
  emit(record, a.out);
  if (!a.out.empty()) {
    std::cout << json{{"converged", outcome.converged}, {"g_norm", outcome.g_norm}, {"margin", outcome.fit.margin},
                      {"starts", outcome.starts}, {"record", a.out}}
                     .dump()
              << "\n";
  }
  if (p.beyond_theorem()) std::cerr << "coverfit: polytope is beyond theorem - experimental\n";
  if (!outcome.converged) std::cerr << "coverfit: no zero found within " << cfg.restarts << " restarts\n";
  return outcome.converged ? kOk : kNotConverged;
}

int run_verify(const std::string& path) {
  const json record = io::read_json(path);
  const records::VerifyResult v = records::verify_record(record);
  std::cout << json{{"ok", v.ok},
                    {"message", v.message},
                    {"max_residual_diff", v.max_residual_diff},
                    {"translation_diff", v.translation_diff},
                    {"margin_diff", v.margin_diff},
                    {"margin", v.margin},
                    {"g_norm", v.g_norm}}
                   .dump(2)
            << "\n";
  return v.ok ? kOk : kNotConverged;
}

int run_scan2d(const std::string& body_path, const std::string& polytope, int samples, const std::string& csv) {
  const ConvexBody body = io::load_body(body_path);
  const SymmetricPolytope p = io::load_polytope(polytope);
  const ScanResult scan = scan_2d(body, p, samples);
  if (!csv.empty()) io::write_text(csv, io::scan_to_csv(scan));
  std::cout << io::scan_to_json(scan).dump(2) << "\n";
  return kOk;
}

int run_presets_list() {
  json out = json::array();
  for (const char* name : preset_names()) {
    json entry = io::polytope_summary(preset(name));
    entry["name"] = name;
    out.push_back(entry);
  }
  std::cout << out.dump(2) << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"coverfit: circumscribe centrally symmetric polytopes about constant-width bodies"};
  app.require_subcommand(1);

  GenBodyArgs gen;
  auto* gen_cmd = app.add_subcommand("gen-body", "Generate a constant-width-1 body file");
  gen_cmd->add_option("--dim", gen.dim, "Dimension (2, 3 or 4)")->required();
  gen_cmd->add_option("--kind", gen.kind, "ball | reuleaux_polygon | perturbed_ball")->required();
  gen_cmd->add_option("--epsilon", gen.epsilon, "Perturbation size, (0, 0.2]");
  gen_cmd->add_option("--degree", gen.degree, "Odd polynomial degree <= 5");
  gen_cmd->add_option("--k", gen.k, "Reuleaux polygon vertex count (odd >= 3)");
  gen_cmd->add_option("--phase", gen.phase, "Reuleaux polygon orientation (radians)");
  gen_cmd->add_option("--seed", gen.seed, "Random seed");
  gen_cmd->add_option("--out", gen.out, "Output file (default stdout)");

  std::string poly_normals, poly_preset, poly_out;
  auto* poly_cmd = app.add_subcommand("make-polytope", "Normalize and validate a polytope");
  poly_cmd->add_option("--normals", poly_normals, "Polytope JSON with strip_normals");
  poly_cmd->add_option("--preset", poly_preset, "Preset name");
  poly_cmd->add_option("--out", poly_out, "Output file (default stdout)");

  SolveArgs solve;
  auto* solve_cmd = app.add_subcommand("solve", "Search for a rotation and translation covering the body");
  solve_cmd->add_option("--body", solve.body, "Body file")->required();
  solve_cmd->add_option("--polytope", solve.polytope, "Polytope file or preset name");
  solve_cmd->add_option("--preset", solve.preset, "Preset name");
  solve_cmd->add_option("--seed", solve.seed, "Random seed");
  solve_cmd->add_option("--restarts", solve.restarts, "Multistart count");
  solve_cmd->add_option("--tol", solve.tol, "Tolerance on |g|");
  solve_cmd->add_option("--max-iters", solve.max_iters, "Nelder-Mead iterations per start");
  solve_cmd->add_option("--out", solve.out, "Record file (default stdout)");

  std::string record_path;
  auto* verify_cmd = app.add_subcommand("verify", "Recompute a solve record");
  verify_cmd->add_option("--record", record_path, "Record file")->required();

  std::string scan_body, scan_polytope = "hexagon2d", scan_csv;
  int scan_samples = 10000;
  auto* scan_cmd = app.add_subcommand("scan2d", "Scan the planar residual over [0, pi)");
  scan_cmd->add_option("--body", scan_body, "Body file (dim 2)")->required();
  scan_cmd->add_option("--preset,--polytope", scan_polytope, "Preset name or polytope file with 3 strips");
  scan_cmd->add_option("--samples", scan_samples, "Number of angles");
  scan_cmd->add_option("--csv", scan_csv, "CSV output of (angle, residual)");

  int bounds_dim = 0;
  auto* bounds_cmd = app.add_subcommand("bounds", "Smith-index and facet bounds");
  bounds_cmd->add_option("--dim", bounds_dim, "Even dimension 2..8")->required();

  auto* presets_cmd = app.add_subcommand("presets-list", "List polytope presets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalid;
  }

  std::string command_line = "coverfit";
  for (int i = 1; i < argc; ++i) command_line += std::string(" ") + argv[i];

  try {
    if (*gen_cmd) return run_gen_body(gen);
    if (*poly_cmd) return run_make_polytope(poly_normals, poly_preset, poly_out);
    if (*solve_cmd) return run_solve(solve, command_line);
    if (*verify_cmd) return run_verify(record_path);
    if (*scan_cmd) return run_scan2d(scan_body, scan_polytope, scan_samples, scan_csv);
    if (*bounds_cmd) {
      std::cout << io::bounds_report(bounds_dim).dump(2) << "\n";
      return kOk;
    }
    if (*presets_cmd) return run_presets_list();
  } catch (const InputError& e) {
    std::cerr << "coverfit: " << e.what() << "\n";
    return kInvalid;
  } catch (const GenerationError& e) {
    std::cerr << "coverfit: " << e.what() << "\n";
    return kInvalid;
  } catch (const DegeneracyError& e) {
    std::cerr << "coverfit: " << e.what() << "\n";
    return kInvalid;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "coverfit: malformed input: " << e.what() << "\n";
    return kInvalid;
  }
  return kInvalid;
}

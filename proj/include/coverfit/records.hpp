#pragma once

#include "coverfit/io.hpp"

#include <openssl/evp.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <string>

namespace coverfit::records {

using json = nlohmann::json;

inline constexpr double kVerifyTol = 1e-10;
inline constexpr double kVerifyMarginFloor = -1e-7;

inline std::string sha256_hex(const std::string& bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", digest[i]);
    hex += buf;
  }
  return hex;
}

// Where an input came from and the exact definition that was used, so a record
// can be re-verified without the original files.
struct InputRef {
  std::string source;
  std::string sha256;
  json definition;
};

inline InputRef body_input(const std::string& path) {
  const std::string text = io::read_text(path);
  const ConvexBody body = io::body_from_json(io::parse_json(text, path));
  return {path, sha256_hex(text), io::body_to_json(body)};
}

inline InputRef polytope_input(const std::string& source) {
  if (is_preset(source) && !std::filesystem::exists(source)) {
    const json def = io::polytope_to_json(preset(source));
    return {source, sha256_hex(def.dump()), def};
  }
  const std::string text = io::read_text(source);
  const SymmetricPolytope p = io::polytope_from_json(io::parse_json(text, source));
  return {source, sha256_hex(text), io::polytope_to_json(p)};
}

inline json input_to_json(const InputRef& in) {
  return {{"source", in.source}, {"sha256", in.sha256}, {"definition", in.definition}};
}

inline json solve_record(const std::string& command_line, const SearchConfig& cfg, const InputRef& body,
                         const InputRef& polytope, const SymmetricPolytope& p, const SearchOutcome& outcome,
                         double wall_time_s) {
  json record{{"tool", "coverfit"},
              {"version", kVersion},
              {"command", "solve"},
              {"command_line", command_line},
              {"config",
               {{"seed", cfg.seed},
                {"tol", cfg.tol},
                {"restarts", cfg.restarts},
                {"max_iters", cfg.max_iters},
                {"recenter_every", cfg.recenter_every},
                {"initial_step", cfg.initial_step}}},
              {"inputs", {{"body", input_to_json(body)}, {"polytope", input_to_json(polytope)}}},
              {"polytope", io::polytope_summary(p)},
              {"beyond_theorem", p.beyond_theorem()},
              {"outcome", io::outcome_to_json(outcome)},
              {"wall_time_s", wall_time_s}};
  if (p.beyond_theorem()) record["note"] = "beyond theorem - experimental";
  return record;
}

struct VerifyResult {
  bool ok = false;
  std::string message;
  double max_residual_diff = 0.0;
  double translation_diff = 0.0;
  double margin_diff = 0.0;
  double margin = 0.0;
  double g_norm = 0.0;
};

// Recomputes the residual map at the stored rotation from the embedded input
// definitions. Malformed records raise InputError.
inline VerifyResult verify_record(const json& record) {
  if (io::field<std::string>(record, "command", "record") != "solve") throw InputError("record: not a solve record");
  if (!record.contains("inputs") || !record.contains("outcome") || !record.contains("config")) {
    throw InputError("record: missing inputs, config or outcome");
  }
  const json& inputs = record["inputs"];
  const json& out = record["outcome"];
  if (!inputs.contains("body") || !inputs.contains("polytope")) throw InputError("record: missing body or polytope input");
  const ConvexBody body = io::body_from_json(inputs["body"].value("definition", json()));
  const SymmetricPolytope p = io::polytope_from_json(inputs["polytope"].value("definition", json()));
  const int dim = io::field<int>(out, "dim", "record outcome");
  if (dim != body.dim() || dim != p.dim()) throw InputError("record: dimension mismatch");
  const Rotation tau = Rotation::from_matrix(io::matrix_from_json(out.value("rotation", json()), dim, "record rotation"));
  const Vec stored_residual = io::vec_from_json(out.value("residual", json()), "record residual");
  const Vec stored_x = io::vec_from_json(out.value("translation", json()), "record translation");
  const double stored_margin = io::field<double>(out, "margin", "record outcome");
  const bool stored_converged = io::field<bool>(out, "converged", "record outcome");
  const double tol = io::field<double>(record["config"], "tol", "record config");

  const FitResult fit = residual_map(body, p, tau);
  VerifyResult v;
  v.margin = fit.margin;
  v.g_norm = fit.residual_norm();
  if (stored_residual.size() != fit.residual.size() || stored_x.size() != fit.x.size()) {
    v.message = "residual or translation length differs";
    return v;
  }
  v.max_residual_diff = fit.residual.size() ? (fit.residual - stored_residual).cwiseAbs().maxCoeff() : 0.0;
  v.translation_diff = (fit.x - stored_x).cwiseAbs().maxCoeff();
  v.margin_diff = std::abs(fit.margin - stored_margin);
  if (!(v.max_residual_diff <= kVerifyTol && v.translation_diff <= kVerifyTol && v.margin_diff <= kVerifyTol)) {
    v.message = "recomputed values differ from the record";
  } else if (!(fit.margin >= kVerifyMarginFloor)) {
    v.message = "containment margin below -1e-7";
  } else if (stored_converged && !(v.g_norm <= tol)) {
    v.message = "record claims convergence but |g| exceeds tol";
  } else {
    v.ok = true;
    v.message = "ok";
  }
  return v;
}

}  // namespace coverfit::records

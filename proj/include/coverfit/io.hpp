#pragma once

#include "coverfit/rotation_search.hpp"
#include "coverfit/smith_topology.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

// JSON formats for bodies, polytopes, fits, search outcomes and bounds reports.
// Doubles are written in shortest round-trip form, so load(save(x)) is exact.
namespace coverfit::io {

using json = nlohmann::json;

inline json vec_to_json(const Vec& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

inline Vec vec_from_json(const json& j, const char* what) {
  if (!j.is_array()) throw InputError(std::string(what) + ": expected an array of numbers");
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw InputError(std::string(what) + ": expected an array of numbers");
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  return v;
}

// Row-major flat list.
inline json matrix_to_json(const Mat& m) {
  json out = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) out.push_back(m(r, c));
  }
  return out;
}

inline Mat matrix_from_json(const json& j, int dim, const char* what) {
  const Vec flat = vec_from_json(j, what);
  if (flat.size() != static_cast<Eigen::Index>(dim) * dim) throw InputError(std::string(what) + ": wrong number of entries");
  Mat m(dim, dim);
  for (int r = 0; r < dim; ++r) {
    for (int c = 0; c < dim; ++c) m(r, c) = flat(r * dim + c);
  }
  return m;
}

template <class T>
T field(const json& j, const char* key, const char* what) {
  if (!j.is_object() || !j.contains(key)) throw InputError(std::string(what) + ": missing field '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw InputError(std::string(what) + ": field '" + key + "' has the wrong type");
  }
}

// ---- bodies

inline json body_to_json(const ConvexBody& body) {
  json out{{"dim", body.dim()}, {"kind", to_string(body.kind())}};
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, ReuleauxPolygonSpec>) {
          out["k"] = n.k;
          out["phase"] = n.phase;
        } else if constexpr (std::is_same_v<T, PerturbedBallSpec>) {
          out["epsilon"] = n.epsilon;
          json coeffs = json::array();
          for (const auto& m : n.coeffs) coeffs.push_back({{"exponents", m.exponents}, {"c", m.c}});
          out["coeffs"] = coeffs;
        } else if constexpr (std::is_same_v<T, TranslatedNode>) {
          out["t"] = vec_to_json(n.t);
          out["base"] = body_to_json(*n.base);
        } else if constexpr (std::is_same_v<T, RotatedNode>) {
          out["rotation"] = matrix_to_json(n.rho.matrix());
          out["base"] = body_to_json(*n.base);
        }
      },
      body.node());
  return out;
}

inline ConvexBody body_from_json(const json& j) {
  const int dim = field<int>(j, "dim", "body");
  const auto kind = field<std::string>(j, "kind", "body");
  if (!is_supported_dim(dim)) throw InputError("body: dim must be 2, 3 or 4");
  if (kind == "ball") return make_ball(dim);
  if (kind == "reuleaux_polygon") {
    if (dim != 2) throw InputError("body: reuleaux_polygon requires dim 2");
    return make_reuleaux_polygon(field<int>(j, "k", "body"), j.value("phase", 0.0));
  }
  if (kind == "perturbed_ball") {
    PerturbedBallSpec spec{dim, field<double>(j, "epsilon", "body"), {}};
    if (!j.contains("coeffs") || !j["coeffs"].is_array()) throw InputError("body: perturbed_ball needs a 'coeffs' array");
    for (const auto& c : j["coeffs"]) {
      spec.coeffs.push_back({field<std::vector<int>>(c, "exponents", "body coeff"), field<double>(c, "c", "body coeff")});
    }
    return make_perturbed_ball(std::move(spec));
  }
  if (kind == "translated") {
    if (!j.contains("base")) throw InputError("body: translated needs 'base'");
    return translate(body_from_json(j["base"]), vec_from_json(j.value("t", json()), "body t"));
  }
  if (kind == "rotated") {
    if (!j.contains("base")) throw InputError("body: rotated needs 'base'");
    return rotate_body(body_from_json(j["base"]),
                       Rotation::from_matrix(matrix_from_json(j.value("rotation", json()), dim, "body rotation")));
  }
  throw InputError("body: unknown kind '" + kind + "'");
}

// ---- polytopes

inline json polytope_to_json(const SymmetricPolytope& p) {
  json normals = json::array();
  for (const auto& u : p.strip_normals()) normals.push_back(vec_to_json(u));
  return {{"dim", p.dim()}, {"strip_normals", normals}};
}

inline SymmetricPolytope polytope_from_json(const json& j) {
  const int dim = field<int>(j, "dim", "polytope");
  if (!j.contains("strip_normals") || !j["strip_normals"].is_array()) throw InputError("polytope: missing 'strip_normals'");
  std::vector<Vec> normals;
  for (const auto& n : j["strip_normals"]) normals.push_back(vec_from_json(n, "polytope normal"));
  return make_polytope(dim, normals);
}

inline json polytope_summary(const SymmetricPolytope& p) {
  json out{{"dim", p.dim()},
           {"strips", p.strips()},
           {"facets", p.facets()},
           {"frame", p.frame().indices},
           {"frame_det_abs", p.frame().det_abs},
           {"beyond_theorem", p.beyond_theorem()}};
  if (p.theorem_facet_bound()) out["theorem_facet_bound"] = *p.theorem_facet_bound();
  if (p.beyond_theorem()) out["note"] = "beyond theorem - experimental";
  return out;
}

// ---- files

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << text;
  if (!out) throw InputError("write failed for '" + path + "'");
}

inline json parse_json(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError("malformed JSON in '" + origin + "': " + e.what());
  }
}

inline json read_json(const std::string& path) { return parse_json(read_text(path), path); }

inline ConvexBody load_body(const std::string& path) { return body_from_json(read_json(path)); }

// A preset name or a polytope file.
inline SymmetricPolytope load_polytope(const std::string& source) {
  if (is_preset(source) && !std::filesystem::exists(source)) return preset(source);
  return polytope_from_json(read_json(source));
}

// ---- results

inline json fit_to_json(const FitResult& fit) {
  return {{"x", vec_to_json(fit.x)},
          {"residual", vec_to_json(fit.residual)},
          {"margin", fit.margin},
          {"frame", fit.frame.indices}};
}

inline json quaternion_to_json(const Eigen::Quaterniond& q) { return json::array({q.w(), q.x(), q.y(), q.z()}); }

inline json outcome_to_json(const SearchOutcome& o) {
  json out{{"dim", o.rotation.dim()},
           {"rotation", matrix_to_json(o.rotation.matrix())},
           {"translation", vec_to_json(o.fit.x)},
           {"residual", vec_to_json(o.fit.residual)},
           {"g_norm", o.g_norm},
           {"margin", o.fit.margin},
           {"frame", o.fit.frame.indices},
           {"starts", o.starts},
           {"best_start", o.best_start},
           {"iterations", o.iterations},
           {"converged", o.converged},
           {"seed", o.seed}};
  if (o.rotation.dim() == 4) {
    const QuaternionPair qp = o.rotation.quaternion_pair();
    out["quaternion_pair"] = {{"left", quaternion_to_json(qp.left)}, {"right", quaternion_to_json(qp.right)}};
  }
  return out;
}

inline json scan_to_json(const ScanResult& scan) {
  json brackets = json::array();
  for (const auto& b : scan.brackets) brackets.push_back({{"lo", b.lo}, {"hi", b.hi}, {"degenerate", b.degenerate}});
  return {{"samples", scan.angles.size()}, {"brackets", brackets}};
}

inline std::string scan_to_csv(const ScanResult& scan) {
  std::ostringstream out;
  out.precision(17);
  out << "angle,residual\n";
  for (std::size_t i = 0; i < scan.angles.size(); ++i) out << scan.angles[i] << ',' << scan.residuals[i] << '\n';
  return out.str();
}

inline json bounds_report(int dim) {
  using namespace topology;
  const IndexBounds b = index_bounds(dim);
  const FacetBound fb = facet_bound(dim);
  json out{{"dim", dim},
           {"s", b.s},
           {"ind_lower", b.lower},
           {"ind_upper", b.upper},
           {"facet_bound", fb.facets},
           {"facet_bound_ind", fb.ind},
           {"facet_bound_ind_kind", fb.ind_exact ? "exact" : "lower_bound"},
           {"betti_so", poincare_so(dim).coefficients}};
  if (b.exact) out["ind_exact"] = *b.exact;
  json report = json::array();
  if (dim == 4) {
    const BettiSequence pso = poincare_pso4();
    out["betti_pso"] = pso.coefficients;
    for (const auto& e : partial_sum_check(pso, poincare_so(4), static_cast<int>(b.s - 1))) {
      report.push_back({{"i", e.i}, {"b_rho", e.b_rho}, {"partial_sum", e.partial_sum}, {"pass", e.pass}});
    }
  }
  out["partial_sum_report"] = report;
  return out;
}

}  // namespace coverfit::io

#pragma once

#include "coverfit/common.hpp"
#include "coverfit/rotation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <random>
#include <variant>
#include <vector>

namespace coverfit {

enum class BodyKind { ball, reuleaux_polygon, perturbed_ball, translated, rotated };

inline const char* to_string(BodyKind kind) {
  switch (kind) {
    case BodyKind::ball: return "ball";
    case BodyKind::reuleaux_polygon: return "reuleaux_polygon";
    case BodyKind::perturbed_ball: return "perturbed_ball";
    case BodyKind::translated: return "translated";
    case BodyKind::rotated: return "rotated";
  }
  return "?";
}

// c * prod_i u_i^exponents[i]; total degree must be odd.
struct Monomial {
  std::vector<int> exponents;
  double c = 0.0;

  int degree() const {
    int d = 0;
    for (int e : exponents) d += e;
    return d;
  }

  double eval(const Vec& u) const {
    double p = c;
    for (std::size_t i = 0; i < exponents.size(); ++i) {
      for (int e = 0; e < exponents[i]; ++e) p *= u(static_cast<Eigen::Index>(i));
    }
    return p;
  }
};

// Support function 1/2 + epsilon * f(u) with f a sum of odd monomials, so
// f(-u) = -f(u) and the width is identically one.
struct PerturbedBallSpec {
  int dim = 0;
  double epsilon = 0.0;
  std::vector<Monomial> coeffs;

  double f(const Vec& u) const {
    double s = 0.0;
    for (const auto& m : coeffs) s += m.eval(u);
    return s;
  }
};

// Regular Reuleaux k-gon of width 1 centred at the origin. Vertex j sits at
// angle phase + 2*pi*j/k on a circle of radius 1 / (2 cos(pi / 2k)); the arc
// centred at vertex j has radius 1 and spans directions pi +- pi/(2k) from the
// vertex angle.
struct ReuleauxPolygonSpec {
  int k = 0;
  double phase = 0.0;
  std::vector<Eigen::Vector2d> vertices;

  double circumradius() const { return 0.5 / std::cos(std::numbers::pi / (2.0 * k)); }
  double vertex_angle(int j) const { return phase + 2.0 * std::numbers::pi * j / k; }
  double arc_half_width() const { return std::numbers::pi / (2.0 * k); }
};

class ConvexBody;

struct BallNode {};
struct TranslatedNode {
  std::shared_ptr<const ConvexBody> base;
  Vec t;
};
struct RotatedNode {
  std::shared_ptr<const ConvexBody> base;
  Rotation rho;
};

// A convex body in R^n given by its support function h(u) = sup_{z in C} z.u.
// Immutable; copies share the underlying data.
class ConvexBody {
 public:
  using Node = std::variant<BallNode, ReuleauxPolygonSpec, PerturbedBallSpec, TranslatedNode, RotatedNode>;

  static constexpr double kUnitTol = 1e-9;

  ConvexBody(int dim, Node node, bool certified)
      : dim_(dim), certified_(certified), node_(std::make_shared<const Node>(std::move(node))) {}

  int dim() const { return dim_; }
  bool constant_width_certified() const { return certified_; }
  const Node& node() const { return *node_; }

  BodyKind kind() const { return static_cast<BodyKind>(node_->index()); }

  double support(const Vec& u) const {
    require_dim(u.size(), dim_, "support");
    const double norm = u.norm();
    if (!(std::abs(norm - 1.0) <= kUnitTol)) throw InputError("support: direction is not a unit vector");
    if (norm == 1.0) return support_unit(u);
    return support_unit(u / norm);
  }

  double width(const Vec& u) const { return support(u) + support(-u); }

  // 1-homogeneous extension |x| h(x/|x|); zero at the origin.
  double homogeneous(const Vec& x) const {
    require_dim(x.size(), dim_, "homogeneous support");
    const double norm = x.norm();
    if (norm == 0.0) return 0.0;
    return norm * support_unit(x / norm);
  }

  // Expects |u| = 1; no checks.
  double support_unit(const Vec& u) const {
    return std::visit([&](const auto& n) { return eval(n, u); }, *node_);
  }

 private:
  static double eval(const BallNode&, const Vec&) { return 0.5; }

  static double eval(const ReuleauxPolygonSpec& r, const Vec& u) {
    const double direction = std::atan2(u(1), u(0));
    const double half = r.arc_half_width();
    double best = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < r.k; ++j) {
      const double offset = std::remainder(direction - (r.vertex_angle(j) + std::numbers::pi), 2.0 * std::numbers::pi);
      const double clamped = std::clamp(offset, -half, half);
      const double value = r.vertices[j].x() * u(0) + r.vertices[j].y() * u(1) + std::cos(offset - clamped);
      best = std::max(best, value);
    }
    return best;
  }

  static double eval(const PerturbedBallSpec& p, const Vec& u) { return 0.5 + p.epsilon * p.f(u); }

  static double eval(const TranslatedNode& t, const Vec& u) { return t.base->support_unit(u) + t.t.dot(u); }

  static double eval(const RotatedNode& r, const Vec& u) { return r.base->support_unit(r.rho.apply_inverse(u)); }

  int dim_;
  bool certified_;
  std::shared_ptr<const Node> node_;
};

inline ConvexBody make_ball(int dim) {
  if (!is_supported_dim(dim)) throw InputError("make_ball: dim must be 2, 3 or 4");
  return ConvexBody(dim, BallNode{}, true);
}

inline ConvexBody make_reuleaux_polygon(int k, double phase) {
  if (k < 3 || k % 2 == 0) throw InputError("make_reuleaux_polygon: k must be odd and >= 3");
  if (!std::isfinite(phase)) throw InputError("make_reuleaux_polygon: phase must be finite");
  ReuleauxPolygonSpec spec{k, phase, {}};
  const double radius = spec.circumradius();
  for (int j = 0; j < k; ++j) {
    const double a = spec.vertex_angle(j);
    spec.vertices.emplace_back(radius * std::cos(a), radius * std::sin(a));
  }
  return ConvexBody(2, std::move(spec), true);
}

// No convexity check; use make_perturbed_ball for validated bodies.
inline ConvexBody make_perturbed_ball(PerturbedBallSpec spec) {
  if (!is_supported_dim(spec.dim)) throw InputError("perturbed ball: dim must be 2, 3 or 4");
  if (!std::isfinite(spec.epsilon) || spec.epsilon < 0) throw InputError("perturbed ball: epsilon must be >= 0");
  for (const auto& m : spec.coeffs) {
    if (static_cast<int>(m.exponents.size()) != spec.dim) throw InputError("perturbed ball: monomial dimension mismatch");
    if (std::any_of(m.exponents.begin(), m.exponents.end(), [](int e) { return e < 0; })) {
      throw InputError("perturbed ball: negative exponent");
    }
    if (m.degree() % 2 == 0) throw InputError("perturbed ball: monomials must have odd total degree");
    if (!std::isfinite(m.c)) throw InputError("perturbed ball: non-finite coefficient");
  }
  const int dim = spec.dim;
  return ConvexBody(dim, std::move(spec), true);
}

inline ConvexBody translate(const ConvexBody& body, const Vec& t) {
  require_dim(t.size(), body.dim(), "translate");
  return ConvexBody(body.dim(), TranslatedNode{std::make_shared<const ConvexBody>(body), t},
                    body.constant_width_certified());
}

inline ConvexBody rotate_body(const ConvexBody& body, const Rotation& rho) {
  require_dim(rho.dim(), body.dim(), "rotate_body");
  return ConvexBody(body.dim(), RotatedNode{std::make_shared<const ConvexBody>(body), rho},
                    body.constant_width_certified());
}

struct ValidationReport {
  bool passed = true;
  double worst_violation = 0.0;  // max(0, H(x+y) - H(x) - H(y)) over the sample
  std::size_t pairs = 0;
};

// Sampled sublinearity check of the homogeneous extension. Half of the pairs are
// independent, half are nearly parallel (angle 1e-4..1) to probe local convexity.
inline ValidationReport validate_support_function(const ConvexBody& body, std::size_t n_pairs, std::uint64_t seed,
                                                  double tol = 1e-12) {
  ValidationReport report;
  report.pairs = n_pairs;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> log_scale(std::log(0.5), std::log(2.0));
  std::uniform_real_distribution<double> log_angle(-4.0, 0.0);
  const int n = body.dim();
  auto gaussian = [&] {
    Vec v(n);
    do {
      for (int i = 0; i < n; ++i) v(i) = normal(rng);
    } while (v.norm() < 1e-6);
    return v;
  };
  for (std::size_t i = 0; i < n_pairs; ++i) {
    Vec x = gaussian().normalized() * std::exp(log_scale(rng));
    Vec y;
    if (i % 2 == 0) {
      y = gaussian().normalized() * std::exp(log_scale(rng));
    } else {
      const double spread = std::pow(10.0, log_angle(rng));
      y = (x.normalized() + spread * gaussian().normalized()).normalized() * std::exp(log_scale(rng));
    }
    const double violation = body.homogeneous(x + y) - body.homogeneous(x) - body.homogeneous(y);
    report.worst_violation = std::max(report.worst_violation, violation);
  }
  report.passed = report.worst_violation <= tol;
  return report;
}

// All exponent vectors of the given total degree, in lexicographically
// decreasing order.
inline void enumerate_exponents(int dim, int degree, std::vector<int>& prefix, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(prefix.size()) == dim - 1) {
    prefix.push_back(degree);
    out.push_back(prefix);
    prefix.pop_back();
    return;
  }
  for (int e = degree; e >= 0; --e) {
    prefix.push_back(e);
    enumerate_exponents(dim, degree - e, prefix, out);
    prefix.pop_back();
  }
}

struct PerturbedBallOptions {
  std::size_t normalization_samples = 4096;
  std::size_t validation_pairs = 10000;
  double epsilon_floor = 1e-6;
};

// Random odd polynomial perturbation of the ball. Coefficients are uniform in
// [-1, 1], scaled so the sampled max of |f| is 1; epsilon is halved until the
// sampled sublinearity check passes.
inline ConvexBody make_perturbed_ball(int dim, int degree, double epsilon, std::uint64_t seed,
                                      const PerturbedBallOptions& options = {}) {
  if (!is_supported_dim(dim)) throw InputError("make_perturbed_ball: dim must be 2, 3 or 4");
  if (degree < 1 || degree > 5 || degree % 2 == 0) throw InputError("make_perturbed_ball: degree must be 1, 3 or 5");
  if (!(epsilon >= 0.0 && epsilon <= 0.2)) throw InputError("make_perturbed_ball: epsilon must lie in [0, 0.2]");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  PerturbedBallSpec spec{dim, epsilon, {}};
  for (int d = 1; d <= degree; d += 2) {
    std::vector<std::vector<int>> exps;
    std::vector<int> prefix;
    enumerate_exponents(dim, d, prefix, exps);
    for (auto& e : exps) spec.coeffs.push_back({std::move(e), coeff(rng)});
  }

  std::normal_distribution<double> normal;
  double peak = 0.0;
  for (std::size_t i = 0; i < options.normalization_samples; ++i) {
    Vec u(dim);
    for (int j = 0; j < dim; ++j) u(j) = normal(rng);
    peak = std::max(peak, std::abs(spec.f(u.normalized())));
  }
  if (peak > 0.0) {
    for (auto& m : spec.coeffs) m.c /= peak;
  }
  if (epsilon == 0.0) return make_perturbed_ball(std::move(spec));

  while (true) {
    ConvexBody body = make_perturbed_ball(spec);
    if (validate_support_function(body, options.validation_pairs, seed).passed) return body;
    spec.epsilon /= 2.0;
    if (spec.epsilon < options.epsilon_floor) {
      throw GenerationError("make_perturbed_ball: epsilon fell below floor without passing validation");
    }
  }
}

}  // namespace coverfit

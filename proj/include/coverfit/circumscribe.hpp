#pragma once

#include "coverfit/bodies.hpp"
#include "coverfit/polytopes.hpp"
#include "coverfit/rotation.hpp"

#include <algorithm>
#include <limits>
#include <vector>

namespace coverfit {

struct FitResult {
  Vec x;            // translation centring the body in the frame strips
  Vec residual;     // signed offsets of the non-frame strips, ascending index
  double margin = 0.0;
  ReferenceFrame frame;

  double residual_norm() const { return residual.size() == 0 ? 0.0 : residual.norm(); }
};

// Signed distance of x from the bisecting hyperplane of the width-1 strip with
// normal v that supports the body: h(v) - 1/2 - x.v.
inline double strip_residual(const ConvexBody& body, const Vec& v, const Vec& x) {
  require_dim(x.size(), body.dim(), "strip_residual");
  return body.support(v) - SymmetricPolytope::kFacetOffset - x.dot(v);
}

// The unique x with body inside x + strips(v_i) for n independent normals.
// Inclusion in a width-1 strip forces h(v) - x.v = 1/2 exactly, because the
// two one-sided slacks sum to width - 1 = 0.
inline Vec fit_translation(const ConvexBody& body, const std::vector<Vec>& frame_normals) {
  const int n = body.dim();
  require_dim(static_cast<long>(frame_normals.size()), n, "fit_translation frame size");
  Mat a(n, n);
  Vec rhs(n);
  for (int i = 0; i < n; ++i) {
    require_dim(frame_normals[i].size(), n, "fit_translation normal");
    a.row(i) = frame_normals[i].transpose();
    rhs(i) = body.support(frame_normals[i]) - SymmetricPolytope::kFacetOffset;
  }
  Eigen::PartialPivLU<Mat> lu(a);
  if (!(std::abs(lu.determinant()) > 1e-6)) throw DegeneracyError("fit_translation: frame normals are nearly dependent");
  return lu.solve(rhs);
}

// min over facets w of 1/2 - (h(tau w) - x.tau w); >= 0 means contained.
inline double containment_margin(const ConvexBody& body, const SymmetricPolytope& p, const Rotation& tau,
                                 const Vec& x) {
  require_dim(p.dim(), body.dim(), "containment_margin polytope");
  require_dim(tau.dim(), body.dim(), "containment_margin rotation");
  require_dim(x.size(), body.dim(), "containment_margin translation");
  double margin = std::numeric_limits<double>::infinity();
  for (const auto& w : facet_normals(p)) {
    const Vec rotated = tau.apply(w);
    margin = std::min(margin, SymmetricPolytope::kFacetOffset - (body.support_unit(rotated) - x.dot(rotated)));
  }
  return margin;
}

// The residual map tau -> g(tau) plus the translation and margin behind it.
inline FitResult residual_map(const ConvexBody& body, const SymmetricPolytope& p, const Rotation& tau) {
  require_dim(p.dim(), body.dim(), "residual_map polytope");
  require_dim(tau.dim(), body.dim(), "residual_map rotation");
  const auto& normals = p.strip_normals();
  std::vector<Vec> rotated;
  rotated.reserve(normals.size());
  for (const auto& u : normals) rotated.push_back(tau.apply(u));

  FitResult fit;
  fit.frame = p.frame();
  std::vector<Vec> frame_normals;
  for (int i : fit.frame.indices) frame_normals.push_back(rotated[i]);
  fit.x = fit_translation(body, frame_normals);

  fit.residual.resize(p.strips() - p.dim());
  Eigen::Index r = 0;
  for (int j = 0; j < p.strips(); ++j) {
    if (std::find(fit.frame.indices.begin(), fit.frame.indices.end(), j) != fit.frame.indices.end()) continue;
    fit.residual(r++) = body.support_unit(rotated[j]) - SymmetricPolytope::kFacetOffset - fit.x.dot(rotated[j]);
  }
  fit.margin = containment_margin(body, p, tau, fit.x);
  return fit;
}

}  // namespace coverfit

#pragma once

#include "coverfit/common.hpp"
#include "coverfit/smith_topology.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace coverfit {

// n strip indices whose normals span R^n, chosen to maximize |det|.
struct ReferenceFrame {
  std::vector<int> indices;
  double det_abs = 0.0;
};

// Centrally symmetric polytope circumscribed about the ball of diameter 1:
// the intersection of k strips {y : |y.u_i| <= 1/2}, 2k facets.
class SymmetricPolytope {
 public:
  static constexpr double kFacetOffset = 0.5;

  int dim() const { return dim_; }
  int strips() const { return static_cast<int>(normals_.size()); }
  int facets() const { return 2 * strips(); }
  const std::vector<Vec>& strip_normals() const { return normals_; }
  const ReferenceFrame& frame() const { return frame_; }

  // True when 2k exceeds the facet bound of the covering theorem for this
  // (even) dimension. Odd dimensions carry no bound and are never flagged.
  bool beyond_theorem() const { return beyond_theorem_; }
  std::optional<std::int64_t> theorem_facet_bound() const { return bound_; }

  friend SymmetricPolytope make_polytope(int dim, const std::vector<Vec>& normals);

 private:
  int dim_ = 0;
  std::vector<Vec> normals_;
  ReferenceFrame frame_;
  bool beyond_theorem_ = false;
  std::optional<std::int64_t> bound_;
};

namespace detail {

// First coordinate above noise made positive.
inline Vec canonical_orientation(Vec v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > 1e-12) {
      if (v(i) < 0) v = -v;
      break;
    }
  }
  return v;
}

inline Mat stack_rows(const std::vector<Vec>& normals, const std::vector<int>& indices) {
  const auto n = normals.front().size();
  Mat m(static_cast<Eigen::Index>(indices.size()), n);
  for (std::size_t r = 0; r < indices.size(); ++r) m.row(static_cast<Eigen::Index>(r)) = normals[indices[r]].transpose();
  return m;
}

inline bool next_combination(std::vector<int>& c, int k) {
  const int n = static_cast<int>(c.size());
  int i = n - 1;
  while (i >= 0 && c[i] == k - n + i) --i;
  if (i < 0) return false;
  ++c[i];
  for (int j = i + 1; j < n; ++j) c[j] = c[j - 1] + 1;
  return true;
}

}  // namespace detail

// Exhaustive scan of all C(k, n) subsets. Determinants within 1e-12 of each
// other count as ties and the lexicographically first subset wins.
inline ReferenceFrame reference_frame(int dim, const std::vector<Vec>& normals) {
  const int k = static_cast<int>(normals.size());
  if (k < dim) throw DegeneracyError("reference_frame: fewer normals than dimensions");
  std::vector<int> pick(dim);
  for (int i = 0; i < dim; ++i) pick[i] = i;
  ReferenceFrame best;
  do {
    const double d = std::abs(detail::stack_rows(normals, pick).determinant());
    if (d > best.det_abs + 1e-12) best = {pick, d};
  } while (detail::next_combination(pick, k));
  if (best.det_abs <= 1e-6) throw DegeneracyError("reference_frame: no well-conditioned spanning subset");
  return best;
}

inline ReferenceFrame reference_frame(const SymmetricPolytope& p) { return reference_frame(p.dim(), p.strip_normals()); }

inline SymmetricPolytope make_polytope(int dim, const std::vector<Vec>& normals) {
  if (!is_supported_dim(dim)) throw InputError("make_polytope: dim must be 2, 3 or 4");
  if (static_cast<int>(normals.size()) < dim) throw InputError("unbounded polytope: fewer strips than dimensions");
  SymmetricPolytope p;
  p.dim_ = dim;
  for (const auto& raw : normals) {
    require_dim(raw.size(), dim, "make_polytope normal");
    const double norm = raw.norm();
    if (!std::isfinite(norm) || norm < 1e-12) throw InputError("make_polytope: zero or non-finite normal");
    // Already-unit input is kept bit-exact so that normalization is idempotent.
    const bool unit = std::abs(norm - 1.0) <= 4 * std::numeric_limits<double>::epsilon();
    p.normals_.push_back(detail::canonical_orientation(unit ? Vec(raw) : Vec(raw / norm)));
  }
  // Equal or antipodal normals: the angle between the lines is ~0.
  for (std::size_t i = 0; i < p.normals_.size(); ++i) {
    for (std::size_t j = i + 1; j < p.normals_.size(); ++j) {
      const double sine = (p.normals_[i] - p.normals_[j] * p.normals_[i].dot(p.normals_[j])).norm();
      if (sine <= 1e-9) {
        throw InputError("make_polytope: normals " + std::to_string(i) + " and " + std::to_string(j) +
                         " are equal or antipodal");
      }
    }
  }
  Mat all(static_cast<Eigen::Index>(p.normals_.size()), dim);
  for (std::size_t r = 0; r < p.normals_.size(); ++r) all.row(static_cast<Eigen::Index>(r)) = p.normals_[r].transpose();
  Eigen::JacobiSVD<Mat> svd(all);
  if (svd.singularValues()(dim - 1) <= 1e-9) throw InputError("unbounded polytope: strip normals do not span R^n");
  try {
    p.frame_ = reference_frame(dim, p.normals_);
  } catch (const DegeneracyError& e) {
    throw InputError(std::string("unbounded polytope: ") + e.what());
  }
  if (dim % 2 == 0) {
    p.bound_ = topology::facet_bound(dim).facets;
    p.beyond_theorem_ = p.facets() > *p.bound_;
  }
  return p;
}

// {+u_i} followed by {-u_i}.
inline std::vector<Vec> facet_normals(const SymmetricPolytope& p) {
  std::vector<Vec> out;
  out.reserve(static_cast<std::size_t>(p.facets()));
  for (const auto& u : p.strip_normals()) out.push_back(u);
  for (const auto& u : p.strip_normals()) out.push_back(-u);
  return out;
}

inline const std::array<const char*, 4>& preset_names() {
  static const std::array<const char*, 4> names{"hexagon2d", "rhombic12_3d", "axisdiag14_4d", "cross16_4d"};
  return names;
}

inline bool is_preset(const std::string& name) {
  for (const char* n : preset_names()) {
    if (name == n) return true;
  }
  return false;
}

inline SymmetricPolytope preset(const std::string& name) {
  auto v = [](std::initializer_list<double> xs) {
    Vec out(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (double x : xs) out(i++) = x;
    return out;
  };
  if (name == "hexagon2d") {
    std::vector<Vec> normals;
    for (int deg : {0, 60, 120}) {
      const double a = deg * std::numbers::pi / 180.0;
      normals.push_back(v({std::cos(a), std::sin(a)}));
    }
    return make_polytope(2, normals);
  }
  if (name == "rhombic12_3d") {
    return make_polytope(3, {v({1, 1, 0}), v({1, -1, 0}), v({1, 0, 1}), v({1, 0, -1}), v({0, 1, 1}), v({0, 1, -1})});
  }
  if (name == "axisdiag14_4d") {
    return make_polytope(4, {v({1, 0, 0, 0}), v({0, 1, 0, 0}), v({0, 0, 1, 0}), v({0, 0, 0, 1}),
                             v({0.5, 0.5, 0.5, 0.5}), v({0.5, 0.5, -0.5, -0.5}), v({0.5, -0.5, 0.5, -0.5})});
  }
  if (name == "cross16_4d") {
    // The 16 sign patterns collapse to the 8 with a positive first entry.
    std::vector<Vec> normals;
    for (int bits = 0; bits < 8; ++bits) {
      normals.push_back(v({0.5, bits & 4 ? -0.5 : 0.5, bits & 2 ? -0.5 : 0.5, bits & 1 ? -0.5 : 0.5}));
    }
    return make_polytope(4, normals);
  }
  throw InputError("unknown preset '" + name + "'");
}

}  // namespace coverfit

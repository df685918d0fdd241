#include "coverfit/polytopes.hpp"
#include "coverfit/rotation.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <numbers>
#include <random>

using namespace coverfit;

namespace {

Vec v4(double a, double b, double c, double d) { return Vec(Eigen::Vector4d(a, b, c, d)); }

std::vector<Vec> axisdiag_normals() {
  return {v4(1, 0, 0, 0), v4(0, 1, 0, 0), v4(0, 0, 1, 0), v4(0, 0, 0, 1),
          v4(1, 1, 1, 1) / 2, v4(1, 1, -1, -1) / 2, v4(1, -1, 1, -1) / 2};
}

}  // namespace

TEST(MakePolytope, AxisDiagonalFourteen) {
  const SymmetricPolytope p = make_polytope(4, axisdiag_normals());
  EXPECT_EQ(p.strips(), 7);
  EXPECT_EQ(p.facets(), 14);
  // Direct check: unit norms and a spanning 4-subset.
  Mat rows(7, 4);
  for (int i = 0; i < 7; ++i) {
    EXPECT_NEAR(p.strip_normals()[i].norm(), 1.0, 1e-12);
    rows.row(i) = p.strip_normals()[i].transpose();
  }
  EXPECT_NE(oracle::determinant(rows.topRows(4)), 0.0);
  EXPECT_FALSE(p.beyond_theorem());
}

TEST(MakePolytope, RegularHexagon) {
  std::vector<Vec> normals;
  for (int deg : {0, 60, 120}) {
    const double a = deg * std::numbers::pi / 180.0;
    normals.push_back(Vec(Eigen::Vector2d(std::cos(a), std::sin(a))));
  }
  const SymmetricPolytope p = make_polytope(2, normals);
  EXPECT_EQ(p.facets(), 6);
  EXPECT_FALSE(p.beyond_theorem());
}

TEST(MakePolytope, RankDeficientIsUnbounded) {
  try {
    make_polytope(4, {v4(1, 0, 0, 0), v4(0, 1, 0, 0), v4(0, 0, 1, 0)});
    FAIL() << "expected an error";
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("unbounded polytope"), std::string::npos);
  }
  try {
    make_polytope(4, {v4(1, 0, 0, 0), v4(0, 1, 0, 0), v4(0, 0, 1, 0), v4(1, 1, 0, 0)});
    FAIL() << "expected an error";
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("unbounded polytope"), std::string::npos);
  }
}

TEST(MakePolytope, RejectsDuplicateAndAntipodal) {
  EXPECT_THROW(make_polytope(2, {Vec(Eigen::Vector2d(1, 0)), Vec(Eigen::Vector2d(0, 1)), Vec(Eigen::Vector2d(2, 0))}),
               InputError);
  EXPECT_THROW(make_polytope(2, {Vec(Eigen::Vector2d(1, 0)), Vec(Eigen::Vector2d(0, 1)), Vec(Eigen::Vector2d(-1, 0))}),
               InputError);
  EXPECT_THROW(make_polytope(2, {Vec(Eigen::Vector2d(1, 0)), Vec(Eigen::Vector2d(0, 0))}), InputError);
}

TEST(MakePolytope, CanonicalOrientationAndIdempotence) {
  const SymmetricPolytope p = make_polytope(3, {Vec(Eigen::Vector3d(-2, 1, 0)), Vec(Eigen::Vector3d(0, -1, 0)),
                                                Vec(Eigen::Vector3d(0, 0, -3)), Vec(Eigen::Vector3d(1, 1, 1))});
  for (const auto& u : p.strip_normals()) {
    for (Eigen::Index i = 0; i < u.size(); ++i) {
      if (std::abs(u(i)) > 1e-12) {
        EXPECT_GT(u(i), 0.0);
        break;
      }
    }
  }
  const SymmetricPolytope again = make_polytope(3, p.strip_normals());
  ASSERT_EQ(again.strips(), p.strips());
  for (int i = 0; i < p.strips(); ++i) EXPECT_EQ(again.strip_normals()[i], p.strip_normals()[i]);
  EXPECT_EQ(again.frame().indices, p.frame().indices);
}

TEST(Presets, CountsAndFlags) {
  EXPECT_EQ(preset("hexagon2d").strips(), 3);
  EXPECT_EQ(preset("hexagon2d").facets(), 6);
  EXPECT_EQ(preset("rhombic12_3d").facets(), 12);
  EXPECT_FALSE(preset("rhombic12_3d").beyond_theorem());
  const SymmetricPolytope p14 = preset("axisdiag14_4d");
  EXPECT_EQ(p14.strips(), 7);
  EXPECT_EQ(p14.facets(), 14);
  EXPECT_FALSE(p14.beyond_theorem());
  const SymmetricPolytope p16 = preset("cross16_4d");
  EXPECT_EQ(p16.facets(), 16);
  EXPECT_TRUE(p16.beyond_theorem());
  EXPECT_THROW(preset("dodecagon"), InputError);
}

TEST(Presets, EveryFacetTangentToHalfBall) {
  for (const char* name : preset_names()) {
    for (const auto& w : facet_normals(preset(name))) {
      // Facet plane {y : y.w = 1/2}; its distance from the origin is 1/2 / |w|.
      EXPECT_NEAR(SymmetricPolytope::kFacetOffset / w.norm(), 0.5, 1e-12) << name;
    }
  }
}

TEST(FacetNormals, CountsAndUnitLength) {
  EXPECT_EQ(facet_normals(preset("hexagon2d")).size(), 6u);
  const auto normals = facet_normals(preset("axisdiag14_4d"));
  EXPECT_EQ(normals.size(), 14u);
  for (const auto& v : normals) EXPECT_NEAR(v.norm(), 1.0, 1e-12);
}

TEST(ReferenceFrame, AxisDiagonalPicksAxes) {
  // Oracle: Laplace determinants of all 35 subsets.
  const auto normals = preset("axisdiag14_4d").strip_normals();
  std::vector<int> best;
  double best_det = -1.0;
  for (const auto& s : oracle::subsets(7, 4)) {
    Mat m(4, 4);
    for (int r = 0; r < 4; ++r) m.row(r) = normals[s[r]].transpose();
    const double d = std::abs(oracle::determinant(m));
    if (d > best_det + 1e-12) {
      best_det = d;
      best = s;
    }
  }
  EXPECT_EQ(oracle::subsets(7, 4).size(), 35u);
  EXPECT_EQ(best, (std::vector<int>{0, 1, 2, 3}));
  EXPECT_NEAR(best_det, 1.0, 1e-15);

  const ReferenceFrame frame = reference_frame(preset("axisdiag14_4d"));
  EXPECT_EQ(frame.indices, (std::vector<int>{0, 1, 2, 3}));
  EXPECT_NEAR(frame.det_abs, 1.0, 1e-15);
}

TEST(ReferenceFrame, HexagonTieBreaksLexicographically) {
  const auto normals = preset("hexagon2d").strip_normals();
  for (const auto& s : oracle::subsets(3, 2)) {
    Mat m(2, 2);
    m.row(0) = normals[s[0]].transpose();
    m.row(1) = normals[s[1]].transpose();
    EXPECT_NEAR(std::abs(oracle::determinant(m)), std::sin(std::numbers::pi / 3), 1e-15);
  }
  const ReferenceFrame frame = reference_frame(preset("hexagon2d"));
  EXPECT_EQ(frame.indices, (std::vector<int>{0, 1}));
  EXPECT_NEAR(frame.det_abs, std::sin(std::numbers::pi / 3), 1e-15);
}

TEST(ReferenceFrame, OrthonormalLeadingNormals) {
  const SymmetricPolytope p = make_polytope(3, {Vec(Eigen::Vector3d(1, 0, 0)), Vec(Eigen::Vector3d(0, 1, 0)),
                                                Vec(Eigen::Vector3d(0, 0, 1)), Vec(Eigen::Vector3d(1, 1, 1))});
  EXPECT_NEAR(p.frame().det_abs, 1.0, 1e-15);
  EXPECT_EQ(p.frame().indices, (std::vector<int>{0, 1, 2}));
}

TEST(ReferenceFrame, InvariantUnderRotation) {
  std::mt19937_64 rng(31);
  for (const char* name : preset_names()) {
    const SymmetricPolytope p = preset(name);
    for (int trial = 0; trial < 100; ++trial) {
      const Rotation tau = random_rotation(p.dim(), rng);
      std::vector<Vec> rotated;
      for (const auto& u : p.strip_normals()) rotated.push_back(tau.apply(u));
      EXPECT_EQ(reference_frame(p.dim(), rotated).indices, p.frame().indices) << name;
    }
  }
}

#pragma once

#include "coverfit/common.hpp"

#include <Eigen/Geometry>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <numbers>
#include <random>

namespace coverfit {

// Unit quaternions (left, right) acting on R^4 = H by v -> left * v * conj(right).
// (left, right) and (-left, -right) give the same rotation.
struct QuaternionPair {
  Eigen::Quaterniond left;
  Eigen::Quaterniond right;
};

namespace detail {

inline Eigen::Quaterniond as_quaternion(const Eigen::Vector4d& v) {
  return Eigen::Quaterniond(v(0), v(1), v(2), v(3));
}

inline Eigen::Vector4d as_vector(const Eigen::Quaterniond& q) {
  return Eigen::Vector4d(q.w(), q.x(), q.y(), q.z());
}

inline Eigen::Matrix4d pair_matrix(const Eigen::Quaterniond& left, const Eigen::Quaterniond& right) {
  Eigen::Matrix4d m;
  const Eigen::Quaterniond right_conj = right.conjugate();
  for (int c = 0; c < 4; ++c) {
    Eigen::Vector4d e = Eigen::Vector4d::Zero();
    e(c) = 1.0;
    m.col(c) = as_vector(left * as_quaternion(e) * right_conj);
  }
  return m;
}

inline double orthogonality_error(const Mat& m) {
  const Mat defect = m.transpose() * m - Mat::Identity(m.rows(), m.cols());
  return defect.cwiseAbs().maxCoeff();
}

// Nearest orthogonal matrix (polar factor).
inline Mat polar_correct(const Mat& m) {
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().transpose();
}

}  // namespace detail

inline int chart_dim(int dim) { return dim * (dim - 1) / 2; }

// Antisymmetric matrix from coordinates in (i, j) lexicographic order, i < j,
// with generator E_ji - E_ij so that in 2D the chart angle is counter-clockwise.
inline Mat skew(int dim, const Vec& a) {
  require_dim(a.size(), chart_dim(dim), "skew");
  Mat s = Mat::Zero(dim, dim);
  int k = 0;
  for (int i = 0; i < dim; ++i) {
    for (int j = i + 1; j < dim; ++j, ++k) {
      s(i, j) = -a(k);
      s(j, i) = a(k);
    }
  }
  return s;
}

class Rotation {
 public:
  static constexpr double kOrthoTol = 1e-12;
  static constexpr double kDriftTol = 1e-13;

  static Rotation identity(int dim) {
    if (!is_supported_dim(dim)) throw InputError("rotation: dim must be 2, 3 or 4");
    return Rotation(Mat::Identity(dim, dim));
  }

  // Accepts a matrix that is orthogonal with det +1 up to `tol`; small drift is
  // polar-corrected away.
  static Rotation from_matrix(const Mat& m, double tol = 1e-9) {
    if (m.rows() != m.cols() || !is_supported_dim(static_cast<int>(m.rows()))) {
      throw InputError("rotation: expected a square 2x2, 3x3 or 4x4 matrix");
    }
    if (!m.allFinite() || detail::orthogonality_error(m) > tol || std::abs(m.determinant() - 1.0) > tol) {
      throw InputError("rotation: matrix is not in SO(n)");
    }
    return Rotation(tidy(m));
  }

  static Rotation from_angle(double theta) {
    Mat m(2, 2);
    const double c = std::cos(theta), s = std::sin(theta);
    m << c, -s, s, c;
    return Rotation(m);
  }

  static Rotation from_quaternion(const Eigen::Quaterniond& q) {
    return Rotation(Mat(q.normalized().toRotationMatrix()));
  }

  static Rotation from_quaternion_pair(const Eigen::Quaterniond& left, const Eigen::Quaterniond& right) {
    return Rotation(tidy(Mat(detail::pair_matrix(left.normalized(), right.normalized()))));
  }

  int dim() const { return static_cast<int>(matrix_.rows()); }
  const Mat& matrix() const { return matrix_; }

  Vec apply(const Vec& v) const {
    require_dim(v.size(), dim(), "rotation apply");
    return matrix_ * v;
  }
  Vec apply_inverse(const Vec& v) const {
    require_dim(v.size(), dim(), "rotation apply_inverse");
    return matrix_.transpose() * v;
  }

  Rotation inverse() const { return Rotation(matrix_.transpose()); }

  Rotation operator*(const Rotation& rhs) const {
    require_dim(rhs.dim(), dim(), "rotation compose");
    return Rotation(tidy(matrix_ * rhs.matrix_));
  }

  double orthogonality_error() const { return detail::orthogonality_error(matrix_); }

  double angle() const {
    if (dim() != 2) throw InputError("rotation angle: dim 2 only");
    return std::atan2(matrix_(1, 0), matrix_(0, 0));
  }

  Eigen::Quaterniond quaternion() const {
    if (dim() != 3) throw InputError("rotation quaternion: dim 3 only");
    const Eigen::Matrix3d m3 = matrix_;
    Eigen::Quaterniond q(m3);
    q.normalize();
    if (q.w() < 0) q.coeffs() *= -1.0;
    return q;
  }

  // The 16 maps e_a v conj(e_b) are mutually orthogonal with squared Frobenius
  // norm 4, so projecting R on them recovers the rank-one matrix left * right^T.
  QuaternionPair quaternion_pair() const {
    if (dim() != 4) throw InputError("rotation quaternion_pair: dim 4 only");
    Eigen::Matrix4d outer;
    for (int a = 0; a < 4; ++a) {
      for (int b = 0; b < 4; ++b) {
        Eigen::Vector4d ea = Eigen::Vector4d::Zero(), eb = Eigen::Vector4d::Zero();
        ea(a) = 1.0;
        eb(b) = 1.0;
        const Eigen::Matrix4d basis = detail::pair_matrix(detail::as_quaternion(ea), detail::as_quaternion(eb));
        outer(a, b) = (matrix_.array() * basis.array()).sum() / 4.0;
      }
    }
    Eigen::Index row = 0;
    outer.rowwise().norm().maxCoeff(&row);
    Eigen::Vector4d right = outer.row(row).transpose().normalized();
    Eigen::Vector4d left = (outer * right).normalized();
    Eigen::Index lead = 0;
    left.cwiseAbs().maxCoeff(&lead);
    if (left(lead) < 0) {
      left = -left;
      right = -right;
    }
    return {detail::as_quaternion(left), detail::as_quaternion(right)};
  }

  friend bool operator==(const Rotation& a, const Rotation& b) { return a.matrix_ == b.matrix_; }

 private:
  explicit Rotation(Mat m) : matrix_(std::move(m)) {}

  static Mat tidy(const Mat& m) {
    return detail::orthogonality_error(m) > kDriftTol ? detail::polar_correct(m) : m;
  }

  friend Rotation negate(const Rotation& tau);
  friend Rotation exp_chart(const Rotation& tau, const Vec& a);

  Mat matrix_;
};

// The antipodal involution tau -> -tau; stays in SO(n) only for even n.
inline Rotation negate(const Rotation& tau) {
  if (tau.dim() % 2 != 0) throw InputError("negate: -tau leaves SO(n) for odd n");
  return Rotation(-tau.matrix_);
}

// tau * exp(skew(a)).
inline Rotation exp_chart(const Rotation& tau, const Vec& a) {
  const int n = tau.dim();
  require_dim(a.size(), chart_dim(n), "exp_chart");
  if (a.isZero(0.0)) return tau;
  Mat step;
  if (n == 2) {
    const double c = std::cos(a(0)), s = std::sin(a(0));
    step.resize(2, 2);
    step << c, -s, s, c;
  } else if (n == 3) {
    // skew(a) is the cross-product matrix of w = (a2, -a1, a0).
    const Eigen::Vector3d w(a(2), -a(1), a(0));
    const double angle = w.norm();
    step = Mat(Eigen::AngleAxisd(angle, w / angle).toRotationMatrix());
  } else {
    step = skew(n, a).exp();
  }
  return Rotation(Rotation::tidy(tau.matrix_ * step));
}

// Haar-uniform sample. Dims 3 and 4 go through normalized Gaussian quaternions;
// the double cover S^3 x S^3 -> SO(4) pushes the product measure to Haar.
template <class Rng>
Rotation random_rotation(int dim, Rng& rng) {
  if (!is_supported_dim(dim)) throw InputError("random_rotation: dim must be 2, 3 or 4");
  if (dim == 2) {
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    return Rotation::from_angle(angle(rng));
  }
  std::normal_distribution<double> normal;
  auto draw = [&] {
    Eigen::Vector4d v;
    do {
      for (int i = 0; i < 4; ++i) v(i) = normal(rng);
    } while (v.norm() < 1e-8);
    return detail::as_quaternion(v.normalized());
  };
  if (dim == 3) return Rotation::from_quaternion(draw());
  const Eigen::Quaterniond left = draw();
  const Eigen::Quaterniond right = draw();
  return Rotation::from_quaternion_pair(left, right);
}

}  // namespace coverfit

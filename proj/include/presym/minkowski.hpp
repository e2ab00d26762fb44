#pragma once

#include <Eigen/Dense>

#include <stdexcept>

namespace presym {

// Conventions used throughout the library:
//   * four-vector index order (x, y, z, t), so the time component sits last;
//   * metric signature (-, -, -, +), i.e. g = diag(-1, -1, -1, +1);
//   * units with c = 1;
//   * the orientation of the volume form is fixed so that the Hodge dual of a
//     purely electric skew map [[0, E], [E^T, 0]] equals [[-j(E), 0], [0, 0]].
// With that orientation the dual acts on the (electric, magnetic) block data
// of a skew endomorphism as (E, B) -> (B, -E), and applying it twice gives -1.

using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;
using Vec12 = Eigen::Matrix<double, 12, 1>;
using Mat12 = Eigen::Matrix<double, 12, 12>;

/// The metric tensor g = diag(-1, -1, -1, +1) as a matrix.
const Mat4& metric();

/// Minkowski inner product <a, b> = a_t b_t - a_x b_x - a_y b_y - a_z b_z.
inline double mink_inner(const Vec4& a, const Vec4& b) {
  return a(3) * b(3) - a.head<3>().dot(b.head<3>());
}

/// Squared Minkowski norm of a four-vector.
inline double mink_norm2(const Vec4& a) { return mink_inner(a, a); }

/// Metric transpose of a vector: bar(v) = v^T g, a row covector. Contracting
/// bar(v) with w gives mink_inner(v, w).
inline Eigen::RowVector4d bar(const Vec4& v) {
  return v.transpose() * metric();
}

/// Metric transpose of an endomorphism: bar(A) = g^-1 A^T g (g is its own
/// inverse here). Satisfies mink_inner(A x, y) = mink_inner(x, bar(A) y).
inline Mat4 bar(const Mat4& A) { return metric() * A.transpose() * metric(); }

/// Max-norm of bar(A) + A; vanishes exactly when A is skew with respect to
/// the metric, i.e. when g A is an antisymmetric matrix.
double skewness_residual(const Mat4& A);

/// 3x3 cross-product matrix: cross_matrix(w) * r == w.cross(r).
Mat3 cross_matrix(const Vec3& w);

/// Inverse of cross_matrix; the input is antisymmetrized first, so this reads
/// off the axial vector of the antisymmetric part of A.
Vec3 axial_vector(const Mat3& A);

/// A linear map A with bar(A) = -A. Such maps decompose into an electric
/// vector E and a magnetic vector B via the block form
///     A = [[ j(B), E ],
///          [ E^T , 0 ]]
/// where j is the cross-product matrix. Construction validates skewness.
class SkewEndomorphism {
 public:
  SkewEndomorphism() : mat_(Mat4::Zero()) {}

  /// Validating constructor; throws std::invalid_argument if bar(A) != -A
  /// beyond the tolerance.
  explicit SkewEndomorphism(const Mat4& A, double tol = 1e-12);

  /// Assemble from electric and magnetic block data.
  static SkewEndomorphism from_electric_magnetic(const Vec3& E, const Vec3& B);

  const Mat4& matrix() const { return mat_; }
  Vec4 operator*(const Vec4& v) const { return mat_ * v; }

  Vec3 electric() const { return mat_.block<3, 1>(0, 3); }
  Vec3 magnetic() const {
    return Vec3(mat_(2, 1), mat_(0, 2), mat_(1, 0));
  }

  SkewEndomorphism scaled(double factor) const {
    SkewEndomorphism out;
    out.mat_ = factor * mat_;
    return out;
  }

  /// Hodge dual: swaps the block data as (E, B) -> (B, -E). Applying it twice
  /// gives -identity on skew maps.
  SkewEndomorphism dual() const {
    return from_electric_magnetic(magnetic(), -electric());
  }

 private:
  Mat4 mat_;
};

inline SkewEndomorphism hodge_star(const SkewEndomorphism& F) {
  return F.dual();
}

/// Relativistic spin tensor of a pair (I, J) with I timelike unit, J
/// spacelike unit, and mink_inner(I, J) = 0:
///     Omega = dual(I * bar(J) - J * bar(I)).
/// It annihilates both I and J and satisfies Omega^3 = -Omega.
/// Throws std::invalid_argument naming the violated constraint if the inputs
/// fail validation beyond `tol`.
SkewEndomorphism spin_tensor(const Vec4& I, const Vec4& J, double tol = 1e-9);

/// Same formula without any input validation. Needed when evaluating at
/// points that sit slightly off the constraint set, e.g. finite-difference
/// stencils.
SkewEndomorphism spin_tensor_ambient(const Vec4& I, const Vec4& J);

/// Scalar spin-field coupling alpha = bar(I) * dual(F) * J
/// = -(1/2) trace(spin_tensor(I, J) * F).
double coupling_alpha(const Vec4& I, const Vec4& J, const SkewEndomorphism& F,
                      double tol = 1e-9);

/// Unvalidated variant of coupling_alpha (see spin_tensor_ambient).
inline double coupling_alpha_ambient(const Vec4& I, const Vec4& J,
                                     const SkewEndomorphism& F) {
  return mink_inner(I, F.dual() * J);
}

/// Laboratory-frame data for a spinning particle: spatial position r at lab
/// time t, velocity v with |v| < 1, and a unit spin direction u.
struct LabFrameState {
  Vec3 r = Vec3::Zero();
  double t = 0.0;
  Vec3 v = Vec3::Zero();
  Vec3 u = Vec3::UnitZ();

  double gamma() const { return 1.0 / std::sqrt(1.0 - v.squaredNorm()); }
  double gamma_tilde() const {
    const double uv = u.dot(v);
    return 1.0 / std::sqrt(1.0 - uv * uv);
  }
};

/// Boost lab data into the covariant pair
///   I = gamma (v, 1),   J = gamma_tilde (u, <u, v>)
/// which satisfies mink_norm2(I) = 1, mink_norm2(J) = -1, mink_inner(I,J)=0.
/// Throws std::invalid_argument for superluminal v ("superluminal") or a spin
/// direction that is not a unit vector.
struct CovariantPair {
  Vec4 X;
  Vec4 I;
  Vec4 J;
};
CovariantPair lab_compose(const LabFrameState& state);

/// Inverse of lab_compose with respect to the lab observer e_t. Throws
/// std::invalid_argument if I is not timelike future-pointing
/// ("not future-pointing") or the pair fails the unit/orthogonality
/// constraints.
LabFrameState lab_decompose(const Vec4& X, const Vec4& I, const Vec4& J,
                            double tol = 1e-9);

}  // namespace presym

#include "presym/minkowski.hpp"

#include <cmath>
#include <sstream>

namespace presym {

const Mat4& metric() {
  static const Mat4 g = [] {
    Mat4 m = Mat4::Zero();
    m.diagonal() << -1.0, -1.0, -1.0, 1.0;
    return m;
  }();
  return g;
}

double skewness_residual(const Mat4& A) {
  return (bar(A) + A).cwiseAbs().maxCoeff();
}

Mat3 cross_matrix(const Vec3& w) {
  Mat3 m;
  m << 0.0, -w(2), w(1),
       w(2), 0.0, -w(0),
       -w(1), w(0), 0.0;
  return m;
}

Vec3 axial_vector(const Mat3& A) {
  const Mat3 S = 0.5 * (A - A.transpose());
  return Vec3(S(2, 1), S(0, 2), S(1, 0));
}

SkewEndomorphism::SkewEndomorphism(const Mat4& A, double tol) : mat_(A) {
  const double res = skewness_residual(A);
  if (!(res <= tol)) {
    std::ostringstream msg;
    msg << "matrix is not skew with respect to the metric (residual " << res
        << ", tolerance " << tol << ")";
    throw std::invalid_argument(msg.str());
  }
}

SkewEndomorphism SkewEndomorphism::from_electric_magnetic(const Vec3& E,
                                                          const Vec3& B) {
  SkewEndomorphism out;
  out.mat_.setZero();
  out.mat_.block<3, 3>(0, 0) = cross_matrix(B);
  out.mat_.block<3, 1>(0, 3) = E;
  out.mat_.block<1, 3>(3, 0) = E.transpose();
  return out;
}

SkewEndomorphism spin_tensor_ambient(const Vec4& I, const Vec4& J) {
  const Mat4 K = I * bar(J) - J * bar(I);
  // K is skew by construction; read off its block data directly and dualize.
  const Vec3 E(K(0, 3), K(1, 3), K(2, 3));
  const Vec3 B(K(2, 1), K(0, 2), K(1, 0));
  return SkewEndomorphism::from_electric_magnetic(B, -E);
}

namespace {

void validate_pair(const Vec4& I, const Vec4& J, double tol) {
  if (std::abs(mink_norm2(I) - 1.0) > tol) {
    throw std::invalid_argument(
        "velocity leg is not a unit timelike vector (mink_norm2(I) != 1)");
  }
  if (std::abs(mink_norm2(J) + 1.0) > tol) {
    throw std::invalid_argument(
        "spin leg is not a unit spacelike vector (mink_norm2(J) != -1)");
  }
  if (std::abs(mink_inner(I, J)) > tol) {
    throw std::invalid_argument(
        "velocity and spin legs are not orthogonal (mink_inner(I, J) != 0)");
  }
}

}  // namespace

SkewEndomorphism spin_tensor(const Vec4& I, const Vec4& J, double tol) {
  validate_pair(I, J, tol);
  return spin_tensor_ambient(I, J);
}

double coupling_alpha(const Vec4& I, const Vec4& J, const SkewEndomorphism& F,
                      double tol) {
  validate_pair(I, J, tol);
  return coupling_alpha_ambient(I, J, F);
}

CovariantPair lab_compose(const LabFrameState& state) {
  if (!(state.v.norm() < 1.0)) {
    throw std::invalid_argument("superluminal velocity (|v| >= 1)");
  }
  const double unorm = state.u.norm();
  if (std::abs(unorm - 1.0) > 1e-9) {
    throw std::invalid_argument("spin direction u must be a unit vector");
  }
  const Vec3 u = state.u / unorm;
  const double gamma = state.gamma();
  const double uv = u.dot(state.v);
  const double gamma_tilde = 1.0 / std::sqrt(1.0 - uv * uv);

  CovariantPair out;
  out.X << state.r, state.t;
  out.I << gamma * state.v, gamma;
  out.J << gamma_tilde * u, gamma_tilde * uv;
  return out;
}

LabFrameState lab_decompose(const Vec4& X, const Vec4& I, const Vec4& J,
                            double tol) {
  validate_pair(I, J, tol);
  if (!(I(3) > 0.0)) {
    throw std::invalid_argument("velocity leg is not future-pointing");
  }
  LabFrameState state;
  state.r = X.head<3>();
  state.t = X(3);
  state.v = I.head<3>() / I(3);
  const double jnorm = J.head<3>().norm();
  if (jnorm <= tol) {
    throw std::invalid_argument("degenerate spin direction");
  }
  state.u = J.head<3>() / jnorm;
  return state;
}

}  // namespace presym

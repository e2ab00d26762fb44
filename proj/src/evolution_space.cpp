#include "presym/evolution_space.hpp"

#include <cmath>
#include <sstream>

namespace presym {

Vec3 EvolutionPoint::constraint_values() const {
  return Vec3(mink_norm2(I) - 1.0, mink_norm2(J) + 1.0, mink_inner(I, J));
}

double EvolutionPoint::constraint_residual() const {
  return constraint_values().cwiseAbs().maxCoeff();
}

void EvolutionPoint::validate(double tol) const {
  const Vec3 c = constraint_values();
  if (std::abs(c(0)) > tol) {
    std::ostringstream msg;
    msg << "velocity leg is not a unit timelike vector (residual " << c(0)
        << ")";
    throw std::invalid_argument(msg.str());
  }
  if (std::abs(c(1)) > tol) {
    std::ostringstream msg;
    msg << "spin leg is not a unit spacelike vector (residual " << c(1) << ")";
    throw std::invalid_argument(msg.str());
  }
  if (std::abs(c(2)) > tol) {
    std::ostringstream msg;
    msg << "velocity and spin legs are not orthogonal (residual " << c(2)
        << ")";
    throw std::invalid_argument(msg.str());
  }
  if (!(I(3) > 0.0)) {
    throw std::invalid_argument("velocity leg is not future-pointing");
  }
}

EvolutionPoint EvolutionPoint::from_lab(const LabFrameState& state) {
  const CovariantPair pair = lab_compose(state);
  return EvolutionPoint{pair.X, pair.I, pair.J};
}

LabFrameState EvolutionPoint::to_lab() const {
  return lab_decompose(X, I, J);
}

EvolutionPoint project_to_V(const EvolutionPoint& p) {
  const double i2 = mink_norm2(p.I);
  if (!(i2 > 0.0) || !(p.I(3) > 0.0)) {
    throw std::runtime_error(
        "state left the timelike cone (velocity leg is no longer timelike "
        "future-pointing)");
  }
  EvolutionPoint out;
  out.X = p.X;
  out.I = p.I / std::sqrt(i2);
  Vec4 j = p.J - mink_inner(out.I, p.J) * out.I;
  const double j2 = mink_norm2(j);
  if (!(j2 < 0.0)) {
    throw std::runtime_error(
        "degenerate spin direction (spin leg is no longer spacelike)");
  }
  out.J = j / std::sqrt(-j2);
  return out;
}

Vec3 tangency_values(const EvolutionPoint& p, const AmbientTangent& t) {
  return Vec3(mink_inner(p.I, t.dI), mink_inner(p.J, t.dJ),
              mink_inner(p.J, t.dI) + mink_inner(p.I, t.dJ));
}

Eigen::Matrix<double, 12, 3> constraint_gradients(const EvolutionPoint& p) {
  const Vec4 gI = metric() * p.I;
  const Vec4 gJ = metric() * p.J;
  Eigen::Matrix<double, 12, 3> C = Eigen::Matrix<double, 12, 3>::Zero();
  C.block<4, 1>(4, 0) = -2.0 * gI;
  C.block<4, 1>(8, 1) = 2.0 * gJ;
  C.block<4, 1>(4, 2) = gJ;
  C.block<4, 1>(8, 2) = gI;
  return C;
}

Eigen::Matrix<double, 12, 9> tangent_basis(const EvolutionPoint& p) {
  const Eigen::Matrix<double, 3, 12> Ct =
      constraint_gradients(p).transpose();
  Eigen::JacobiSVD<Eigen::Matrix<double, 3, 12>> svd(
      Ct, Eigen::ComputeFullV);
  // The last 9 right singular vectors span the null space of Ct, i.e. the
  // tangent space of V at p.
  return svd.matrixV().rightCols<9>();
}

}  // namespace presym

#pragma once

#include "presym/minkowski.hpp"

namespace presym {

/// A point of the evolution space V: an event X together with a unit
/// timelike velocity leg I and a unit spacelike spin leg J orthogonal to it,
///   mink_norm2(I) = 1,   mink_norm2(J) = -1,   mink_inner(I, J) = 0,
/// with I future-pointing. The struct itself is a plain aggregate; formulas
/// that require the constraints call validate() explicitly, because several
/// numerical paths (finite-difference stencils, pre-projection integrator
/// states) must evaluate slightly off the constraint set.
struct EvolutionPoint {
  Vec4 X = Vec4::Zero();
  Vec4 I = Vec4::UnitW();  // (0, 0, 0, 1): at rest
  Vec4 J = Vec4::UnitX();  // unit spin along x

  /// The three constraint residuals
  ///   c1 = mink_norm2(I) - 1, c2 = mink_norm2(J) + 1, c3 = mink_inner(I, J).
  Vec3 constraint_values() const;

  /// Max-norm of constraint_values().
  double constraint_residual() const;

  /// Throws std::invalid_argument naming the violated constraint when the
  /// residual exceeds tol or I is not future-pointing.
  void validate(double tol = 1e-9) const;

  static EvolutionPoint from_lab(const LabFrameState& state);
  LabFrameState to_lab() const;
};

/// Re-impose the constraints on a slightly off-manifold point:
///   I <- I / sqrt(mink_norm2(I)),
///   J <- J - mink_inner(I, J) I, then J <- J / sqrt(-mink_norm2(J)).
/// Throws std::runtime_error if I has left the timelike future cone or the
/// projected J degenerates.
EvolutionPoint project_to_V(const EvolutionPoint& p);

/// An ambient tangent vector at a point of V: displacements of (X, I, J).
struct AmbientTangent {
  Vec4 dX = Vec4::Zero();
  Vec4 dI = Vec4::Zero();
  Vec4 dJ = Vec4::Zero();

  Vec12 stacked() const {
    Vec12 v;
    v << dX, dI, dJ;
    return v;
  }
  static AmbientTangent from_stacked(const Vec12& v) {
    return AmbientTangent{v.segment<4>(0), v.segment<4>(4), v.segment<4>(8)};
  }

  AmbientTangent operator+(const AmbientTangent& o) const {
    return AmbientTangent{dX + o.dX, dI + o.dI, dJ + o.dJ};
  }
  AmbientTangent operator*(double c) const {
    return AmbientTangent{c * dX, c * dI, c * dJ};
  }
};

inline AmbientTangent operator*(double c, const AmbientTangent& t) {
  return t * c;
}

/// Displace a point by an ambient tangent (lands off V at second order).
inline EvolutionPoint displace(const EvolutionPoint& p,
                               const AmbientTangent& t, double eps = 1.0) {
  return EvolutionPoint{p.X + eps * t.dX, p.I + eps * t.dI, p.J + eps * t.dJ};
}

/// Residuals of the linearized constraints at p applied to t:
///   (mink_inner(I, t.dI), mink_inner(J, t.dJ),
///    mink_inner(J, t.dI) + mink_inner(I, t.dJ)).
Vec3 tangency_values(const EvolutionPoint& p, const AmbientTangent& t);

/// The 12x3 matrix whose columns span the annihilator of the tangent space
/// of V at p in stacked (X, I, J) coordinates:
///   (0, -2 g I, 0),  (0, 0, 2 g J),  (0, g J, g I).
/// A stacked vector v is tangent to V exactly when
/// constraint_gradients(p).transpose() * v = 0. The column normalization and
/// signs fix the scale in which the characteristic solver reports its
/// multipliers.
Eigen::Matrix<double, 12, 3> constraint_gradients(const EvolutionPoint& p);

/// Orthonormal basis (columns) of the 9-dimensional tangent space of V at p,
/// computed from the SVD of the constraint gradients. Deterministic for a
/// given point.
Eigen::Matrix<double, 12, 9> tangent_basis(const EvolutionPoint& p);

}  // namespace presym

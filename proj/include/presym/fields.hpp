#pragma once

#include <optional>
#include <string>
#include <vector>

#include "presym/minkowski.hpp"

namespace presym {

/// Radial profile of a static central electric field. The scalar potential
/// phi(r) determines the field through E = -phi'(r) r_hat, so for the
/// attractive-coulomb sign conventions see the factory functions below.
enum class RadialProfileKind { coulomb, harmonic, tabulated };

/// Static electromagnetic field models on Minkowski space. Supported kinds:
///   * uniform: constant skew map built from electric/magnetic block data,
///     optionally with a gauge origin so that a scalar potential exists for
///     the electric part;
///   * central electric: E(x) = -phi'(r) r_hat around the spatial origin,
///     B = 0, with phi given by a radial profile.
/// All models are static (time independent), so field_at depends only on the
/// spatial part of the event.
class FieldModel {
 public:
  /// Identically zero field.
  static FieldModel none();

  /// Constant field with the given electric and magnetic block data. Without
  /// a gauge origin, potential_at throws for nonzero E (the linear potential
  /// has no distinguished zero).
  static FieldModel uniform(const Vec3& E, const Vec3& B);
  static FieldModel uniform_with_origin(const Vec3& E, const Vec3& B,
                                        const Vec3& gauge_origin);

  /// phi(r) = kappa / r. For a charge q the interaction energy is
  /// -q phi, so q * kappa > 0 gives a bound (attractive) system.
  static FieldModel coulomb(double kappa, double r_min = 1e-6);

  /// phi(r) = kappa r^2 / 2. The radial force on a charge q is
  /// q E = -q kappa r r_hat, so q * kappa > 0 is restoring.
  static FieldModel harmonic(double kappa);

  /// Natural cubic spline through (r_i, phi_i); r strictly increasing.
  /// Evaluation outside [r_front, r_back] throws.
  static FieldModel tabulated(const std::vector<double>& r,
                              const std::vector<double>& phi);

  /// Reads a two-column whitespace-separated table "r phi" (comment lines
  /// start with '#').
  static FieldModel tabulated_from_file(const std::string& path);

  /// The skew field map F at an event. Throws std::domain_error with a
  /// "field singularity" message when evaluated inside r_min of the center
  /// of a central field.
  SkewEndomorphism field_at(const Vec4& X) const;

  /// Directional derivative of field_at along the four-vector dir, evaluated
  /// analytically (spline profiles use the exact spline derivatives).
  SkewEndomorphism grad_field_at(const Vec4& X, const Vec4& dir) const;

  /// Scalar potential phi with E = -grad phi. Central fields return the
  /// radial profile; uniform fields need a gauge origin
  /// (phi = -<E, r - origin>) and throw "no global static potential"
  /// otherwise. The zero field returns 0.
  double potential_at(const Vec4& X) const;

  /// d phi / dr at the event's radius (central fields only; throws
  /// std::logic_error for other kinds).
  double radial_profile_derivative(const Vec4& X) const;

  bool has_potential() const;
  bool is_uniform() const { return kind_ == Kind::uniform; }
  bool is_central() const { return kind_ == Kind::central; }
  bool is_zero() const;

  /// A copy with the field strength multiplied by `factor` (uniform block
  /// data, or the profile amplitude of a central field).
  FieldModel scaled(double factor) const;

  /// Finite-difference check of the homogeneous Maxwell equations: the max
  /// over index triples (a, b, c) of the cyclic sum
  ///   d_a omega_bc + d_b omega_ca + d_c omega_ab
  /// for the 2-form omega = g F, with central differences of step h.
  double maxwell_residual(const Vec4& X, double h = 1e-4) const;

 private:
  enum class Kind { zero, uniform, central };

  FieldModel() = default;

  // Profile value / first / second derivative at radius r.
  double phi(double r) const;
  double phi_prime(double r) const;
  double phi_second(double r) const;
  void check_radius(double r) const;

  Kind kind_ = Kind::zero;

  // uniform
  Vec3 E0_ = Vec3::Zero();
  Vec3 B0_ = Vec3::Zero();
  std::optional<Vec3> gauge_origin_;

  // central
  RadialProfileKind profile_ = RadialProfileKind::coulomb;
  double kappa_ = 0.0;
  double r_min_ = 1e-6;
  // natural cubic spline data (tabulated profile)
  std::vector<double> knots_r_;
  std::vector<double> knots_phi_;
  std::vector<double> knots_m2_;  // second derivatives at the knots
};

}  // namespace presym

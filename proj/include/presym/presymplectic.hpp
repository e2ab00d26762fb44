#pragma once

#include <optional>
#include <string>

#include "presym/evolution_space.hpp"
#include "presym/fields.hpp"

namespace presym {

/// Which Lagrange 2-form is placed on the evolution space.
///   * free_form: no electromagnetic coupling,
///       sigma = s (dI-part) - m <dI, dX> (antisymmetrized);
///   * souriau: minimal spin coupling with effective mass
///       M = m - (g/2)(q s / m) alpha and no field-gradient momentum terms;
///   * stora: two-parameter non-minimal coupling with
///       P = (m + k alpha) I + l dual(F) J and dP entering the form.
enum class ModelVariant { free_form, souriau, stora };

std::string to_string(ModelVariant v);

/// Physical constants of the particle model. The named presets fix (k, l):
///   free:    no field coupling (k = l = 0);
///   souriau: k_eff = -(g/2) q s / m, l_eff = 0 (applied internally);
///   stora:   k = -((g-1)/2) q s / m, l = -(1/2) q s / m;
///   custom:  caller-provided k and l.
struct ModelCoefficients {
  double m = 1.0;  ///< rest mass
  double s = 1.0;  ///< spin magnitude
  double q = 1.0;  ///< electric charge
  double g = 2.0;  ///< gyromagnetic ratio
  double k = 0.0;  ///< coefficient of alpha in the effective mass
  double l = 0.0;  ///< coefficient of dual(F) J in the momentum

  static ModelCoefficients free_particle(double m = 1.0);
  static ModelCoefficients souriau(double m, double s, double q, double g);
  static ModelCoefficients stora(double m, double s, double q, double g);
  static ModelCoefficients custom(double m, double s, double q, double g,
                                  double k, double l);

  /// Residual of the weak-field compatibility relation k + l = -(g/2) q s/m.
  double bmt_defect() const { return k + l + 0.5 * g * q * s / m; }
  bool bmt_compatible(double tol = 1e-12) const {
    return std::abs(bmt_defect()) <= tol;
  }
};

/// A Lagrange 2-form model: variant + coefficients + external field. The
/// free form ignores the field; souriau and stora require one (possibly the
/// zero field).
struct TwoFormModel {
  ModelVariant variant = ModelVariant::free_form;
  ModelCoefficients coeffs;
  FieldModel field = FieldModel::none();

  /// Effective (k, l) pair actually used by the 2-form: souriau maps to
  /// (-(g/2) q s / m, 0), stora/custom use the stored values, free uses 0.
  std::pair<double, double> effective_kl() const;
};

/// Linear momentum P = (m + k alpha) I + l dual(F) J with the variant's
/// effective coefficients. Throws std::runtime_error "momentum left the
/// timelike cone (field too strong)" if P fails to be timelike
/// future-pointing.
Vec4 momentum(const TwoFormModel& model, const EvolutionPoint& p);

/// The normalized momentum direction I* = P / sqrt(mink_norm2(P)) and the
/// spin tensor of the pair (I*, J). The pair (X, I*, J) satisfies the
/// evolution-space constraints exactly because mink_inner(J, P) = 0
/// identically.
struct StarredFrame {
  Vec4 I_star;
  SkewEndomorphism spin;  // spin tensor of (I*, J)
  double orthogonality_residual = 0.0;  // |mink_inner(J, I_star)|, diagnostic
};
StarredFrame starred_frame(const TwoFormModel& model, const EvolutionPoint& p);

/// Value of the Lagrange 2-form on two ambient tangents at p, evaluated from
/// the defining formula (scalar expression in dX, dI, dJ). No constraint
/// validation: the formula extends smoothly off V, which finite-difference
/// stencils rely on.
double sigma_eval(const TwoFormModel& model, const EvolutionPoint& p,
                  const AmbientTangent& t1, const AmbientTangent& t2);

/// The 12x12 matrix S with sigma(t1, t2) = t1.stacked()^T S t2.stacked() in
/// stacked (X, I, J) coordinates; assembled blockwise (independent of
/// sigma_eval, which the tests exploit as a cross-check). Antisymmetric by
/// construction.
Mat12 sigma_matrix(const TwoFormModel& model, const EvolutionPoint& p);

/// Rank of the 2-form restricted to the tangent space of V at p: singular
/// values of B^T S B (B an orthonormal tangent basis) above
/// rel_tol * sigma_max are counted. The generic value is 8, leaving the
/// one-dimensional characteristic (kernel) direction.
int rank_at(const TwoFormModel& model, const EvolutionPoint& p,
            double rel_tol = 1e-10);

/// Max over all coordinate triples (u, v, w) from an orthonormal tangent
/// basis of the finite-difference exterior derivative
///   d sigma(u, v, w) = d_u sigma(v, w) - d_v sigma(u, w) + d_w sigma(u, v)
/// with central differences of step h along straight ambient displacements.
/// Because pullback commutes with d, this measures closedness of the form
/// restricted to V. O(h^2) accurate.
double closedness_residual(const TwoFormModel& model, const EvolutionPoint& p,
                           double h = 1e-4);

/// A solved characteristic direction of the 2-form at a point of V.
struct KernelSolution {
  AmbientTangent delta;   ///< kernel direction, gauge-normalized
  double lambda = 0.0;    ///< multiplier of the velocity-normalization constraint
  double mu = 0.0;        ///< multiplier of the spin-normalization constraint
  double nu = 0.0;        ///< multiplier of the orthogonality constraint
  double sigma_min = 0.0;   ///< smallest singular value of the bordered system
  double sigma_min2 = 0.0;  ///< second smallest (rank margin)
  double residual = 0.0;    ///< sigma_min / sigma_max
  double gauge_factor = 0.0;  ///< mink_inner(I, delta.dX) before normalization
};

/// Solve for the kernel of the 2-form restricted to T_p V via the bordered
/// system
///   [ -S  C ] [ delta ]   [ 0 ]
///   [ C^T 0 ] [ mults ] = [ 0 ] ,
/// S = sigma_matrix, C = constraint_gradients. The one-dimensional null
/// space is extracted with a full SVD; the returned direction is normalized
/// to the affine gauge mink_inner(I, delta.dX) = 1 (unit rate of proper
/// time). Multipliers are reported in the scale in which the free model at
/// rest gives lambda = m, mu = nu = 0.
///
/// Throws std::runtime_error:
///   * "kernel not one-dimensional (rank degeneracy)" when the second
///     smallest singular value is within a factor 10 of the smallest;
///   * "lightlike characteristic direction, gauge fails" when
///     |mink_inner(I, delta.dX)| < 1e-8 at unit solution norm;
///   * "characteristic solve failed (no null direction)" when the smallest
///     singular value is not negligible against the largest.
KernelSolution kernel_direction(const TwoFormModel& model,
                                const EvolutionPoint& p);

}  // namespace presym

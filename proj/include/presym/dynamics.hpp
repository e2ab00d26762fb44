#pragma once

#include <limits>
#include <vector>

#include "presym/presymplectic.hpp"

namespace presym {

/// Which flow the integrator follows.
///   * kernel: the exact characteristic direction of the 2-form (SVD solve
///     per evaluation);
///   * linearized: the weak-field closed-form direction field that reduces
///     to the textbook spin-precession equations under P = m I, S = s J;
///   * bmt_reference: those textbook equations themselves, integrated in the
///     ambient variables (X, P, S).
enum class FlowKind { kernel, linearized, bmt_reference };

/// Parametrization gauge for the direction fields:
///   plain:   mink_inner(I, dX/dtau) = 1 (proper time of the velocity leg);
///   starred: mink_inner(I*, dX/dtau) = 1 (proper time of the momentum
///            direction).
/// The bmt_reference flow is parametrized by dX/dtau = P and ignores this.
enum class GaugeKind { plain, starred };

std::string to_string(FlowKind k);
std::string to_string(GaugeKind k);

/// Weak-field direction field. For the souriau variant this is the published
/// linearization in (X, I, J); for stora/custom it is the starred variant:
/// the velocity and spin equations are driven by the momentum direction I*,
/// and the I-equation carries a J-component that keeps the field exactly
/// tangent to V. Throws std::invalid_argument when the coefficients violate
/// the compatibility relation k + l = -(g/2) q s / m, without which the
/// linearized flow does not reproduce the spin-precession equations.
AmbientTangent linearized_rhs(const TwoFormModel& model,
                              const EvolutionPoint& p);

/// Debug variant of the weak-field direction field, written in the plain
/// velocity leg I instead of the momentum direction: the velocity is
///   dX = I - ((k + q s / m) / m) Omega F I,
/// which agrees with linearized_rhs up to O(F^2) after gauge alignment (and
/// exactly for the souriau preset, where the two parametrizations coincide).
/// Same compatibility requirement on (k, l).
AmbientTangent linearized_rhs_provisional(const TwoFormModel& model,
                                          const EvolutionPoint& p);

/// Right-hand side of the textbook spin-precession system in ambient
/// variables:
///   dX = P,  dP = -q F P,  dS = -q [ (g/2) F S + (1 - g/2) P
///                                    mink(P, F S) / mink(P, P) ].
struct BmtState {
  Vec4 X;
  Vec4 P;
  Vec4 S;
};
BmtState bmt_reference_rhs(const TwoFormModel& model, const BmtState& state);

struct IntegrationOptions {
  double h = 5e-3;        ///< parameter step
  int n_steps = 10000;    ///< number of RK4 steps
  int project_every = 1;  ///< re-impose constraints every k-th step
  GaugeKind gauge = GaugeKind::plain;
  double drift_tolerance = 1e-6;  ///< pre-projection residual bound
};

struct TrajectorySample {
  double tau = 0.0;
  EvolutionPoint point;
  Vec4 P = Vec4::Zero();  ///< linear momentum at the sample
  Vec3 constraints = Vec3::Zero();
  // Characteristic-solve diagnostics (kernel flow only, NaN otherwise).
  double lambda = std::numeric_limits<double>::quiet_NaN();
  double mu = std::numeric_limits<double>::quiet_NaN();
  double nu = std::numeric_limits<double>::quiet_NaN();
  double sigma_min2 = std::numeric_limits<double>::quiet_NaN();
};

struct Trajectory {
  FlowKind kind = FlowKind::kernel;
  std::vector<TrajectorySample> samples;
  double max_drift = 0.0;  ///< worst pre-projection constraint residual
};

/// Classical fixed-step RK4 on the chosen direction field. Stage evaluations
/// re-impose the constraints on their input, so the field is always queried
/// on V. After each full step the pre-projection constraint residual is
/// checked against options.drift_tolerance ("step size too large" on
/// failure), and the state is projected back to V every project_every steps.
/// Samples (including the initial state) are recorded after projection.
Trajectory integrate(const TwoFormModel& model, const EvolutionPoint& start,
                     FlowKind kind, const IntegrationOptions& options);

/// One row of the weak-field convergence study.
struct ConvergenceRow {
  double eps = 0.0;
  double deviation = 0.0;  ///< sup over matched tau of the state distance
};

struct ConvergenceStudy {
  std::vector<ConvergenceRow> rows;
  double slope = std::numeric_limits<double>::quiet_NaN();
  double horizon = 0.0;
  double h = 0.0;
  bool monotone = true;  ///< deviations increase with eps over the rows used
};

/// Integrate the kernel flow and the linearized flow from the same start
/// with the field scaled by each eps (plain gauge, matched steps), measure
/// the worst ambient Euclidean distance between matched samples, and fit the
/// log-log slope (expected order: 2). Rows with eps = 0 are measured but
/// excluded from the fit; deviations below 1e-14 are treated as rounding
/// floor and also excluded. horizon <= 0 selects
/// min(1 / (q |F_max|), 10 / m) with |F_max| the Frobenius norm of the
/// largest scaled field at the start point.
ConvergenceStudy convergence_study(const TwoFormModel& model,
                                   const EvolutionPoint& start,
                                   const std::vector<double>& eps_list,
                                   double horizon = 0.0, int n_steps = 2000);

/// Weak-field scaling of the characteristic multipliers at a fixed point,
/// for a uniform external field. Two tiers of diagnostics:
///   * exact_*: identities that hold to rounding at every eps,
///       lambda = (m + 2 k alpha) mink(I, dX),
///       mu     = k alpha mink(I, dX) - l mink(J, dual(F) dX),
///       nu     = l mink(I, dual(F) dX);
///   * approx_*: leading-order relations with O(eps^2) defect, whose log-log
///     slopes the study fits (slope is NaN with at_floor = true when the
///     residuals sit at rounding floor, as happens when l = 0).
struct MultiplierScaling {
  std::vector<double> eps;
  std::vector<double> exact_lambda, exact_mu, exact_nu;
  std::vector<double> approx_nu, approx_mu, approx_rho, approx_dalpha;
  double slope_nu = std::numeric_limits<double>::quiet_NaN();
  double slope_mu = std::numeric_limits<double>::quiet_NaN();
  double slope_rho = std::numeric_limits<double>::quiet_NaN();
  double slope_dalpha = std::numeric_limits<double>::quiet_NaN();
  bool floor_nu = false, floor_mu = false, floor_rho = false,
       floor_dalpha = false;
  double exact_worst = 0.0;  ///< max over eps of all exact_* residuals
};

MultiplierScaling multiplier_scaling(const TwoFormModel& model,
                                     const EvolutionPoint& p,
                                     const std::vector<double>& eps_list);

}  // namespace presym

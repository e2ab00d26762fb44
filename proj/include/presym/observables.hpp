#pragma once

#include <vector>

#include "presym/dynamics.hpp"

namespace presym {

/// Energy seen by the static lab observer U = e_t:
///   H = mink_inner(U, P) - q phi(X) = P_t - q phi(X).
/// Conserved along the characteristic flow for static fields deriving from a
/// potential. For central electric fields H equals gamma (m + k alpha)
/// - q phi exactly (the l-term has no time component there). Throws
/// std::logic_error ("no potential") when the field has no potential.
double energy(const TwoFormModel& model, const EvolutionPoint& p);

/// Dressed mass M = m + k_eff alpha at the point (reduces to m when the
/// field vanishes).
double dressed_mass(const TwoFormModel& model, const EvolutionPoint& p);

/// Moment matrix of the rotation/boost symmetry action,
///   Mom = X bar(P) - P bar(X) + s Omega,
/// a metric-skew map. Its spatial block is j(Jvec); the boost block is
/// exposed for inspection but carries no further guarantees.
SkewEndomorphism moment_matrix(const TwoFormModel& model,
                               const EvolutionPoint& p);

/// Rotation content of the moment map in the lab frame.
struct MomentReport {
  double H = 0.0;       ///< energy (NaN when the field has no potential)
  Vec3 Jvec = Vec3::Zero();  ///< axial vector of the spatial moment block
  Vec3 L = Vec3::Zero();     ///< orbital part r x P_spatial
  Vec3 S = Vec3::Zero();     ///< spin part s gamma gamma_tilde (u - <u,v> v)
  double alpha = 0.0;        ///< spin-field coupling at the point
  double SL = 0.0;           ///< <S, L>
  /// Predicted spin-orbit energy contribution
  /// (k_eff/(s m)) (phi'(r)/r) <S, L>; NaN unless the field is central.
  double spin_orbit_term = 0.0;
};

/// Computes the lab decomposition Jvec = L + S (exact identity: both sides
/// are the axial vector of the spatial block of moment_matrix).
MomentReport angular_momentum(const TwoFormModel& model,
                              const EvolutionPoint& p);

/// Drift of the conserved observables along a trajectory, relative to their
/// initial values (angular momentum drift is normalized by |J(0)|_2, energy
/// drift by |H(0)| unless that is tiny).
struct ConservationReport {
  double H0 = 0.0;
  double H_drift_abs = 0.0;
  double H_drift_rel = 0.0;
  Vec3 J0 = Vec3::Zero();
  double J_drift_abs = 0.0;
  double J_drift_rel = 0.0;
  std::size_t n_samples = 0;
};

ConservationReport conservation_report(const TwoFormModel& model,
                                       const Trajectory& traj);

/// Weak-field extraction of the spin-orbit coupling coefficient for a
/// central electric field. For each field scale eps and each family member,
/// the residual energy y = H - m gamma + q phi (the part of the energy not
/// explained by kinetic + potential terms) is regressed with intercept
/// against x = (phi'(r)/r) <S, L>; the fitted slope tends to k_eff / (s m)
/// as eps -> 0. The headline coefficient is the slope at the smallest eps.
struct SpinOrbitRow {
  double eps = 0.0;
  double x = 0.0;
  double y = 0.0;
};

struct SpinOrbitFit {
  double coefficient = 0.0;    ///< fitted slope at the smallest eps
  double coeff_stderr = 0.0;   ///< its standard error
  double theory = 0.0;         ///< k_eff / (s m)
  std::vector<double> eps;     ///< sorted descending
  std::vector<double> slopes;  ///< fitted slope per eps
  std::vector<SpinOrbitRow> rows;
};

/// Throws std::runtime_error "ill-conditioned fit ..." when the regressor
/// values of a family are too close to constant to determine a slope, and
/// std::invalid_argument when the field is not central or the family has
/// fewer than 3 members.
SpinOrbitFit spin_orbit_fit(const TwoFormModel& model,
                            const std::vector<LabFrameState>& family,
                            const std::vector<double>& eps_list);

}  // namespace presym

#include "presym/observables.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "presym/fitting.hpp"

namespace presym {

double energy(const TwoFormModel& model, const EvolutionPoint& p) {
  if (!model.field.has_potential()) {
    throw std::logic_error(
        "no potential: the field has no global static potential, so the "
        "energy observable is undefined");
  }
  const Vec4 P = momentum(model, p);
  return P(3) - model.coeffs.q * model.field.potential_at(p.X);
}

double dressed_mass(const TwoFormModel& model, const EvolutionPoint& p) {
  const auto [k, l] = model.effective_kl();
  (void)l;
  if (model.variant == ModelVariant::free_form) return model.coeffs.m;
  const double alpha =
      coupling_alpha_ambient(p.I, p.J, model.field.field_at(p.X));
  return model.coeffs.m + k * alpha;
}

SkewEndomorphism moment_matrix(const TwoFormModel& model,
                               const EvolutionPoint& p) {
  const Vec4 P = momentum(model, p);
  const SkewEndomorphism Omega = spin_tensor(p.I, p.J);
  const Mat4 M = p.X * bar(P) - P * bar(p.X) +
                 model.coeffs.s * Omega.matrix();
  return SkewEndomorphism(M, 1e-9);
}

MomentReport angular_momentum(const TwoFormModel& model,
                              const EvolutionPoint& p) {
  const Vec4 P = momentum(model, p);
  const SkewEndomorphism Mom = moment_matrix(model, p);
  MomentReport out;
  out.Jvec = axial_vector(Mom.matrix().topLeftCorner<3, 3>());

  const LabFrameState lab = p.to_lab();
  out.L = lab.r.cross(Vec3(P.head<3>()));
  out.S = model.coeffs.s * lab.gamma() * lab.gamma_tilde() *
          (lab.u - lab.u.dot(lab.v) * lab.v);
  out.SL = out.S.dot(out.L);
  out.alpha = coupling_alpha_ambient(p.I, p.J, model.field.field_at(p.X));

  out.H = model.field.has_potential()
              ? energy(model, p)
              : std::numeric_limits<double>::quiet_NaN();

  if (model.field.is_central()) {
    const auto [k, l] = model.effective_kl();
    (void)l;
    const double r = lab.r.norm();
    out.spin_orbit_term = (k / (model.coeffs.s * model.coeffs.m)) *
                          (model.field.radial_profile_derivative(p.X) / r) *
                          out.SL;
  } else {
    out.spin_orbit_term = std::numeric_limits<double>::quiet_NaN();
  }
  return out;
}

ConservationReport conservation_report(const TwoFormModel& model,
                                       const Trajectory& traj) {
  if (traj.samples.empty()) {
    throw std::invalid_argument("conservation report needs samples");
  }
  ConservationReport rep;
  rep.n_samples = traj.samples.size();
  rep.H0 = energy(model, traj.samples.front().point);
  rep.J0 = angular_momentum(model, traj.samples.front().point).Jvec;
  const double j0_norm = rep.J0.norm();

  for (const auto& smp : traj.samples) {
    const double h = energy(model, smp.point);
    const Vec3 j = angular_momentum(model, smp.point).Jvec;
    rep.H_drift_abs = std::max(rep.H_drift_abs, std::abs(h - rep.H0));
    rep.J_drift_abs = std::max(rep.J_drift_abs, (j - rep.J0).norm());
  }
  rep.H_drift_rel = rep.H_drift_abs / std::max(std::abs(rep.H0), 1e-12);
  rep.J_drift_rel = rep.J_drift_abs / std::max(j0_norm, 1e-12);
  return rep;
}

SpinOrbitFit spin_orbit_fit(const TwoFormModel& model,
                            const std::vector<LabFrameState>& family,
                            const std::vector<double>& eps_list) {
  if (!model.field.is_central()) {
    throw std::invalid_argument(
        "spin-orbit extraction requires a central electric field");
  }
  if (family.size() < 3) {
    throw std::invalid_argument(
        "spin-orbit extraction needs a family of at least 3 states");
  }
  if (eps_list.empty()) {
    throw std::invalid_argument("spin-orbit extraction needs an eps list");
  }

  SpinOrbitFit out;
  const auto [k_eff, l_eff] = model.effective_kl();
  (void)l_eff;
  out.theory = k_eff / (model.coeffs.s * model.coeffs.m);

  std::vector<double> sorted_eps = eps_list;
  std::sort(sorted_eps.begin(), sorted_eps.end(), std::greater<double>());

  for (double eps : sorted_eps) {
    TwoFormModel scaled = model;
    scaled.field = model.field.scaled(eps);
    std::vector<double> xs, ys;
    for (const auto& lab : family) {
      const EvolutionPoint pt = EvolutionPoint::from_lab(lab);
      const double H = energy(scaled, pt);
      const double phi = scaled.field.potential_at(pt.X);
      const double y =
          H - model.coeffs.m * lab.gamma() + model.coeffs.q * phi;
      const MomentReport md = angular_momentum(scaled, pt);
      const double r = lab.r.norm();
      const double x =
          (scaled.field.radial_profile_derivative(pt.X) / r) * md.SL;
      xs.push_back(x);
      ys.push_back(y);
      out.rows.push_back({eps, x, y});
    }
    double xmax = 0.0;
    for (double x : xs) xmax = std::max(xmax, std::abs(x));
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(xs.size());
    double var = 0.0;
    for (double x : xs) var += (x - mean) * (x - mean);
    const double spread = std::sqrt(var / static_cast<double>(xs.size()));
    if (!(spread > 1e-12 * std::max(xmax, 1e-300))) {
      throw std::runtime_error(
          "ill-conditioned fit (spin-orbit regressor nearly constant across "
          "the family)");
    }
    const LineFit fit = fit_line(xs, ys);
    out.eps.push_back(eps);
    out.slopes.push_back(fit.slope);
    if (eps == sorted_eps.back()) {
      out.coefficient = fit.slope;
      out.coeff_stderr = fit.slope_stderr;
    }
  }
  return out;
}

}  // namespace presym

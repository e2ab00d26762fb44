#include "presym/dynamics.hpp"

#include <cmath>
#include <functional>
#include <sstream>

#include "presym/fitting.hpp"

namespace presym {

std::string to_string(FlowKind k) {
  switch (k) {
    case FlowKind::kernel: return "kernel";
    case FlowKind::linearized: return "linearized";
    case FlowKind::bmt_reference: return "bmt_reference";
  }
  return "?";
}

std::string to_string(GaugeKind k) {
  return k == GaugeKind::plain ? "plain" : "starred";
}

AmbientTangent linearized_rhs(const TwoFormModel& model,
                              const EvolutionPoint& p) {
  if (model.variant == ModelVariant::free_form) {
    return AmbientTangent{p.I, Vec4::Zero(), Vec4::Zero()};
  }
  const auto& c = model.coeffs;
  const auto [k, l] = model.effective_kl();
  const double defect = k + l + 0.5 * c.g * c.q * c.s / c.m;
  if (std::abs(defect) > 1e-12 * std::max(1.0, std::abs(k) + std::abs(l))) {
    throw std::invalid_argument(
        "coefficients violate the compatibility relation "
        "k + l = -(g/2) q s / m; the linearized flow is undefined");
  }
  const SkewEndomorphism F = model.field.field_at(p.X);
  const double anomaly = 1.0 - 0.5 * c.g;
  AmbientTangent d;

  if (model.variant == ModelVariant::souriau) {
    const SkewEndomorphism Omega = spin_tensor_ambient(p.I, p.J);
    d.dX = p.I - (c.q * c.s / (c.m * c.m)) * anomaly * (Omega * (F * p.I));
    d.dI = -(c.q / c.m) * (F * p.I);
    d.dJ = -(c.q / c.m) *
           (0.5 * c.g * (F * p.J) + anomaly * mink_inner(p.I, F * p.J) * p.I);
    return d;
  }

  // stora/custom: drive the system by the momentum direction I*. The pair
  // (I*, J) satisfies the constraints exactly (mink_inner(J, P) = 0
  // identically), so the spin-precession equations written in I* define an
  // exact direction field on V once the I-equation is completed by the
  // J-component that restores tangency.
  const StarredFrame sf = starred_frame(model, p);
  const Vec4& Is = sf.I_star;
  d.dX = Is - (c.q * c.s / (c.m * c.m)) * anomaly * (sf.spin * (F * Is));
  d.dJ = -(c.q / c.m) *
         (0.5 * c.g * (F * p.J) + anomaly * mink_inner(Is, F * p.J) * Is);
  const double r = (c.q / c.m) * anomaly *
                   (mink_inner(p.I, F * p.J) -
                    mink_inner(p.I, Is) * mink_inner(Is, F * p.J));
  d.dI = -(c.q / c.m) * (F * p.I) + r * p.J;
  return d;
}

AmbientTangent linearized_rhs_provisional(const TwoFormModel& model,
                                          const EvolutionPoint& p) {
  if (model.variant == ModelVariant::free_form) {
    return AmbientTangent{p.I, Vec4::Zero(), Vec4::Zero()};
  }
  const auto& c = model.coeffs;
  const auto [k, l] = model.effective_kl();
  const double defect = k + l + 0.5 * c.g * c.q * c.s / c.m;
  if (std::abs(defect) > 1e-12 * std::max(1.0, std::abs(k) + std::abs(l))) {
    throw std::invalid_argument(
        "coefficients violate the compatibility relation "
        "k + l = -(g/2) q s / m; the linearized flow is undefined");
  }
  const SkewEndomorphism F = model.field.field_at(p.X);
  const SkewEndomorphism Omega = spin_tensor_ambient(p.I, p.J);
  const double anomaly = 1.0 - 0.5 * c.g;
  AmbientTangent d;
  d.dX = p.I - ((k + c.q * c.s / c.m) / c.m) * (Omega * (F * p.I));
  d.dI = -(c.q / c.m) * (F * p.I);
  d.dJ = -(c.q / c.m) *
         (0.5 * c.g * (F * p.J) + anomaly * mink_inner(p.I, F * p.J) * p.I);
  return d;
}

BmtState bmt_reference_rhs(const TwoFormModel& model, const BmtState& state) {
  const auto& c = model.coeffs;
  const SkewEndomorphism F = model.field.field_at(state.X);
  const double p2 = mink_norm2(state.P);
  if (!(p2 > 0.0)) {
    throw std::runtime_error(
        "momentum left the timelike cone (field too strong)");
  }
  BmtState d;
  d.X = state.P;
  d.P = -c.q * (F * state.P);
  d.S = -c.q * (0.5 * c.g * (F * state.S) +
                (1.0 - 0.5 * c.g) *
                    (mink_inner(state.P, F * state.S) / p2) * state.P);
  return d;
}

namespace {

struct RhsResult {
  AmbientTangent delta;
  double lambda = std::numeric_limits<double>::quiet_NaN();
  double mu = std::numeric_limits<double>::quiet_NaN();
  double nu = std::numeric_limits<double>::quiet_NaN();
  double sigma_min2 = std::numeric_limits<double>::quiet_NaN();
};

Trajectory integrate_bmt(const TwoFormModel& model,
                         const EvolutionPoint& start,
                         const IntegrationOptions& opt) {
  const auto& c = model.coeffs;
  BmtState y{start.X, c.m * start.I, c.s * start.J};

  Trajectory traj;
  traj.kind = FlowKind::bmt_reference;
  traj.samples.reserve(static_cast<std::size_t>(opt.n_steps) + 1);

  const auto record = [&](double tau) {
    TrajectorySample smp;
    smp.tau = tau;
    smp.P = y.P;
    const double p2 = mink_norm2(y.P);
    if (!(p2 > 0.0)) {
      throw std::runtime_error(
          "momentum left the timelike cone (field too strong)");
    }
    smp.point.X = y.X;
    smp.point.I = y.P / std::sqrt(p2);
    smp.point.J = y.S / c.s;
    smp.constraints = smp.point.constraint_values();
    traj.max_drift =
        std::max(traj.max_drift, smp.point.constraint_residual());
    traj.samples.push_back(smp);
  };

  const auto add = [](const BmtState& a, double w, const BmtState& b) {
    return BmtState{a.X + w * b.X, a.P + w * b.P, a.S + w * b.S};
  };

  record(0.0);
  for (int i = 0; i < opt.n_steps; ++i) {
    const BmtState k1 = bmt_reference_rhs(model, y);
    const BmtState k2 = bmt_reference_rhs(model, add(y, 0.5 * opt.h, k1));
    const BmtState k3 = bmt_reference_rhs(model, add(y, 0.5 * opt.h, k2));
    const BmtState k4 = bmt_reference_rhs(model, add(y, opt.h, k3));
    BmtState inc = add(k1, 2.0, k2);
    inc = add(inc, 2.0, k3);
    inc = add(inc, 1.0, k4);
    y = add(y, opt.h / 6.0, inc);
    record((i + 1) * opt.h);
  }
  return traj;
}

}  // namespace

Trajectory integrate(const TwoFormModel& model, const EvolutionPoint& start,
                     FlowKind kind, const IntegrationOptions& opt) {
  if (opt.n_steps < 1 || !(opt.h > 0.0) || opt.project_every < 1) {
    throw std::invalid_argument(
        "integration needs h > 0, n_steps >= 1, project_every >= 1");
  }
  start.validate(1e-9);
  if (kind == FlowKind::bmt_reference) {
    return integrate_bmt(model, start, opt);
  }

  const auto rhs_full = [&](const EvolutionPoint& raw) -> RhsResult {
    const EvolutionPoint p = project_to_V(raw);
    RhsResult out;
    if (kind == FlowKind::kernel) {
      const KernelSolution sol = kernel_direction(model, p);
      out.delta = sol.delta;
      out.lambda = sol.lambda;
      out.mu = sol.mu;
      out.nu = sol.nu;
      out.sigma_min2 = sol.sigma_min2;
    } else {
      out.delta = linearized_rhs(model, p);
    }
    const Vec4 ref = (opt.gauge == GaugeKind::plain)
                         ? p.I
                         : starred_frame(model, p).I_star;
    const double den = mink_inner(ref, out.delta.dX);
    if (std::abs(den) < 1e-8) {
      throw std::runtime_error(
          "lightlike characteristic direction, gauge fails");
    }
    out.delta = out.delta * (1.0 / den);
    return out;
  };
  const auto rhs = [&](const EvolutionPoint& raw) {
    return rhs_full(raw).delta;
  };

  Trajectory traj;
  traj.kind = kind;
  traj.samples.reserve(static_cast<std::size_t>(opt.n_steps) + 1);

  EvolutionPoint p = project_to_V(start);
  const auto record = [&](double tau, const RhsResult& at_point) {
    TrajectorySample smp;
    smp.tau = tau;
    smp.point = p;
    smp.P = momentum(model, p);
    smp.constraints = p.constraint_values();
    smp.lambda = at_point.lambda;
    smp.mu = at_point.mu;
    smp.nu = at_point.nu;
    smp.sigma_min2 = at_point.sigma_min2;
    traj.samples.push_back(smp);
  };

  for (int i = 0; i < opt.n_steps; ++i) {
    const RhsResult r1 = rhs_full(p);
    record(i * opt.h, r1);
    const AmbientTangent k1 = r1.delta;
    const AmbientTangent k2 = rhs(displace(p, k1, 0.5 * opt.h));
    const AmbientTangent k3 = rhs(displace(p, k2, 0.5 * opt.h));
    const AmbientTangent k4 = rhs(displace(p, k3, opt.h));
    const AmbientTangent inc =
        (k1 + 2.0 * k2 + 2.0 * k3 + k4) * (1.0 / 6.0);
    const EvolutionPoint next = displace(p, inc, opt.h);

    const double drift = next.constraint_residual();
    traj.max_drift = std::max(traj.max_drift, drift);
    if (drift > opt.drift_tolerance) {
      std::ostringstream msg;
      msg << "step size too large (constraint drift " << drift
          << " exceeds tolerance " << opt.drift_tolerance << " at step "
          << i + 1 << ")";
      throw std::runtime_error(msg.str());
    }
    p = ((i + 1) % opt.project_every == 0) ? project_to_V(next) : next;
  }
  record(opt.n_steps * opt.h, rhs_full(p));
  return traj;
}

ConvergenceStudy convergence_study(const TwoFormModel& model,
                                   const EvolutionPoint& start,
                                   const std::vector<double>& eps_list,
                                   double horizon, int n_steps) {
  if (eps_list.empty()) {
    throw std::invalid_argument("convergence study needs a nonempty eps list");
  }
  ConvergenceStudy study;

  double eps_max = 0.0;
  for (double e : eps_list) eps_max = std::max(eps_max, std::abs(e));
  if (horizon <= 0.0) {
    const double fmax =
        model.field.scaled(eps_max).field_at(start.X).matrix().norm();
    const double by_field = std::abs(model.coeffs.q) * fmax;
    horizon = 10.0 / model.coeffs.m;
    if (by_field > 0.0) horizon = std::min(horizon, 1.0 / by_field);
  }
  study.horizon = horizon;
  study.h = horizon / n_steps;

  IntegrationOptions opt;
  opt.h = study.h;
  opt.n_steps = n_steps;
  opt.project_every = 1;
  opt.gauge = GaugeKind::plain;

  for (double eps : eps_list) {
    TwoFormModel scaled = model;
    scaled.field = model.field.scaled(eps);
    const Trajectory k = integrate(scaled, start, FlowKind::kernel, opt);
    const Trajectory l = integrate(scaled, start, FlowKind::linearized, opt);
    double dev = 0.0;
    for (std::size_t i = 0; i < k.samples.size(); ++i) {
      const auto& a = k.samples[i].point;
      const auto& b = l.samples[i].point;
      const double d2 = (a.X - b.X).squaredNorm() +
                        (a.I - b.I).squaredNorm() +
                        (a.J - b.J).squaredNorm();
      dev = std::max(dev, std::sqrt(d2));
    }
    study.rows.push_back({eps, dev});
  }

  std::vector<double> xs, ys;
  for (const auto& row : study.rows) {
    if (row.eps > 0.0 && row.deviation > 1e-14) {
      xs.push_back(row.eps);
      ys.push_back(row.deviation);
    }
  }
  if (xs.size() >= 2) {
    study.slope = fit_loglog_slope(xs, ys);
    for (std::size_t i = 1; i < xs.size(); ++i) {
      const bool eps_up = xs[i] > xs[i - 1];
      const bool dev_up = ys[i] > ys[i - 1];
      if (eps_up != dev_up) study.monotone = false;
    }
  }
  return study;
}

MultiplierScaling multiplier_scaling(const TwoFormModel& model,
                                     const EvolutionPoint& p,
                                     const std::vector<double>& eps_list) {
  if (model.variant == ModelVariant::free_form) {
    throw std::invalid_argument(
        "multiplier scaling requires a field-coupled model");
  }
  if (!model.field.is_uniform()) {
    throw std::invalid_argument("multiplier scaling requires a uniform field");
  }
  p.validate(1e-9);

  const auto& c = model.coeffs;
  const auto [k, l] = model.effective_kl();
  MultiplierScaling out;

  for (double eps : eps_list) {
    TwoFormModel scaled = model;
    scaled.field = model.field.scaled(eps);
    const KernelSolution sol = kernel_direction(scaled, p);
    const SkewEndomorphism F = scaled.field.field_at(p.X);
    const SkewEndomorphism W = F.dual();
    const double alpha = mink_inner(p.I, W * p.J);
    const AmbientTangent& d = sol.delta;
    const double IdX = mink_inner(p.I, d.dX);

    out.eps.push_back(eps);
    out.exact_lambda.push_back(
        std::abs(sol.lambda - (c.m + 2.0 * k * alpha) * IdX));
    out.exact_mu.push_back(std::abs(
        sol.mu - (k * alpha * IdX - l * mink_inner(p.J, W * d.dX))));
    out.exact_nu.push_back(std::abs(sol.nu - l * mink_inner(p.I, W * d.dX)));

    out.approx_nu.push_back(std::abs(sol.nu));
    out.approx_mu.push_back(
        std::abs(sol.mu - alpha * (k * IdX + l * sol.lambda / c.m)));

    const double IFJ = mink_inner(p.I, F * p.J);
    if (std::abs(alpha) > 0.0) {
      const double mu_hat = sol.mu / alpha;
      const double rho_num =
          c.s * mink_inner(p.I, d.dJ) - mu_hat * IFJ;
      const double rho_pred =
          -IFJ * (k * IdX + (sol.lambda / c.m) * (l + c.q * c.s / c.m));
      out.approx_rho.push_back(std::abs(rho_num - rho_pred));
    } else {
      out.approx_rho.push_back(0.0);
    }

    out.approx_dalpha.push_back(std::abs(mink_inner(d.dI, W * p.J) +
                                         mink_inner(p.I, W * d.dJ)));
  }

  const double floor_thresh = 1e-12 * std::max(1.0, std::abs(c.m));
  const auto fit_family = [&](const std::vector<double>& res, double& slope,
                              bool& at_floor) {
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < res.size(); ++i) {
      if (res[i] > floor_thresh && out.eps[i] > 0.0) {
        xs.push_back(out.eps[i]);
        ys.push_back(res[i]);
      }
    }
    if (xs.size() < 2) {
      at_floor = true;
      slope = std::numeric_limits<double>::quiet_NaN();
      return;
    }
    at_floor = false;
    slope = fit_loglog_slope(xs, ys);
  };
  fit_family(out.approx_nu, out.slope_nu, out.floor_nu);
  fit_family(out.approx_mu, out.slope_mu, out.floor_mu);
  fit_family(out.approx_rho, out.slope_rho, out.floor_rho);
  fit_family(out.approx_dalpha, out.slope_dalpha, out.floor_dalpha);

  for (std::size_t i = 0; i < out.eps.size(); ++i) {
    out.exact_worst = std::max(
        {out.exact_worst, out.exact_lambda[i], out.exact_mu[i],
         out.exact_nu[i]});
  }
  return out;
}

}  // namespace presym

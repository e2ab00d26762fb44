#include "presym/presymplectic.hpp"

#include <array>
#include <cmath>

namespace presym {

std::string to_string(ModelVariant v) {
  switch (v) {
    case ModelVariant::free_form: return "free";
    case ModelVariant::souriau: return "souriau";
    case ModelVariant::stora: return "stora";
  }
  return "?";
}

ModelCoefficients ModelCoefficients::free_particle(double m) {
  ModelCoefficients c;
  c.m = m;
  c.s = 1.0;
  c.q = 0.0;
  c.k = 0.0;
  c.l = 0.0;
  return c;
}

ModelCoefficients ModelCoefficients::souriau(double m, double s, double q,
                                             double g) {
  ModelCoefficients c;
  c.m = m;
  c.s = s;
  c.q = q;
  c.g = g;
  // Effective values; the souriau variant applies them internally, but store
  // the pair so that bmt_defect() reports zero for the preset.
  c.k = -0.5 * g * q * s / m;
  c.l = 0.0;
  return c;
}

ModelCoefficients ModelCoefficients::stora(double m, double s, double q,
                                           double g) {
  ModelCoefficients c;
  c.m = m;
  c.s = s;
  c.q = q;
  c.g = g;
  c.k = -0.5 * (g - 1.0) * q * s / m;
  c.l = -0.5 * q * s / m;
  return c;
}

ModelCoefficients ModelCoefficients::custom(double m, double s, double q,
                                            double g, double k, double l) {
  ModelCoefficients c;
  c.m = m;
  c.s = s;
  c.q = q;
  c.g = g;
  c.k = k;
  c.l = l;
  return c;
}

std::pair<double, double> TwoFormModel::effective_kl() const {
  switch (variant) {
    case ModelVariant::free_form:
      return {0.0, 0.0};
    case ModelVariant::souriau:
      return {-0.5 * coeffs.g * coeffs.q * coeffs.s / coeffs.m, 0.0};
    case ModelVariant::stora:
      return {coeffs.k, coeffs.l};
  }
  return {0.0, 0.0};
}

Vec4 momentum(const TwoFormModel& model, const EvolutionPoint& p) {
  const auto [k, l] = model.effective_kl();
  Vec4 P = model.coeffs.m * p.I;
  if (model.variant != ModelVariant::free_form) {
    const SkewEndomorphism W = model.field.field_at(p.X).dual();
    const double alpha = mink_inner(p.I, W * p.J);
    P = (model.coeffs.m + k * alpha) * p.I + l * (W * p.J);
  }
  if (!(mink_norm2(P) > 0.0) || !(P(3) > 0.0)) {
    throw std::runtime_error(
        "momentum left the timelike cone (field too strong)");
  }
  return P;
}

StarredFrame starred_frame(const TwoFormModel& model,
                           const EvolutionPoint& p) {
  const Vec4 P = momentum(model, p);
  StarredFrame out;
  out.I_star = P / std::sqrt(mink_norm2(P));
  out.spin = spin_tensor_ambient(out.I_star, p.J);
  out.orthogonality_residual = std::abs(mink_inner(p.J, out.I_star));
  return out;
}

double sigma_eval(const TwoFormModel& model, const EvolutionPoint& p,
                  const AmbientTangent& t1, const AmbientTangent& t2) {
  const SkewEndomorphism Omega = spin_tensor_ambient(p.I, p.J);
  const double s = model.coeffs.s;
  const double spin_part = s * (mink_inner(t1.dI, Omega * t2.dI) -
                                mink_inner(t1.dJ, Omega * t2.dJ));

  if (model.variant == ModelVariant::free_form) {
    const double m = model.coeffs.m;
    return spin_part - m * mink_inner(t1.dI, t2.dX) +
           m * mink_inner(t2.dI, t1.dX);
  }

  const auto [k, l] = model.effective_kl();
  const double m = model.coeffs.m;
  const double q = model.coeffs.q;
  const SkewEndomorphism F = model.field.field_at(p.X);
  const SkewEndomorphism W = F.dual();
  const double alpha = mink_inner(p.I, W * p.J);
  const double M = m + k * alpha;

  const auto grad_dual = [&](const Vec4& dir) {
    return model.field.grad_field_at(p.X, dir).dual();
  };
  const auto dP = [&](const AmbientTangent& t) -> Vec4 {
    const SkewEndomorphism T = grad_dual(t.dX);
    const double dalpha = mink_inner(t.dI, W * p.J) +
                          mink_inner(p.I, W * t.dJ) +
                          mink_inner(p.I, T * p.J);
    return M * t.dI + (k * dalpha) * p.I + l * (W * t.dJ) + l * (T * p.J);
  };

  return spin_part - mink_inner(dP(t1), t2.dX) + mink_inner(dP(t2), t1.dX) +
         q * mink_inner(t1.dX, F * t2.dX);
}

Mat12 sigma_matrix(const TwoFormModel& model, const EvolutionPoint& p) {
  const Mat4& G = metric();
  const double s = model.coeffs.s;
  const Mat4 GOmega = G * spin_tensor_ambient(p.I, p.J).matrix();

  Mat12 S = Mat12::Zero();
  S.block<4, 4>(4, 4) = s * GOmega;
  S.block<4, 4>(8, 8) = -s * GOmega;

  if (model.variant == ModelVariant::free_form) {
    const double m = model.coeffs.m;
    S.block<4, 4>(4, 0) = -m * G;
    S.block<4, 4>(0, 4) = m * G;
    return S;
  }

  const auto [k, l] = model.effective_kl();
  const double m = model.coeffs.m;
  const double q = model.coeffs.q;
  const SkewEndomorphism F = model.field.field_at(p.X);
  const SkewEndomorphism W = F.dual();
  const double alpha = mink_inner(p.I, W * p.J);
  const double M = m + k * alpha;

  const Vec4 GI = G * p.I;
  const Vec4 a = G * (W * p.J);                     // pairs with dI
  const Vec4 b = W.matrix().transpose() * GI;       // pairs with dJ

  S.block<4, 4>(4, 0) = -M * G - k * (a * GI.transpose());
  S.block<4, 4>(0, 4) = M * G + k * (GI * a.transpose());
  S.block<4, 4>(8, 0) =
      -k * (b * GI.transpose()) - l * (W.matrix().transpose() * G);
  S.block<4, 4>(0, 8) = k * (GI * b.transpose()) + l * (G * W.matrix());

  Mat4 XX = q * (G * F.matrix());
  if (model.field.is_central()) {
    // Field-gradient contributions to the momentum differential.
    Vec4 w;            // w_d = mink_inner(I, dual(grad_d F) J)
    Mat4 TJ;           // column d holds dual(grad_d F) J
    for (int d = 0; d < 4; ++d) {
      Vec4 e = Vec4::Zero();
      e(d) = 1.0;
      const SkewEndomorphism T = model.field.grad_field_at(p.X, e).dual();
      const Vec4 tj = T * p.J;
      TJ.col(d) = tj;
      w(d) = mink_inner(p.I, tj);
    }
    XX += k * (GI * w.transpose() - w * GI.transpose());
    XX += l * (G * TJ - TJ.transpose() * G);
  }
  S.block<4, 4>(0, 0) = XX;
  return S;
}

int rank_at(const TwoFormModel& model, const EvolutionPoint& p,
            double rel_tol) {
  const auto B = tangent_basis(p);
  const Eigen::Matrix<double, 9, 9> A =
      B.transpose() * sigma_matrix(model, p) * B;
  Eigen::JacobiSVD<Eigen::Matrix<double, 9, 9>> svd(A);
  const auto& sv = svd.singularValues();
  if (!(sv(0) > 0.0)) return 0;
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i) {
    if (sv(i) > rel_tol * sv(0)) ++rank;
  }
  return rank;
}

double closedness_residual(const TwoFormModel& model, const EvolutionPoint& p,
                           double h) {
  const auto B = tangent_basis(p);
  // Central-difference data: sigma_matrix at p displaced along each basis
  // direction. The displaced points leave V at O(h^2); all formulas extend
  // smoothly, and because pullback commutes with the exterior derivative the
  // tangential contraction below measures d of the restricted form.
  std::array<Mat12, 9> diff;
  for (int a = 0; a < 9; ++a) {
    const AmbientTangent dir = AmbientTangent::from_stacked(B.col(a));
    const Mat12 Sp = sigma_matrix(model, displace(p, dir, h));
    const Mat12 Sm = sigma_matrix(model, displace(p, dir, -h));
    diff[a] = (Sp - Sm) / (2.0 * h);
  }
  double worst = 0.0;
  for (int a = 0; a < 9; ++a) {
    for (int b = a + 1; b < 9; ++b) {
      for (int c = b + 1; c < 9; ++c) {
        const double val = B.col(b).dot(diff[a] * B.col(c)) -
                           B.col(a).dot(diff[b] * B.col(c)) +
                           B.col(a).dot(diff[c] * B.col(b));
        worst = std::max(worst, std::abs(val));
      }
    }
  }
  return worst;
}

KernelSolution kernel_direction(const TwoFormModel& model,
                                const EvolutionPoint& p) {
  p.validate(1e-9);
  using Mat15 = Eigen::Matrix<double, 15, 15>;
  const Mat12 S = sigma_matrix(model, p);
  const Eigen::Matrix<double, 12, 3> C = constraint_gradients(p);

  Mat15 K = Mat15::Zero();
  K.topLeftCorner<12, 12>() = -S;
  K.topRightCorner<12, 3>() = C;
  K.bottomLeftCorner<3, 12>() = C.transpose();

  // Dynamic-size SVD: the fixed-size specialization trips a GCC
  // maybe-uninitialized false positive, and the solve cost dwarfs the
  // allocation anyway.
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(K, Eigen::ComputeFullV);
  const Eigen::VectorXd sv = svd.singularValues();
  const double smax = sv(0);
  const double smin = sv(14);
  const double smin2 = sv(13);
  if (!(smin <= 1e-10 * smax)) {
    throw std::runtime_error(
        "characteristic solve failed (no null direction)");
  }
  if (smin2 < std::max(10.0 * smin, 1e-12 * smax)) {
    throw std::runtime_error("kernel not one-dimensional (rank degeneracy)");
  }

  Eigen::Matrix<double, 15, 1> v = svd.matrixV().col(14);
  const double gauge = mink_inner(p.I, v.segment<4>(0));
  if (std::abs(gauge) < 1e-8) {
    throw std::runtime_error(
        "lightlike characteristic direction, gauge fails");
  }
  v /= gauge;

  KernelSolution sol;
  sol.delta = AmbientTangent::from_stacked(v.head<12>());
  sol.lambda = 2.0 * v(12);
  sol.mu = 2.0 * v(13);
  sol.nu = v(14);
  sol.sigma_min = smin;
  sol.sigma_min2 = smin2;
  sol.residual = smin / smax;
  sol.gauge_factor = gauge;
  return sol;
}

}  // namespace presym

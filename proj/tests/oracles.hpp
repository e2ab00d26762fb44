#pragma once

// Independent numerical oracles shared by the test suite. Everything here is
// deliberately implemented from first principles (permutation tensors,
// finite differences, matrix exponentials) rather than by calling the
// library's own derived formulas, so agreement is meaningful.

#include <cmath>
#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include <unsupported/Eigen/MatrixFunctions>

#include "presym/presymplectic.hpp"

namespace oracles {

using presym::AmbientTangent;
using presym::EvolutionPoint;
using presym::Mat12;
using presym::Mat4;
using presym::SkewEndomorphism;
using presym::TwoFormModel;
using presym::Vec3;
using presym::Vec4;

// ---------------------------------------------------------------------------
// Hodge star via the permutation tensor, with the orientation fixed by
// eps(x,y,z,t) = -1 in the (x,y,z,t) index order. Indices of the 2-form are
// raised with the metric before contraction, and the resulting lowered
// 2-form is converted back to an endomorphism.
inline int permutation_sign(int a, int b, int c, int d) {
  const int idx[4] = {a, b, c, d};
  int sign = 1;
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      if (idx[i] == idx[j]) return 0;
      if (idx[i] > idx[j]) sign = -sign;
    }
  }
  return sign;
}

inline Mat4 star_oracle(const Mat4& F_endo) {
  const Mat4& G = presym::metric();
  const Mat4 omega_low = G * F_endo;
  const Mat4 omega_up = G * omega_low * G;
  Mat4 star_low = Mat4::Zero();
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      double sum = 0.0;
      for (int c = 0; c < 4; ++c) {
        for (int d = 0; d < 4; ++d) {
          // orientation: eps(0,1,2,3) = -1
          sum += -permutation_sign(a, b, c, d) * omega_up(c, d);
        }
      }
      star_low(a, b) = 0.5 * sum;
    }
  }
  return G * star_low;
}

// ---------------------------------------------------------------------------
// The two-form assembled directly from its definition,
//   sigma(t1,t2) = s(<t1.dI, Om t2.dI> - <t1.dJ, Om t2.dJ>)
//               - <dP(t1), t2.dX> + <dP(t2), t1.dX> + q <t1.dX, F t2.dX>,
// with dP obtained by Richardson-extrapolated central differences of the
// momentum map under ambient displacement. No hand-derived derivative
// formulas are involved, so this is an independent check of sigma_matrix
// (including its field-gradient terms for non-uniform fields).
inline Mat12 sigma_fd_oracle(const TwoFormModel& model, const EvolutionPoint& p,
                             double h = 2e-2) {
  const SkewEndomorphism F = model.field.field_at(p.X);
  const SkewEndomorphism Om = presym::spin_tensor_ambient(p.I, p.J);
  const double q = model.coeffs.q;
  const double s = model.coeffs.s;

  const auto momentum_at = [&](const AmbientTangent& t, double step) {
    return presym::momentum(model, presym::displace(p, t, step));
  };
  const auto dP = [&](const AmbientTangent& t) -> Vec4 {
    const Vec4 d1 = (momentum_at(t, h) - momentum_at(t, -h)) / (2.0 * h);
    const Vec4 d2 =
        (momentum_at(t, h / 2) - momentum_at(t, -h / 2)) / (2.0 * (h / 2));
    return (4.0 * d2 - d1) / 3.0;
  };

  std::vector<AmbientTangent> basis(12);
  std::vector<Vec4> dPs(12);
  for (int i = 0; i < 12; ++i) {
    Eigen::Matrix<double, 12, 1> e = Eigen::Matrix<double, 12, 1>::Zero();
    e(i) = 1.0;
    basis[i] = AmbientTangent::from_stacked(e);
    dPs[i] = dP(basis[i]);
  }

  Mat12 S = Mat12::Zero();
  for (int i = 0; i < 12; ++i) {
    for (int j = 0; j < 12; ++j) {
      const auto& t1 = basis[i];
      const auto& t2 = basis[j];
      double val = s * (presym::mink_inner(t1.dI, Om * t2.dI) -
                        presym::mink_inner(t1.dJ, Om * t2.dJ));
      val -= presym::mink_inner(dPs[i], t2.dX);
      val += presym::mink_inner(dPs[j], t1.dX);
      val += q * presym::mink_inner(t1.dX, F * t2.dX);
      S(i, j) = val;
    }
  }
  return S;
}

// ---------------------------------------------------------------------------
// Matrix-exponential solution of the constant-field Lorentz equation
// dP/dtau = -q F P.
inline Vec4 lorentz_expm(const SkewEndomorphism& F, double q, double tau,
                         const Vec4& P0) {
  const Mat4 A = (-q * tau * F.matrix()).exp();
  return A * P0;
}

// ---------------------------------------------------------------------------
// The published weak-field direction field of the souriau model, assembled
// symbol by symbol:
//   dX = I - (qs/m^2)(1 - g/2) Om F I
//   dI = -(q/m) F I
//   dJ = -(q/m) [ (g/2) F J + (1 - g/2) I <I, F J> ]
inline AmbientTangent souriau_linearized_oracle(const TwoFormModel& model,
                                                const EvolutionPoint& p) {
  const auto& c = model.coeffs;
  const SkewEndomorphism F = model.field.field_at(p.X);
  const SkewEndomorphism Om = presym::spin_tensor_ambient(p.I, p.J);
  const double a = 1.0 - 0.5 * c.g;
  AmbientTangent d;
  d.dX = p.I - (c.q * c.s / (c.m * c.m)) * a * (Om * (F * p.I));
  d.dI = -(c.q / c.m) * (F * p.I);
  d.dJ = -(c.q / c.m) * (0.5 * c.g * (F * p.J) +
                         a * presym::mink_inner(p.I, F * p.J) * p.I);
  return d;
}

// ---------------------------------------------------------------------------
// Radial profile tables. The clean table samples a smooth 1/r profile
// densely enough that the spline reproduces it to interpolation accuracy.
// The corrupted table injects alternating jumps between closely spaced knots
// over r in [1, 3]; the interpolant is formally smooth but carries huge
// local third derivatives, so finite-difference detectors for dF = 0 (and
// for d sigma = 0) fire well above their thresholds.
inline void write_profile_table(const std::string& path, bool corrupted) {
  std::ofstream out(path);
  out << "# r phi\n";
  out.precision(17);
  int i = 0;
  for (double r = 0.5; r <= 8.0001; r += 0.025, ++i) {
    double phi = 1.0 / r;
    if (corrupted && r >= 1.0 && r <= 3.0) {
      phi += (i % 2 == 0) ? 3.0 : -3.0;
    }
    out << r << " " << std::scientific << phi << std::defaultfloat << "\n";
  }
}

// ---------------------------------------------------------------------------
// Model construction shorthands.
inline TwoFormModel make_free(double m = 1.0) {
  TwoFormModel model;
  model.variant = presym::ModelVariant::free_form;
  model.coeffs = presym::ModelCoefficients::free_particle(m);
  return model;
}

inline TwoFormModel make_souriau(double m, double s, double q, double g,
                                 const presym::FieldModel& field) {
  TwoFormModel model;
  model.variant = presym::ModelVariant::souriau;
  model.coeffs = presym::ModelCoefficients::souriau(m, s, q, g);
  model.field = field;
  return model;
}

inline TwoFormModel make_stora(double m, double s, double q, double g,
                               const presym::FieldModel& field) {
  TwoFormModel model;
  model.variant = presym::ModelVariant::stora;
  model.coeffs = presym::ModelCoefficients::stora(m, s, q, g);
  model.field = field;
  return model;
}

inline TwoFormModel make_custom(double m, double s, double q, double g,
                                double k, double l,
                                const presym::FieldModel& field) {
  TwoFormModel model;
  model.variant = presym::ModelVariant::stora;
  model.coeffs = presym::ModelCoefficients::custom(m, s, q, g, k, l);
  model.field = field;
  return model;
}

// ---------------------------------------------------------------------------
// Assertion helper (doctest translation units only): expr must throw E with
// a message containing `needle`.
#ifdef DOCTEST_LIBRARY_INCLUDED
template <typename E, typename Fn>
void expect_throw_containing(Fn&& fn, const std::string& needle) {
  bool threw = false;
  std::string message;
  try {
    fn();
  } catch (const E& e) {
    threw = true;
    message = e.what();
  }
  CHECK(threw);
  if (threw) {
    INFO("message: " << message);
    CHECK(message.find(needle) != std::string::npos);
  }
}
#endif

// Log-log slope of y against x (positive pairs only).
inline double loglog_slope(const std::vector<double>& x,
                           const std::vector<double>& y) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] > 0 && y[i] > 0) {
      lx.push_back(std::log(x[i]));
      ly.push_back(std::log(y[i]));
    }
  }
  const auto n = static_cast<double>(lx.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sx += lx[i];
    sy += ly[i];
    sxx += lx[i] * lx[i];
    sxy += lx[i] * ly[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace oracles

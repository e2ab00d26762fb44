#include "presym/fields.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace presym {

namespace {

// Second derivatives of the natural cubic spline through (x_i, y_i), found
// from the standard tridiagonal system (Thomas algorithm).
std::vector<double> natural_spline_m2(const std::vector<double>& x,
                                      const std::vector<double>& y) {
  const std::size_t n = x.size();
  std::vector<double> m2(n, 0.0);
  if (n < 3) return m2;

  std::vector<double> diag(n - 2), rhs(n - 2), upper(n - 2);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h0 = x[i] - x[i - 1];
    const double h1 = x[i + 1] - x[i];
    diag[i - 1] = 2.0 * (h0 + h1);
    upper[i - 1] = h1;
    rhs[i - 1] =
        6.0 * ((y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0);
  }
  // Forward elimination (lower entries equal the previous row's upper).
  for (std::size_t i = 1; i < n - 2; ++i) {
    const double lower = x[i + 1] - x[i];
    const double w = lower / diag[i - 1];
    diag[i] -= w * upper[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  for (std::size_t i = n - 2; i-- > 0;) {
    const double carried = (i + 1 < n - 2) ? upper[i] * m2[i + 2] : 0.0;
    m2[i + 1] = (rhs[i] - carried) / diag[i];
  }
  return m2;
}

std::size_t spline_interval(const std::vector<double>& x, double r) {
  // Largest i with x[i] <= r, clamped to the last interval.
  std::size_t lo = 0, hi = x.size() - 1;
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    if (x[mid] <= r) lo = mid; else hi = mid;
  }
  return lo;
}

}  // namespace

FieldModel FieldModel::none() { return FieldModel(); }

FieldModel FieldModel::uniform(const Vec3& E, const Vec3& B) {
  FieldModel f;
  f.kind_ = Kind::uniform;
  f.E0_ = E;
  f.B0_ = B;
  return f;
}

FieldModel FieldModel::uniform_with_origin(const Vec3& E, const Vec3& B,
                                           const Vec3& gauge_origin) {
  FieldModel f = uniform(E, B);
  f.gauge_origin_ = gauge_origin;
  return f;
}

FieldModel FieldModel::coulomb(double kappa, double r_min) {
  FieldModel f;
  f.kind_ = Kind::central;
  f.profile_ = RadialProfileKind::coulomb;
  f.kappa_ = kappa;
  f.r_min_ = r_min;
  return f;
}

FieldModel FieldModel::harmonic(double kappa) {
  FieldModel f;
  f.kind_ = Kind::central;
  f.profile_ = RadialProfileKind::harmonic;
  f.kappa_ = kappa;
  f.r_min_ = 0.0;
  return f;
}

FieldModel FieldModel::tabulated(const std::vector<double>& r,
                                 const std::vector<double>& phi) {
  if (r.size() < 3 || r.size() != phi.size()) {
    throw std::invalid_argument(
        "tabulated profile needs at least 3 samples with matching lengths");
  }
  for (std::size_t i = 1; i < r.size(); ++i) {
    if (!(r[i] > r[i - 1])) {
      throw std::invalid_argument(
          "tabulated profile radii must be strictly increasing");
    }
  }
  if (!(r.front() > 0.0)) {
    throw std::invalid_argument("tabulated profile radii must be positive");
  }
  FieldModel f;
  f.kind_ = Kind::central;
  f.profile_ = RadialProfileKind::tabulated;
  f.kappa_ = 1.0;  // amplitude multiplier used by scaled()
  f.r_min_ = r.front();
  f.knots_r_ = r;
  f.knots_phi_ = phi;
  f.knots_m2_ = natural_spline_m2(r, phi);
  return f;
}

FieldModel FieldModel::tabulated_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open profile table: " + path);
  }
  std::vector<double> r, phi;
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream row(line);
    double rv = 0.0, pv = 0.0;
    if (!(row >> rv >> pv)) {
      throw std::runtime_error("malformed profile table row: " + line);
    }
    r.push_back(rv);
    phi.push_back(pv);
  }
  return tabulated(r, phi);
}

void FieldModel::check_radius(double r) const {
  if (r < r_min_) {
    std::ostringstream msg;
    msg << "field singularity: radius " << r << " is inside r_min " << r_min_;
    throw std::domain_error(msg.str());
  }
  if (profile_ == RadialProfileKind::tabulated && r > knots_r_.back()) {
    std::ostringstream msg;
    msg << "radius " << r << " is outside the tabulated range ["
        << knots_r_.front() << ", " << knots_r_.back() << "]";
    throw std::domain_error(msg.str());
  }
}

double FieldModel::phi(double r) const {
  switch (profile_) {
    case RadialProfileKind::coulomb:
      return kappa_ / r;
    case RadialProfileKind::harmonic:
      return 0.5 * kappa_ * r * r;
    case RadialProfileKind::tabulated: {
      const std::size_t i = spline_interval(knots_r_, r);
      const double h = knots_r_[i + 1] - knots_r_[i];
      const double a = (knots_r_[i + 1] - r) / h;
      const double b = (r - knots_r_[i]) / h;
      return kappa_ *
             (a * knots_phi_[i] + b * knots_phi_[i + 1] +
              ((a * a * a - a) * knots_m2_[i] +
               (b * b * b - b) * knots_m2_[i + 1]) *
                  h * h / 6.0);
    }
  }
  return 0.0;
}

double FieldModel::phi_prime(double r) const {
  switch (profile_) {
    case RadialProfileKind::coulomb:
      return -kappa_ / (r * r);
    case RadialProfileKind::harmonic:
      return kappa_ * r;
    case RadialProfileKind::tabulated: {
      const std::size_t i = spline_interval(knots_r_, r);
      const double h = knots_r_[i + 1] - knots_r_[i];
      const double a = (knots_r_[i + 1] - r) / h;
      const double b = (r - knots_r_[i]) / h;
      return kappa_ *
             ((knots_phi_[i + 1] - knots_phi_[i]) / h +
              ((3.0 * b * b - 1.0) * knots_m2_[i + 1] -
               (3.0 * a * a - 1.0) * knots_m2_[i]) *
                  h / 6.0);
    }
  }
  return 0.0;
}

double FieldModel::phi_second(double r) const {
  switch (profile_) {
    case RadialProfileKind::coulomb:
      return 2.0 * kappa_ / (r * r * r);
    case RadialProfileKind::harmonic:
      return kappa_;
    case RadialProfileKind::tabulated: {
      const std::size_t i = spline_interval(knots_r_, r);
      const double h = knots_r_[i + 1] - knots_r_[i];
      const double a = (knots_r_[i + 1] - r) / h;
      const double b = (r - knots_r_[i]) / h;
      return kappa_ * (a * knots_m2_[i] + b * knots_m2_[i + 1]);
    }
  }
  return 0.0;
}

SkewEndomorphism FieldModel::field_at(const Vec4& X) const {
  switch (kind_) {
    case Kind::zero:
      return SkewEndomorphism();
    case Kind::uniform:
      return SkewEndomorphism::from_electric_magnetic(E0_, B0_);
    case Kind::central: {
      const Vec3 rvec = X.head<3>();
      const double r = rvec.norm();
      check_radius(r);
      // E = -phi'(r) r_hat
      const Vec3 E = (-phi_prime(r) / r) * rvec;
      return SkewEndomorphism::from_electric_magnetic(E, Vec3::Zero());
    }
  }
  return SkewEndomorphism();
}

SkewEndomorphism FieldModel::grad_field_at(const Vec4& X,
                                           const Vec4& dir) const {
  if (kind_ != Kind::central) {
    return SkewEndomorphism();  // constant or zero fields
  }
  const Vec3 rvec = X.head<3>();
  const double r = rvec.norm();
  check_radius(r);
  const Vec3 w = dir.head<3>();  // static field: time direction drops out
  // E(x) = -psi(r) x with psi = phi'/r, so
  // (grad_w E)(x) = -psi'(r) <r_hat, w> x - psi(r) w.
  const double psi = phi_prime(r) / r;
  const double psi_prime = (phi_second(r) - psi) / r;
  const Vec3 dE = -psi_prime * (rvec.dot(w) / r) * rvec - psi * w;
  return SkewEndomorphism::from_electric_magnetic(dE, Vec3::Zero());
}

double FieldModel::potential_at(const Vec4& X) const {
  switch (kind_) {
    case Kind::zero:
      return 0.0;
    case Kind::uniform: {
      if (E0_.isZero()) return 0.0;
      if (!gauge_origin_) {
        throw std::logic_error(
            "no global static potential: uniform electric field without a "
            "gauge origin");
      }
      return -E0_.dot(X.head<3>() - *gauge_origin_);
    }
    case Kind::central: {
      const double r = X.head<3>().norm();
      check_radius(r);
      return phi(r);
    }
  }
  return 0.0;
}

double FieldModel::radial_profile_derivative(const Vec4& X) const {
  if (kind_ != Kind::central) {
    throw std::logic_error(
        "radial profile derivative is only defined for central fields");
  }
  const double r = X.head<3>().norm();
  check_radius(r);
  return phi_prime(r);
}

bool FieldModel::has_potential() const {
  switch (kind_) {
    case Kind::zero:
      return true;
    case Kind::uniform:
      return E0_.isZero() || gauge_origin_.has_value();
    case Kind::central:
      return true;
  }
  return false;
}

bool FieldModel::is_zero() const {
  if (kind_ == Kind::zero) return true;
  if (kind_ == Kind::uniform) return E0_.isZero() && B0_.isZero();
  return false;
}

FieldModel FieldModel::scaled(double factor) const {
  FieldModel f = *this;
  if (f.kind_ == Kind::uniform) {
    f.E0_ *= factor;
    f.B0_ *= factor;
  } else if (f.kind_ == Kind::central) {
    f.kappa_ *= factor;
  }
  return f;
}

double FieldModel::maxwell_residual(const Vec4& X, double h) const {
  // omega = g F, lowered 2-form components; central differences in each of
  // the four coordinate directions.
  Mat4 plus[4], minus[4];
  for (int a = 0; a < 4; ++a) {
    Vec4 e = Vec4::Zero();
    e(a) = h;
    plus[a] = metric() * field_at(X + e).matrix();
    minus[a] = metric() * field_at(X - e).matrix();
  }
  auto d = [&](int a, int b, int c) {
    return (plus[a](b, c) - minus[a](b, c)) / (2.0 * h);
  };
  double worst = 0.0;
  for (int a = 0; a < 4; ++a) {
    for (int b = a + 1; b < 4; ++b) {
      for (int c = b + 1; c < 4; ++c) {
        const double cyc = d(a, b, c) + d(b, c, a) + d(c, a, b);
        worst = std::max(worst, std::abs(cyc));
      }
    }
  }
  return worst;
}

}  // namespace presym

#include "presym/sampling.hpp"

namespace presym {

std::mt19937_64 make_rng(std::uint64_t seed) { return std::mt19937_64(seed); }

Vec3 random_unit3(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Vec3 v;
  do {
    v = Vec3(n(rng), n(rng), n(rng));
  } while (v.norm() < 1e-6);
  return v.normalized();
}

Vec3 random_in_shell(std::mt19937_64& rng, double r_lo, double r_hi) {
  std::uniform_real_distribution<double> u(r_lo, r_hi);
  return u(rng) * random_unit3(rng);
}

LabFrameState random_lab_state(std::mt19937_64& rng, double r_lo, double r_hi,
                               double v_max) {
  std::uniform_real_distribution<double> u(0.0, v_max);
  LabFrameState lab;
  lab.r = random_in_shell(rng, r_lo, r_hi);
  lab.t = 0.0;
  lab.v = u(rng) * random_unit3(rng);
  lab.u = random_unit3(rng);
  return lab;
}

EvolutionPoint random_point(std::mt19937_64& rng, double r_lo, double r_hi,
                            double v_max) {
  return EvolutionPoint::from_lab(random_lab_state(rng, r_lo, r_hi, v_max));
}

SkewEndomorphism random_skew(std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  const Vec3 E(u(rng), u(rng), u(rng));
  const Vec3 B(u(rng), u(rng), u(rng));
  return SkewEndomorphism::from_electric_magnetic(E, B);
}

Vec4 random_vec4(std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  return Vec4(u(rng), u(rng), u(rng), u(rng));
}

AmbientTangent random_tangent(std::mt19937_64& rng, const EvolutionPoint& p) {
  std::normal_distribution<double> n(0.0, 1.0);
  Vec12 raw;
  for (int i = 0; i < 12; ++i) raw(i) = n(rng);
  const auto B = tangent_basis(p);
  return AmbientTangent::from_stacked(B * (B.transpose() * raw));
}

}  // namespace presym

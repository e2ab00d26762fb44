#pragma once

#include <cstdint>
#include <random>

#include "presym/evolution_space.hpp"

namespace presym {

/// Deterministic generator factory: a fixed seed gives a fixed stream on
/// every platform (mt19937_64 is fully specified by the standard).
std::mt19937_64 make_rng(std::uint64_t seed);

Vec3 random_unit3(std::mt19937_64& rng);

/// Uniform direction, radius uniform in [r_lo, r_hi].
Vec3 random_in_shell(std::mt19937_64& rng, double r_lo, double r_hi);

/// Random lab state: position in the shell, speed uniform in [0, v_max),
/// random unit spin direction, t = 0.
LabFrameState random_lab_state(std::mt19937_64& rng, double r_lo = 1.0,
                               double r_hi = 3.0, double v_max = 0.7);

EvolutionPoint random_point(std::mt19937_64& rng, double r_lo = 1.0,
                            double r_hi = 3.0, double v_max = 0.7);

/// Random metric-skew map with entries of the given scale.
SkewEndomorphism random_skew(std::mt19937_64& rng, double scale);

Vec4 random_vec4(std::mt19937_64& rng, double scale);

/// Random ambient tangent at p, orthogonally projected onto the tangent
/// space of V.
AmbientTangent random_tangent(std::mt19937_64& rng, const EvolutionPoint& p);

}  // namespace presym

#pragma once

#include <optional>

namespace bandgap {

struct SineCosineIntegrals {
    double si = 0.0;
    double ci = 0.0;
};

/// Si(x) and Ci(x) for x > 0, absolute accuracy ~1e-14. Power series up to
/// x = 6, continued fraction for E1(ix) above.
[[nodiscard]] SineCosineIntegrals sine_cosine_integrals(double x);

/// Si alone; defined for every real x (odd function).
[[nodiscard]] double sine_integral(double x);

/// Auxiliary f(z) = Ci(z) sin z - (Si(z) - pi/2) cos z, i.e. the integral of
/// sin(u)/(u + z) over [0, inf). z > 0.
[[nodiscard]] double f_aux(double z);

/// Auxiliary g(z) = -Ci(z) cos z - (Si(z) - pi/2) sin z. z > 0.
[[nodiscard]] double g_aux(double z);

/// Distance integrals of the virtual (both atoms excited) and real (both
/// ground) intermediate states for two atoms in vacuum:
///   virtual = (1/r) int sin(kr)/(k0 + k) dk,  real = (1/r) PV int sin(kr)/(k0 - k) dk.
struct IntermediateStateIntegrals {
    double virtual_state = 0.0;
    double real_state = 0.0;
    /// |virtual| / |real|; empty when |cos(k0 r)| < 1e-6 (real part near a zero).
    std::optional<double> ratio;
};

[[nodiscard]] IntermediateStateIntegrals intermediate_state_integrals(double k0, double r);

}  // namespace bandgap

#pragma once

#include "bandgap/quadrature.hpp"
#include "bandgap/resolvent.hpp"

namespace bandgap {

// Two identical impurities coupled to a 1D tight-binding band
// hbar omega_k = -B cos k. Energies are in the same reduced unit as B,
// wavenumbers in rad per lattice unit, separations in lattice units.

enum class Parity { symmetric, antisymmetric };

struct WireModel {
    double impurity_energy = 0.0;  // E0
    double half_bandwidth = 1.0;   // B
    double coupling = 0.1;         // g
    Parity parity = Parity::symmetric;
    double separation = 10.0;      // x, lattice units (continuous)

    /// B > 0, x >= 0; with require_in_band also |E0| <= B.
    void validate(bool require_in_band = true) const;
};

[[nodiscard]] double electron_dispersion(double k, double half_bandwidth);

/// In-band wavenumber with E0 = -B cos(kappa0), kappa0 in [0, pi].
[[nodiscard]] double kappa0(double impurity_energy, double half_bandwidth);

/// (g^2 B^2 / 2 pi) PV int_{-pi}^{pi} (1 +- cos(k x)) / (z + B cos k) dk.
/// A principal value when |z| < B; a proper integral when |z| > B.
[[nodiscard]] QuadratureResult electronic_pole_integral(double z, const WireModel& model,
                                                        double rel_tol = 1e-12);

/// z = E0 + electronic_pole_integral(z), iterated like solve_pole.
[[nodiscard]] PoleSolution solve_electronic_pole(const WireModel& model, PoleMode mode,
                                                 double tol = 1e-13, double rel_tol = 1e-12);

/// -dz/dx by central differences of the pole solution in the separation. x >= 2.
[[nodiscard]] double electronic_force(const WireModel& model,
                                      PoleMode mode = PoleMode::first_iteration,
                                      double tol = 1e-13, double step = 1e-3);

}  // namespace bandgap

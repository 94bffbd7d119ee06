#pragma once

#include <optional>

#include "bandgap/band_structure.hpp"
#include "bandgap/resolvent.hpp"

namespace bandgap {

// Resonant energy shift and quasi-static force between the two atoms, at first
// iteration of the pole equation with the atomic frequency just above the
// upper gap edge. Forces differentiate only the oscillatory factor (far zone,
// k0 r >> 1). All outputs are in the reduced units of AtomPairConfig.

struct RegimeFlags {
    bool far_zone_ok = false;     // k0 * separation >= 10
    double edge_proximity = 0.0;  // (omega_i - omega_c) / gamma; +inf when gamma = 0
};

struct ForceResult {
    double energy_shift = 0.0;
    double force = 0.0;
    double vacuum_force = 0.0;
    /// |force / vacuum_force|, empty when the vacuum force vanishes.
    std::optional<double> enhancement_ratio;
    RegimeFlags regime;
};

/// delta E(r) = [omega_c k0 / (2 sqrt(A delta))] mu^2 ((mu.r)^2 - 1) cos(k0 r)/r,
/// delta = omega_i - omega_c (or |omega_i - omega_c| + gamma when regularized).
[[nodiscard]] double energy_shift_3d(const AtomPairConfig& cfg, const BandStructure& bands,
                                     bool regularized = false);

/// -d(delta E)/dr keeping the derivative of the oscillating factor:
/// [omega_c k0^2 / (2 sqrt(A delta))] mu^2 ((mu.r)^2 - 1) sin(k0 r)/r.
[[nodiscard]] double force_3d(const AtomPairConfig& cfg, const BandStructure& bands,
                              bool regularized);

/// pi omega_c (|p|^2 - |p_x|^2) / sqrt(A delta) sin(k0 x).
[[nodiscard]] double energy_shift_1d(const AtomPairConfig& cfg, const BandStructure& bands,
                                     bool regularized = false);

/// -pi omega_c k0 (|p|^2 - |p_x|^2) / sqrt(A delta) cos(k0 x).
[[nodiscard]] double force_1d(const AtomPairConfig& cfg, const BandStructure& bands,
                              bool regularized);

/// Free-space resonant force: 3D (w/c)^3 mu^2 ((mu.r)^2 - 1) sin(w r/c)/r,
/// 1D -2 pi (|p|^2 - |p_x|^2) (w/c)^2 cos(w x/c), with w = omega_i.
[[nodiscard]] double vacuum_force(const AtomPairConfig& cfg);

/// Free-space energy shift whose far-zone derivative is vacuum_force:
/// 3D (w/c)^2 mu^2 ((mu.r)^2 - 1) cos(w r/c)/r, 1D 2 pi (|p|^2 - |p_x|^2) (w/c) sin(w x/c).
[[nodiscard]] double vacuum_energy_shift(const AtomPairConfig& cfg);

/// Maximum enhancement of the crystal force over the vacuum force, reached at
/// omega_i = omega_c with the linewidth as regulator; compares envelopes.
/// 3D: [omega_c k0^2 / (2 sqrt(A gamma))] / (omega_i/c)^3
/// 1D: [omega_c k0 / sqrt(A gamma)] / (omega_i/c)^2
[[nodiscard]] double enhancement_ratio(const AtomPairConfig& cfg, const BandStructure& bands,
                                       Dimensionality dimensionality);

/// Linewidth for which the 1D enhancement ratio equals target_ratio. The 1D
/// estimate of ~10 quoted for the slab crystal uses a linewidth that is not
/// given explicitly; this is the value implied by that estimate (inferred).
[[nodiscard]] double back_solved_gamma_1d(const BandStructure& bands, double omega_i,
                                          double target_ratio = 10.0);

/// Energy, force, vacuum baseline and regime flags for cfg.dimensionality.
[[nodiscard]] ForceResult evaluate_forces(const AtomPairConfig& cfg, const BandStructure& bands,
                                          bool regularized);

}  // namespace bandgap

#include "bandgap/forces.hpp"

#include <cmath>
#include <limits>

#include "bandgap/constants.hpp"
#include "bandgap/errors.hpp"

namespace bandgap {
namespace {

// Denominator sqrt(A delta) with the linewidth substitution when regularized.
double edge_root(const AtomPairConfig& cfg, const BandStructure& bands, bool regularized) {
    cfg.validate();
    bands.validate();
    const double detuning = cfg.omega_i - bands.omega_c;
    if (detuning < 0.0) {
        throw DomainError("forces: omega_i below the upper band edge is not modelled");
    }
    if (!regularized) {
        if (detuning == 0.0) {
            throw SingularityError(
                "forces: omega_i at the band edge diverges; use the regularized (gamma) mode");
        }
        return std::sqrt(bands.curvature_A * detuning);
    }
    if (detuning == 0.0 && !(cfg.gamma > 0.0)) {
        throw SingularityError("forces: regularized force at the band edge needs gamma > 0");
    }
    return std::sqrt(bands.curvature_A * (std::abs(detuning) + cfg.gamma));
}

double orientation_factor(const AtomPairConfig& cfg) {
    const double c = cfg.orientation_cosine();
    return cfg.dipole_magnitude_sq * (c * c - 1.0);
}

double vacuum_wavenumber(const AtomPairConfig& cfg) {
    cfg.validate();
    return cfg.omega_i / speed_of_light;
}

}  // namespace

double energy_shift_3d(const AtomPairConfig& cfg, const BandStructure& bands, bool regularized) {
    const double root = edge_root(cfg, bands, regularized);
    const double r = cfg.separation;
    return bands.omega_c * bands.k0 / (2.0 * root) * orientation_factor(cfg) *
           std::cos(bands.k0 * r) / r;
}

double force_3d(const AtomPairConfig& cfg, const BandStructure& bands, bool regularized) {
    const double root = edge_root(cfg, bands, regularized);
    const double r = cfg.separation;
    return bands.omega_c * bands.k0 * bands.k0 / (2.0 * root) * orientation_factor(cfg) *
           std::sin(bands.k0 * r) / r;
}

double energy_shift_1d(const AtomPairConfig& cfg, const BandStructure& bands, bool regularized) {
    const double root = edge_root(cfg, bands, regularized);
    return pi * bands.omega_c * cfg.transverse_coupling() / root *
           std::sin(bands.k0 * cfg.separation);
}

double force_1d(const AtomPairConfig& cfg, const BandStructure& bands, bool regularized) {
    const double root = edge_root(cfg, bands, regularized);
    return -pi * bands.omega_c * bands.k0 * cfg.transverse_coupling() / root *
           std::cos(bands.k0 * cfg.separation);
}

double vacuum_force(const AtomPairConfig& cfg) {
    const double k = vacuum_wavenumber(cfg);
    const double r = cfg.separation;
    if (cfg.dimensionality == Dimensionality::one_d) {
        return -2.0 * pi * cfg.transverse_coupling() * k * k * std::cos(k * r);
    }
    return k * k * k * orientation_factor(cfg) * std::sin(k * r) / r;
}

double vacuum_energy_shift(const AtomPairConfig& cfg) {
    const double k = vacuum_wavenumber(cfg);
    const double r = cfg.separation;
    if (cfg.dimensionality == Dimensionality::one_d) {
        return 2.0 * pi * cfg.transverse_coupling() * k * std::sin(k * r);
    }
    return k * k * orientation_factor(cfg) * std::cos(k * r) / r;
}

double enhancement_ratio(const AtomPairConfig& cfg, const BandStructure& bands,
                         Dimensionality dimensionality) {
    bands.validate();
    if (!(cfg.gamma > 0.0)) {
        throw SingularityError("enhancement_ratio: gamma must be > 0");
    }
    const double k = vacuum_wavenumber(cfg);
    const double root = std::sqrt(bands.curvature_A * cfg.gamma);
    if (dimensionality == Dimensionality::one_d) {
        return bands.omega_c * bands.k0 / root / (k * k);
    }
    return bands.omega_c * bands.k0 * bands.k0 / (2.0 * root) / (k * k * k);
}

double back_solved_gamma_1d(const BandStructure& bands, double omega_i, double target_ratio) {
    bands.validate();
    if (!(omega_i > 0.0) || !(target_ratio > 0.0)) {
        throw DomainError("back_solved_gamma_1d: omega_i and target ratio must be > 0");
    }
    const double k = omega_i / speed_of_light;
    const double root = bands.omega_c * bands.k0 / (target_ratio * k * k);
    return root * root / bands.curvature_A;
}

ForceResult evaluate_forces(const AtomPairConfig& cfg, const BandStructure& bands,
                            bool regularized) {
    ForceResult out;
    const bool one_d = cfg.dimensionality == Dimensionality::one_d;
    out.energy_shift = one_d ? energy_shift_1d(cfg, bands, regularized)
                             : energy_shift_3d(cfg, bands, regularized);
    out.force = one_d ? force_1d(cfg, bands, regularized) : force_3d(cfg, bands, regularized);
    out.vacuum_force = vacuum_force(cfg);
    if (out.vacuum_force != 0.0) {
        out.enhancement_ratio = std::abs(out.force / out.vacuum_force);
    }
    out.regime.far_zone_ok = bands.k0 * cfg.separation >= 10.0;
    const double detuning = cfg.omega_i - bands.omega_c;
    out.regime.edge_proximity =
        cfg.gamma > 0.0 ? detuning / cfg.gamma : std::numeric_limits<double>::infinity();
    return out;
}

}  // namespace bandgap

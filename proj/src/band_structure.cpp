#include "bandgap/band_structure.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "bandgap/constants.hpp"
#include "bandgap/errors.hpp"

namespace bandgap {

CrystalSpec::CrystalSpec(double refractive_index, double slab_half_width)
    : n_(refractive_index), a_(slab_half_width) {
    if (!(n_ > 1.0) || !std::isfinite(n_)) {
        throw DomainError("crystal: refractive index must be > 1");
    }
    if (!(a_ > 0.0) || !std::isfinite(a_)) {
        throw DomainError("crystal: slab half-width must be > 0");
    }
    b_ = 2.0 * n_ * a_;
    period_ = 2.0 * a_ + b_;
}

CrystalSpec CrystalSpec::with_spacing(double refractive_index, double slab_half_width,
                                      double spacing) {
    CrystalSpec spec(refractive_index, slab_half_width);
    // The closed-form dispersion only holds on the b = 2na manifold.
    if (std::abs(spacing - spec.b_) > 8.0 * std::numeric_limits<double>::epsilon() * spec.b_) {
        throw DomainError("crystal: spacing must equal 2 n a");
    }
    return spec;
}

double CrystalSpec::zone_edge() const noexcept { return pi / period_; }

void BandStructure::validate(bool require_curvature) const {
    if (!(omega_v > 0.0) || !(omega_c > omega_v)) {
        throw DomainError("bands: require 0 < omega_v < omega_c");
    }
    if (!(k0 > 0.0)) {
        throw DomainError("bands: k0 must be > 0");
    }
    if (require_curvature && !(curvature_A > 0.0)) {
        throw DomainError("bands: curvature A must be > 0");
    }
    if (gap_index < 1) {
        throw DomainError("bands: gap index must be >= 1");
    }
}

double dispersion(double k, const CrystalSpec& spec, Branch branch) {
    const double edge = spec.zone_edge();
    if (!(k >= 0.0) || k > edge) {
        throw DomainError("dispersion: k outside [0, pi/L]");
    }
    const double n = spec.refractive_index();
    double x = (4.0 * n * std::cos(k * spec.period()) + (1.0 - n) * (1.0 - n)) /
               ((1.0 + n) * (1.0 + n));
    if (std::abs(x) > 1.0) {
        if (std::abs(x) - 1.0 > 16.0 * std::numeric_limits<double>::epsilon()) {
            throw std::logic_error("dispersion: arccos argument out of range");
        }
        x = std::copysign(1.0, x);
    }
    // k = 0 gives x = 1 exactly, so the lower branch starts at exactly zero.
    const double angle = std::acos(x);
    const double scale = speed_of_light / (4.0 * n * spec.slab_half_width());
    return branch == Branch::lower ? scale * angle : scale * (2.0 * pi - angle);
}

BandStructure band_edges(const CrystalSpec& spec, int q) {
    if (q != 1) {
        throw UnsupportedError("band_edges: only the first gap (q = 1) is supported, got q = " +
                               std::to_string(q));
    }
    BandStructure bands;
    bands.gap_index = 1;
    bands.k0 = spec.zone_edge();
    bands.omega_v = dispersion(bands.k0, spec, Branch::lower);
    bands.omega_c = dispersion(bands.k0, spec, Branch::upper);
    return bands;
}

double effective_mass(const CrystalSpec& spec, Edge edge) {
    // k0 is the zone boundary, so the second derivative uses a one-sided
    // fourth-order stencil reaching into the zone.
    static constexpr std::array<double, 6> weights{45.0, -154.0, 214.0, -156.0, 61.0, -10.0};
    const double k0 = spec.zone_edge();
    // The quadratic region shrinks with the gap: its width in k is about
    // k0 sqrt(1 + X(k0)) = k0 sqrt(2) (n - 1)/(n + 1).
    const double n = spec.refractive_index();
    const double h = 1e-3 * k0 * std::sqrt(2.0) * (n - 1.0) / (n + 1.0);
    const Branch branch = edge == Edge::lower ? Branch::lower : Branch::upper;
    double acc = 0.0;
    for (std::size_t j = 0; j < weights.size(); ++j) {
        acc += weights[j] * dispersion(k0 - static_cast<double>(j) * h, spec, branch);
    }
    const double second = acc / (12.0 * h * h);
    return 0.5 * std::abs(second);
}

BandStructure make_band_structure(const CrystalSpec& spec) {
    BandStructure bands = band_edges(spec, 1);
    bands.curvature_A = effective_mass(spec, Edge::upper);
    return bands;
}

double dispersion_em(double k, const BandStructure& bands, Side side) {
    const double u = k - bands.k0;
    return side == Side::below ? bands.omega_v - bands.curvature_A * u * u
                               : bands.omega_c + bands.curvature_A * u * u;
}

double dos(double omega, const BandStructure& bands) {
    if (omega == bands.omega_c || omega == bands.omega_v) {
        throw SingularityError("dos: van Hove singularity at a band edge; regularize the frequency");
    }
    if (omega > bands.omega_v && omega < bands.omega_c) {
        return 0.0;
    }
    const double distance = omega > bands.omega_c ? omega - bands.omega_c : bands.omega_v - omega;
    return bands.k0 * bands.k0 / std::sqrt(bands.curvature_A) * 2.0 * pi / std::sqrt(distance);
}

}  // namespace bandgap

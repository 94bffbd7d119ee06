#pragma once

// Model photonic crystal: a periodic stack of dielectric slabs of width 2a and
// index n separated by vacuum gaps b = 2na. Frequencies are angular (rad/s).

namespace bandgap {

class CrystalSpec {
public:
    /// Builds the crystal with b = 2na, L = 2a + b. Throws DomainError if n <= 1 or a <= 0.
    CrystalSpec(double refractive_index, double slab_half_width);

    /// Validating constructor for callers that carry an explicit spacing; b must equal 2na.
    static CrystalSpec with_spacing(double refractive_index, double slab_half_width, double spacing);

    [[nodiscard]] double refractive_index() const noexcept { return n_; }
    [[nodiscard]] double slab_half_width() const noexcept { return a_; }
    [[nodiscard]] double spacing() const noexcept { return b_; }
    [[nodiscard]] double period() const noexcept { return period_; }
    /// Right end of the reduced zone, pi / L.
    [[nodiscard]] double zone_edge() const noexcept;

private:
    double n_;
    double a_;
    double b_;
    double period_;
};

struct BandStructure {
    double omega_v = 0.0;      // lower gap edge, rad/s
    double omega_c = 0.0;      // upper gap edge, rad/s
    double k0 = 0.0;           // gap wavenumber, rad/m
    double curvature_A = 0.0;  // effective-mass curvature, m^2/s (0 when not computed)
    int gap_index = 1;

    /// Checks 0 < omega_v < omega_c, k0 > 0 and, when require_curvature, A > 0.
    void validate(bool require_curvature = true) const;
};

enum class Branch { lower = 1, upper = 2 };
enum class Edge { lower, upper };
enum class Side { below, above };

/// Dispersion omega(k) of the slab crystal on the reduced zone [0, pi/L].
[[nodiscard]] double dispersion(double k, const CrystalSpec& spec, Branch branch);

/// First-gap edges at k0 = pi/L. Curvature is left at zero.
[[nodiscard]] BandStructure band_edges(const CrystalSpec& spec, int q = 1);

/// |omega''(k0)| / 2 on the branch bounding the requested edge.
[[nodiscard]] double effective_mass(const CrystalSpec& spec, Edge edge);

/// Band edges plus the upper-edge curvature, the quantity used by the resonant model.
[[nodiscard]] BandStructure make_band_structure(const CrystalSpec& spec);

/// Quadratic expansion about the gap edge: omega_v - A u^2 below, omega_c + A u^2 above.
[[nodiscard]] double dispersion_em(double k, const BandStructure& bands, Side side);

/// Density of photon states in the effective-mass model. Zero inside the gap,
/// proportional to 1/sqrt(|omega - edge|) outside it.
[[nodiscard]] double dos(double omega, const BandStructure& bands);

}  // namespace bandgap

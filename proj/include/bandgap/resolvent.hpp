#pragma once

#include <vector>

#include "bandgap/band_structure.hpp"
#include "bandgap/dipole.hpp"

namespace bandgap {

enum class Dimensionality { one_d, three_d };

/// Two identical two-level atoms in the symmetric one-excitation state.
///
/// dipole_magnitude_sq is a reduced coupling: it multiplies the distance
/// integral so that coupling x integral is a frequency shift in rad/s. Only
/// ratios are unit-free observables.
struct AtomPairConfig {
    double omega_i = 0.0;               // atomic transition, rad/s
    double gamma = 0.0;                 // linewidth of the symmetric state, rad/s
    double separation = 0.0;            // r (3D) or x (1D), m
    double dipole_magnitude_sq = 1.0;   // reduced units
    Vec3 dipole_unit_vector{0.0, 0.0, 1.0};
    Vec3 separation_direction{1.0, 0.0, 0.0};  // r_hat; the crystal axis in 1D
    Dimensionality dimensionality = Dimensionality::three_d;

    void validate() const;
    /// mu_hat . r_hat
    [[nodiscard]] double orientation_cosine() const noexcept;
    /// |p|^2 - |p_x|^2: the part of the coupling transverse to the crystal axis.
    [[nodiscard]] double transverse_coupling() const noexcept;
};

enum class IntegralMethod { closed, quadrature, near_edge };

struct IntegralResult {
    double value = 0.0;
    double error = 0.0;       // quadrature estimate; 0 for analytic methods
    bool far_zone_ok = true;  // k0 * separation >= 10
};

/// Distance integral of the 3D pole equation,
///   PV int_0^inf du (omega_c + A u^2)/(zeta - omega_c - A u^2) sin((u+k0) r)/((u+k0) r),
/// for zeta > omega_c. closed is exact (Si/Ci of q r with q = sqrt((zeta-omega_c)/A));
/// near_edge is its q r >> 1, q << k0 limit -(pi omega_c / (2 sqrt(A (zeta-omega_c)))) cos(k0 r)/(k0 r).
[[nodiscard]] IntegralResult integral_I3(double zeta, double r, const BandStructure& bands,
                                         IntegralMethod method, double rel_tol = 1e-10);

/// 1D counterpart with cos((u+k0) x). The integrand tends to -cos((u+k0) x) at
/// large u; that tail is taken in the Abel sense and contributes sin(k0 x)/x.
/// near_edge: (pi omega_c / (2 sqrt(A (zeta-omega_c)))) sin(k0 x).
[[nodiscard]] IntegralResult integral_I1(double zeta, double x, const BandStructure& bands,
                                         IntegralMethod method, double rel_tol = 1e-10);

enum class PoleMode { first_iteration, fixed_point };

struct PoleSolution {
    double z_over_hbar = 0.0;
    PoleMode mode = PoleMode::first_iteration;
    int iterations = 0;
    bool converged = false;
    double residual = 0.0;
    std::vector<double> trace;  // iterates, starting value first
};

/// Right-hand side of the pole equation at zeta, omitting the
/// distance-independent shifts (they cancel in forces).
[[nodiscard]] double pole_rhs(double zeta, const AtomPairConfig& cfg, const BandStructure& bands,
                              IntegralMethod method = IntegralMethod::near_edge);

/// first_iteration evaluates the right-hand side once at zeta = omega_i.
/// fixed_point iterates zeta <- (1 - eta) zeta + eta rhs(zeta), eta = 0.5, until
/// successive iterates differ by at most tol (rad/s) or 100 iterations pass;
/// failure, or zeta dropping to omega_c, throws ConvergenceError with the trace.
[[nodiscard]] PoleSolution solve_pole(const AtomPairConfig& cfg, const BandStructure& bands,
                                      PoleMode mode, double tol,
                                      IntegralMethod method = IntegralMethod::near_edge);

inline constexpr double fixed_point_damping = 0.5;
inline constexpr int fixed_point_max_iterations = 100;

}  // namespace bandgap

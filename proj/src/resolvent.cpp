#include "bandgap/resolvent.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bandgap/constants.hpp"
#include "bandgap/errors.hpp"
#include "bandgap/quadrature.hpp"
#include "bandgap/special_functions.hpp"

namespace bandgap {
namespace {

constexpr double unit_norm_tol = 1e-12;

struct EdgeOffset {
    double detuning;  // zeta - omega_c
    double q;         // sqrt(detuning / A)
};

EdgeOffset edge_offset(double zeta, double separation, const BandStructure& bands) {
    bands.validate();
    if (!(zeta > bands.omega_c)) {
        throw DomainError("distance integral: zeta must lie above the upper band edge omega_c");
    }
    if (!(separation > 0.0)) {
        throw DomainError("distance integral: separation must be > 0");
    }
    const double detuning = zeta - bands.omega_c;
    return {detuning, std::sqrt(detuning / bands.curvature_A)};
}

// pi/2 - Si(x) without cancellation at large x.
double si_complement(double x) {
    return f_aux(x) * std::cos(x) + g_aux(x) * std::sin(x);
}

// (omega_c + A u^2) / (zeta - omega_c - A u^2), with the denominator factored
// so the pole at u = q is resolved to full precision.
double resonant_factor(double u, double q, const BandStructure& bands) {
    return (bands.omega_c + bands.curvature_A * u * u) /
           (bands.curvature_A * (q - u) * (q + u));
}

double near_edge_amplitude(double detuning, const BandStructure& bands) {
    return pi * bands.omega_c / (2.0 * std::sqrt(bands.curvature_A * detuning));
}

// Size of the near-edge amplitude, capped where q r < 1.
double integral_scale(double q, double r, const BandStructure& bands) {
    return pi * bands.omega_c / (2.0 * bands.curvature_A * std::max(q, 1.0 / r));
}

}  // namespace

void AtomPairConfig::validate() const {
    if (!(omega_i > 0.0)) throw DomainError("atoms: omega_i must be > 0");
    if (!(separation > 0.0)) throw DomainError("atoms: separation must be > 0");
    if (!(gamma >= 0.0)) throw DomainError("atoms: gamma must be >= 0");
    if (!(dipole_magnitude_sq >= 0.0)) throw DomainError("atoms: dipole_magnitude_sq must be >= 0");
    if (std::abs(norm(dipole_unit_vector) - 1.0) > unit_norm_tol) {
        throw DomainError("atoms: dipole orientation must be a unit vector");
    }
    if (std::abs(norm(separation_direction) - 1.0) > unit_norm_tol) {
        throw DomainError("atoms: separation direction must be a unit vector");
    }
}

double AtomPairConfig::orientation_cosine() const noexcept {
    return dot(dipole_unit_vector, separation_direction);
}

double AtomPairConfig::transverse_coupling() const noexcept {
    const double c = orientation_cosine();
    return dipole_magnitude_sq * (1.0 - c * c);
}

IntegralResult integral_I3(double zeta, double r, const BandStructure& bands,
                           IntegralMethod method, double rel_tol) {
    const auto [detuning, q] = edge_offset(zeta, r, bands);
    const double k0 = bands.k0;
    IntegralResult out;
    out.far_zone_ok = k0 * r >= 10.0;
    switch (method) {
        case IntegralMethod::near_edge: {
            out.value = -near_edge_amplitude(detuning, bands) * std::cos(k0 * r) / (k0 * r);
            return out;
        }
        case IntegralMethod::closed: {
            if (std::abs(q - k0) <= 1e-8 * k0) {
                throw DomainError("integral_I3: closed form undefined for (zeta - omega_c)/A = k0^2");
            }
            // (omega_c + A u^2)/(A (q^2 - u^2)) = -1 + (zeta/A)/(q^2 - u^2); partial
            // fractions of 1/((u + k0)(q - u)(q + u)) against sin((u + k0) r).
            const double weight = zeta / bands.curvature_A;
            const double alpha = 1.0 / ((q - k0) * (q + k0));
            const double beta = 1.0 / (2.0 * q * (q + k0));
            const double gamma = 1.0 / (2.0 * q * (k0 - q));
            const double tail_k0 = si_complement(k0 * r);
            const auto [si, ci] = sine_cosine_integrals(q * r);
            const double phi = (k0 + q) * r;
            const double psi = (k0 - q) * r;
            const double near_pole = beta * (ci * std::sin(phi) - (pi / 2.0 + si) * std::cos(phi));
            const double image = gamma * (-ci * std::sin(psi) + (pi / 2.0 - si) * std::cos(psi));
            out.value = (-tail_k0 + weight * (alpha * tail_k0 + near_pole + image)) / r;
            return out;
        }
        case IntegralMethod::quadrature: {
            PVProblem problem;
            problem.integrand = [q, k0, r, &bands](double u) {
                const double kr = (u + k0) * r;
                return resonant_factor(u, q, bands) * std::sin(kr) / kr;
            };
            problem.pole = q;
            problem.lower = 0.0;
            problem.half_period = pi / r;
            problem.rel_tol = rel_tol;
            problem.abs_tol = 1e-3 * rel_tol * integral_scale(q, r, bands) / (k0 * r);
            const auto result = pv_quadrature(problem);
            out.value = result.value;
            out.error = result.error;
            return out;
        }
    }
    throw std::logic_error("integral_I3: unknown method");
}

IntegralResult integral_I1(double zeta, double x, const BandStructure& bands,
                           IntegralMethod method, double rel_tol) {
    const auto [detuning, q] = edge_offset(zeta, x, bands);
    const double k0 = bands.k0;
    IntegralResult out;
    out.far_zone_ok = k0 * x >= 10.0;
    switch (method) {
        case IntegralMethod::near_edge: {
            out.value = near_edge_amplitude(detuning, bands) * std::sin(k0 * x);
            return out;
        }
        case IntegralMethod::closed: {
            // -1 asymptote (Abel value sin(k0 x)/x) plus (zeta/A) PV int cos((u+k0)x)/(q^2-u^2).
            const double weight = zeta / bands.curvature_A;
            const auto [si, ci] = sine_cosine_integrals(q * x);
            const double phi = (k0 + q) * x;
            const double psi = (k0 - q) * x;
            const double pv = (ci * (std::cos(phi) - std::cos(psi)) +
                               (pi / 2.0) * (std::sin(phi) - std::sin(psi)) +
                               si * (std::sin(phi) + std::sin(psi))) /
                              (2.0 * q);
            out.value = std::sin(k0 * x) / x + weight * pv;
            return out;
        }
        case IntegralMethod::quadrature: {
            PVProblem problem;
            problem.integrand = [q, k0, x, &bands](double u) {
                return resonant_factor(u, q, bands) * std::cos((u + k0) * x);
            };
            problem.pole = q;
            problem.lower = 0.0;
            problem.half_period = pi / x;
            problem.rel_tol = rel_tol;
            problem.abs_tol = 1e-3 * rel_tol * integral_scale(q, x, bands);
            const auto result = pv_quadrature(problem);
            out.value = result.value;
            out.error = result.error;
            return out;
        }
    }
    throw std::logic_error("integral_I1: unknown method");
}

double pole_rhs(double zeta, const AtomPairConfig& cfg, const BandStructure& bands,
                IntegralMethod method) {
    const double r = cfg.separation;
    if (cfg.dimensionality == Dimensionality::one_d) {
        const double coupling = cfg.transverse_coupling();
        if (coupling == 0.0) return cfg.omega_i;
        return cfg.omega_i + 2.0 * coupling * integral_I1(zeta, r, bands, method).value;
    }
    if (cfg.dipole_magnitude_sq == 0.0) return cfg.omega_i;
    const double k0 = bands.k0;
    if (method == IntegralMethod::near_edge) {
        // I = C cos(k0 r)/(k0 r): the operator acts on cos(k0 r)/r in the far zone.
        const auto offset = edge_offset(zeta, r, bands);
        const double amplitude = -near_edge_amplitude(offset.detuning, bands);
        const double tensor = dipole_tensor(cfg.dipole_unit_vector, cfg.separation_direction, k0,
                                            r, TensorMode::far_zone);
        return cfg.omega_i + cfg.dipole_magnitude_sq / pi * (amplitude / k0) * tensor;
    }
    // Radial derivatives of I(r) by fourth-order central differences.
    const double h = 1e-3 * std::min(r, 1.0 / k0);
    auto value_at = [&](double rr) { return integral_I3(zeta, rr, bands, method, 1e-13).value; };
    const double fm2 = value_at(r - 2.0 * h);
    const double fm1 = value_at(r - h);
    const double f0 = value_at(r);
    const double fp1 = value_at(r + h);
    const double fp2 = value_at(r + 2.0 * h);
    const double g1 = (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * h);
    const double g2 = (-fm2 + 16.0 * fm1 - 30.0 * f0 + 16.0 * fp1 - fp2) / (12.0 * h * h);
    return cfg.omega_i +
           cfg.dipole_magnitude_sq / pi * transverse_operator(cfg.orientation_cosine(), r, g1, g2);
}

PoleSolution solve_pole(const AtomPairConfig& cfg, const BandStructure& bands, PoleMode mode,
                        double tol, IntegralMethod method) {
    cfg.validate();
    bands.validate();
    if (!(cfg.omega_i > bands.omega_c)) {
        throw DomainError("solve_pole: omega_i must lie above the upper band edge");
    }
    PoleSolution solution;
    solution.mode = mode;
    solution.trace.push_back(cfg.omega_i);
    if (mode == PoleMode::first_iteration) {
        solution.z_over_hbar = pole_rhs(cfg.omega_i, cfg, bands, method);
        solution.iterations = 1;
        solution.converged = true;
        solution.residual = std::abs(solution.z_over_hbar - cfg.omega_i);
        solution.trace.push_back(solution.z_over_hbar);
        return solution;
    }
    if (!(tol > 0.0)) {
        throw DomainError("solve_pole: tolerance must be > 0");
    }
    double zeta = cfg.omega_i;
    for (int n = 1; n <= fixed_point_max_iterations; ++n) {
        if (!(zeta > bands.omega_c)) {
            throw ConvergenceError("solve_pole: iterate fell to or below omega_c", zeta,
                                   std::abs(zeta - cfg.omega_i), solution.trace);
        }
        const double rhs = pole_rhs(zeta, cfg, bands, method);
        const double next = (1.0 - fixed_point_damping) * zeta + fixed_point_damping * rhs;
        const double step = std::abs(next - zeta);
        solution.trace.push_back(next);
        zeta = next;
        if (!std::isfinite(zeta)) break;
        if (step <= tol) {
            solution.z_over_hbar = zeta;
            solution.iterations = n;
            solution.converged = true;
            solution.residual = step;
            return solution;
        }
    }
    throw ConvergenceError("solve_pole: fixed-point iteration did not converge in " +
                               std::to_string(fixed_point_max_iterations) + " iterations",
                           zeta, std::abs(solution.trace.back() - solution.trace[solution.trace.size() - 2]),
                           solution.trace);
}

}  // namespace bandgap

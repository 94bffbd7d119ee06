#include "bandgap/electronic.hpp"

#include <cmath>
#include <string>

#include "bandgap/constants.hpp"
#include "bandgap/errors.hpp"

namespace bandgap {

void WireModel::validate(bool require_in_band) const {
    if (!(half_bandwidth > 0.0)) throw DomainError("wire: half bandwidth B must be > 0");
    if (!(separation >= 0.0)) throw DomainError("wire: separation must be >= 0");
    if (!std::isfinite(coupling)) throw DomainError("wire: coupling must be finite");
    if (require_in_band && std::abs(impurity_energy) > half_bandwidth) {
        throw DomainError("wire: impurity energy lies outside the band");
    }
}

double electron_dispersion(double k, double half_bandwidth) {
    return -half_bandwidth * std::cos(k);
}

double kappa0(double impurity_energy, double half_bandwidth) {
    if (!(half_bandwidth > 0.0)) throw DomainError("kappa0: B must be > 0");
    if (std::abs(impurity_energy) > half_bandwidth) {
        throw DomainError("kappa0: impurity energy outside the band, |E0| > B");
    }
    return std::acos(-impurity_energy / half_bandwidth);
}

QuadratureResult electronic_pole_integral(double z, const WireModel& model, double rel_tol) {
    model.validate(false);
    const double b = model.half_bandwidth;
    const double x = model.separation;
    const double sign = model.parity == Parity::symmetric ? 1.0 : -1.0;
    const double prefactor = model.coupling * model.coupling * b * b / (2.0 * pi);

    // The integrand is even in k: twice the integral over [0, pi].
    PVProblem problem;
    problem.lower = 0.0;
    problem.upper = pi;
    problem.rel_tol = rel_tol;
    // Integrand scale is 1/B; the value vanishes at nodes of the shift.
    problem.abs_tol = 1e-13 / b;
    if (std::abs(z) < b) {
        const double kappa = std::acos(-z / b);
        // z + B cos k = -2B sin((k + kappa)/2) sin((k - kappa)/2)
        problem.integrand = [=](double k) {
            const double denom = -2.0 * b * std::sin(0.5 * (k + kappa)) * std::sin(0.5 * (k - kappa));
            return (1.0 + sign * std::cos(k * x)) / denom;
        };
        problem.pole = kappa;
    } else if (std::abs(z) > b) {
        problem.integrand = [=](double k) { return (1.0 + sign * std::cos(k * x)) / (z + b * std::cos(k)); };
    } else {
        throw SingularityError("electronic_pole_integral: z at the band edge, |z| = B");
    }
    QuadratureResult result = pv_quadrature(problem);
    result.value *= 2.0 * prefactor;
    result.error *= 2.0 * std::abs(prefactor);
    return result;
}

PoleSolution solve_electronic_pole(const WireModel& model, PoleMode mode, double tol,
                                   double rel_tol) {
    model.validate(true);
    const double e0 = model.impurity_energy;
    PoleSolution solution;
    solution.mode = mode;
    solution.trace.push_back(e0);
    if (model.coupling == 0.0) {
        solution.z_over_hbar = e0;
        solution.iterations = 1;
        solution.converged = true;
        solution.trace.push_back(e0);
        return solution;
    }
    if (mode == PoleMode::first_iteration) {
        solution.z_over_hbar = e0 + electronic_pole_integral(e0, model, rel_tol).value;
        solution.iterations = 1;
        solution.converged = true;
        solution.residual = std::abs(solution.z_over_hbar - e0);
        solution.trace.push_back(solution.z_over_hbar);
        return solution;
    }
    if (!(tol > 0.0)) throw DomainError("solve_electronic_pole: tolerance must be > 0");
    double z = e0;
    for (int n = 1; n <= fixed_point_max_iterations; ++n) {
        double rhs = 0.0;
        try {
            rhs = e0 + electronic_pole_integral(z, model, rel_tol).value;
        } catch (const SingularityError&) {
            throw ConvergenceError("solve_electronic_pole: iterate reached the band edge", z, 0.0,
                                   solution.trace);
        }
        const double next = (1.0 - fixed_point_damping) * z + fixed_point_damping * rhs;
        const double step = std::abs(next - z);
        solution.trace.push_back(next);
        z = next;
        if (step <= tol) {
            solution.z_over_hbar = z;
            solution.iterations = n;
            solution.converged = true;
            solution.residual = step;
            return solution;
        }
    }
    throw ConvergenceError("solve_electronic_pole: fixed-point iteration did not converge in " +
                               std::to_string(fixed_point_max_iterations) + " iterations",
                           z, std::abs(solution.trace.back() - solution.trace[solution.trace.size() - 2]),
                           solution.trace);
}

double electronic_force(const WireModel& model, PoleMode mode, double tol, double step) {
    model.validate(true);
    if (model.separation < 2.0) {
        throw DomainError("electronic_force: separation must be >= 2 lattice units");
    }
    if (!(step > 0.0) || step >= 1.0) {
        throw DomainError("electronic_force: step must lie in (0, 1)");
    }
    WireModel plus = model;
    WireModel minus = model;
    plus.separation += step;
    minus.separation -= step;
    const double zp = solve_electronic_pole(plus, mode, tol).z_over_hbar;
    const double zm = solve_electronic_pole(minus, mode, tol).z_over_hbar;
    return -(zp - zm) / (2.0 * step);
}

}  // namespace bandgap

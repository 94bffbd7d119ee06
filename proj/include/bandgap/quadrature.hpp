#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <optional>

namespace bandgap {

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;  // estimated absolute error
    std::size_t evaluations = 0;
};

/// Principal-value (or plain improper) integral of a real function.
///
/// With a pole p the window [p - w, p + w], w = min(p - lower, upper - p), is
/// folded onto [0, w] as f(p + t) + f(p - t), which cancels the 1/(u - p)
/// singularity exactly; the rest is integrated with adaptive Gauss-Kronrod.
/// An infinite upper limit is handled either by a rational map (decaying
/// integrands) or, when half_period is set, by summing half-period panels and
/// extrapolating the partial sums with Wynn's epsilon algorithm. The latter
/// also returns the Abel value of tails that oscillate with a constant
/// envelope, e.g. the integral of cos(ux) over [0, inf) gives 0.
struct PVProblem {
    std::function<double(double)> integrand;
    std::optional<double> pole;
    double lower = 0.0;
    double upper = std::numeric_limits<double>::infinity();
    double rel_tol = 1e-10;
    double abs_tol = 1e-14;
    /// Half period of the tail oscillation; required for oscillatory infinite tails.
    std::optional<double> half_period;
    /// Budget of Gauss-Kronrod panels per finite piece, and of tail panels.
    std::size_t max_panels = 4000;
};

/// Throws DomainError for malformed problems and ConvergenceError (carrying the
/// best estimate) when the panel budget is exhausted.
[[nodiscard]] QuadratureResult pv_quadrature(const PVProblem& problem);

/// Globally adaptive 21-point Gauss-Kronrod on a finite interval.
[[nodiscard]] QuadratureResult adaptive_gauss_kronrod(const std::function<double(double)>& f,
                                                      double a, double b, double abs_tol,
                                                      double rel_tol,
                                                      std::size_t max_panels = 4000);

/// Wynn epsilon extrapolation of a sequence of partial sums. Returns the last
/// element when fewer than three are given.
[[nodiscard]] double wynn_epsilon(const double* partial_sums, std::size_t count);

}  // namespace bandgap

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace bandgap {

/// Input outside the domain where an operation is defined.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Evaluation at a point where the model quantity diverges (band edge, zero linewidth).
class SingularityError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Requested feature lies outside what the model supports (e.g. higher gaps).
class UnsupportedError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An iterative or adaptive procedure ran out of budget. Carries the best
/// estimate so callers can still report it.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double best_estimate, double error_bound,
                     std::vector<double> trace = {})
        : std::runtime_error(what),
          best_estimate_(best_estimate),
          error_bound_(error_bound),
          trace_(std::move(trace)) {}

    [[nodiscard]] double best_estimate() const noexcept { return best_estimate_; }
    [[nodiscard]] double error_bound() const noexcept { return error_bound_; }
    [[nodiscard]] const std::vector<double>& trace() const noexcept { return trace_; }

private:
    double best_estimate_;
    double error_bound_;
    std::vector<double> trace_;
};

}  // namespace bandgap

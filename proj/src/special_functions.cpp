#include "bandgap/special_functions.hpp"

#include <cmath>
#include <complex>
#include <limits>

#include "bandgap/constants.hpp"
#include "bandgap/errors.hpp"

namespace bandgap {
namespace {

constexpr double series_limit = 6.0;
constexpr double eps = std::numeric_limits<double>::epsilon();

SineCosineIntegrals series(double x) {
    const double x2 = x * x;
    // Si: sum (-1)^k x^(2k+1) / ((2k+1) (2k+1)!)
    double term = x;  // x^(2k+1)/(2k+1)! with sign
    double si = x;
    for (int k = 1; k < 100; ++k) {
        term *= -x2 / ((2.0 * k) * (2.0 * k + 1.0));
        const double add = term / (2.0 * k + 1.0);
        si += add;
        if (std::abs(add) < eps * 0.01 * std::abs(si)) break;
    }
    // Ci: gamma + ln x + sum_{k>=1} (-1)^k x^(2k) / (2k (2k)!)
    term = 1.0;
    double sum = 0.0;
    for (int k = 1; k < 100; ++k) {
        term *= -x2 / ((2.0 * k - 1.0) * (2.0 * k));
        const double add = term / (2.0 * k);
        sum += add;
        if (std::abs(add) < eps * 0.01 * (std::abs(sum) + 1.0)) break;
    }
    return {si, euler_gamma + std::log(x) + sum};
}

// e^{ix} E1(ix) = g(x) - i f(x), modified Lentz evaluation of the continued
// fraction. Converges quickly for x > 2.
std::complex<double> scaled_e1_imag(double x) {
    using cd = std::complex<double>;
    constexpr double tiny = 1e-300;
    cd b(1.0, x);
    cd c(1.0 / tiny, 0.0);
    cd d = 1.0 / b;
    cd h = d;
    for (int i = 2; i < 1000; ++i) {
        const double a = -static_cast<double>((i - 1) * (i - 1));
        b += 2.0;
        d = 1.0 / (a * d + b);
        c = b + a / c;
        const cd del = c * d;
        h *= del;
        if (std::abs(del.real() - 1.0) + std::abs(del.imag()) < eps) {
            return h;
        }
    }
    throw ConvergenceError("sine/cosine integral continued fraction did not converge", 0.0,
                           std::numeric_limits<double>::infinity());
}

}  // namespace

SineCosineIntegrals sine_cosine_integrals(double x) {
    if (!(x > 0.0)) {
        throw DomainError("Ci(x) requires x > 0");
    }
    if (x <= series_limit) {
        return series(x);
    }
    // E1(ix) = -Ci(x) + i (Si(x) - pi/2)
    const std::complex<double> e1 = std::polar(1.0, -x) * scaled_e1_imag(x);
    return {pi / 2.0 + e1.imag(), -e1.real()};
}

double sine_integral(double x) {
    if (x == 0.0) return 0.0;
    const double s = sine_cosine_integrals(std::abs(x)).si;
    return x < 0.0 ? -s : s;
}

double f_aux(double z) {
    if (!(z > 0.0)) {
        throw DomainError("f_aux requires z > 0");
    }
    if (z <= series_limit) {
        const auto [si, ci] = series(z);
        return ci * std::sin(z) - (si - pi / 2.0) * std::cos(z);
    }
    return -scaled_e1_imag(z).imag();
}

double g_aux(double z) {
    if (!(z > 0.0)) {
        throw DomainError("g_aux requires z > 0");
    }
    if (z <= series_limit) {
        const auto [si, ci] = series(z);
        return -ci * std::cos(z) - (si - pi / 2.0) * std::sin(z);
    }
    return scaled_e1_imag(z).real();
}

IntermediateStateIntegrals intermediate_state_integrals(double k0, double r) {
    if (!(k0 > 0.0) || !(r > 0.0)) {
        throw DomainError("intermediate_state_integrals requires k0 > 0 and r > 0");
    }
    const double z = k0 * r;
    const double f = f_aux(z);
    IntermediateStateIntegrals out;
    out.virtual_state = f / r;
    out.real_state = f / r - pi * std::cos(z) / r;
    if (std::abs(std::cos(z)) >= 1e-6) {
        out.ratio = std::abs(out.virtual_state) / std::abs(out.real_state);
    }
    return out;
}

}  // namespace bandgap

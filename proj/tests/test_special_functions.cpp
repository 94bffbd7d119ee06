#include <doctest.h>

#include <cmath>
#include <numbers>

#include <gsl/gsl_sf_expint.h>

#include "bandgap/errors.hpp"
#include "bandgap/special_functions.hpp"
#include "oracles.hpp"

using namespace bandgap;
using std::numbers::pi;

namespace {

// int_0^inf trig(u)/(u + z) du, integrated directly.
double shifted_integral(double z, bool sine) {
    auto f = [=](double u) { return (sine ? std::sin(u) : std::cos(u)) / (u + z); };
    const double head = oracle::integrate(f, 0.0, 40.0 * pi, 400);
    return head + oracle::oscillatory_tail(f, 40.0 * pi, pi, 0, 30);
}

}  // namespace

TEST_CASE("Si and Ci against GSL") {
    for (double x = 1e-3; x < 2e3; x *= 1.13) {
        const auto [si, ci] = sine_cosine_integrals(x);
        CHECK(std::abs(si - gsl_sf_Si(x)) < 1e-12);
        CHECK(std::abs(ci - gsl_sf_Ci(x)) < 1e-12);
    }
    for (double x : {5.9, 5.999999, 6.0, 6.000001, 6.1}) {
        const auto [si, ci] = sine_cosine_integrals(x);
        CHECK(std::abs(si - gsl_sf_Si(x)) < 1e-13);
        CHECK(std::abs(ci - gsl_sf_Ci(x)) < 1e-13);
    }
}

TEST_CASE("Si and Ci reference values") {
    const double si_pi = oracle::integrate([](double t) { return std::sin(t) / t; }, 0.0, pi, 8);
    CHECK(std::abs(sine_cosine_integrals(pi).si - si_pi) < 1e-13);
    CHECK(si_pi == doctest::Approx(1.851937).epsilon(1e-6));

    // gamma + ln x + sum_k (-1)^k x^{2k} / (2k (2k)!) at x = 1
    double sum = 0.0;
    double fact = 1.0;
    for (int k = 1; k < 20; ++k) {
        fact *= (2.0 * k - 1.0) * (2.0 * k);
        sum += ((k % 2) ? -1.0 : 1.0) / (2.0 * k * fact);
    }
    const double ci_1 = std::numbers::egamma + sum;
    CHECK(std::abs(sine_cosine_integrals(1.0).ci - ci_1) < 1e-14);
    CHECK(ci_1 == doctest::Approx(0.337404).epsilon(1e-6));

    CHECK(std::abs(sine_cosine_integrals(1e4).si - pi / 2.0) < 1e-4);
}

TEST_CASE("Si/Ci domain") {
    CHECK_THROWS_AS((void)sine_cosine_integrals(0.0), DomainError);
    CHECK_THROWS_AS((void)sine_cosine_integrals(-1.0), DomainError);
    CHECK(sine_integral(0.0) == 0.0);
    for (double x : {0.3, 3.0, 30.0}) CHECK(sine_integral(-x) == -sine_integral(x));
    CHECK_THROWS_AS((void)f_aux(0.0), DomainError);
}

TEST_CASE("auxiliary f and g against direct quadrature") {
    for (double z : {0.5, 1.0, 5.0, 20.0, 100.0}) {
        CHECK(std::abs(f_aux(z) - shifted_integral(z, true)) < 1e-10);
        CHECK(std::abs(g_aux(z) - shifted_integral(z, false)) < 1e-10);
    }
    CHECK(f_aux(1e-10) == doctest::Approx(pi / 2.0).epsilon(1e-8));
    CHECK(f_aux(100.0) * 100.0 == doctest::Approx(1.0).epsilon(1e-2));
    double prev = f_aux(5.0);
    for (double z = 6.0; z <= 100.0; z += 1.0) {
        const double f = f_aux(z);
        CHECK(f > 0.0);
        CHECK(f < prev);
        prev = f;
    }
}

TEST_CASE("intermediate-state integrals") {
    const double k0 = 1.0;
    SUBCASE("real part is the principal value") {
        const double r = 20.0;
        auto f = [=](double k) { return std::sin(k * r) / (k0 - k); };
        const double pv = oracle::pv_window(f, 0.0, 2.0, k0) + oracle::oscillatory_tail(f, 2.0, pi / r);
        const auto s = intermediate_state_integrals(k0, r);
        CHECK(std::abs(s.real_state - pv / r) < 1e-8);
        CHECK(std::abs(s.real_state - (f_aux(k0 * r) - pi * std::cos(k0 * r)) / r) < 1e-15);
        CHECK(std::abs(s.virtual_state - f_aux(k0 * r) / r) < 1e-16);
    }
    SUBCASE("virtual states are negligible far away") {
        const auto s = intermediate_state_integrals(k0, 100.0);
        REQUIRE(s.ratio.has_value());
        CHECK(*s.ratio <= 5e-3);
        CHECK(*s.ratio == doctest::Approx(1.0 / (pi * 100.0 * std::abs(std::cos(100.0)))).epsilon(0.02));
        const auto near = intermediate_state_integrals(k0, 1.0);
        REQUIRE(near.ratio.has_value());
        CHECK(*near.ratio > 0.1);
        CHECK(*near.ratio < 10.0);
        const double far = 1e4;
        CHECK(intermediate_state_integrals(k0, far).virtual_state * far * far == doctest::Approx(1.0).epsilon(1e-4));
    }
    SUBCASE("ratio undefined at a zero of the real part") {
        const auto s = intermediate_state_integrals(k0, 99.5 * pi);
        CHECK_FALSE(s.ratio.has_value());
    }
}

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "bandgap/errors.hpp"
#include "bandgap/forces.hpp"
#include "bandgap/resolvent.hpp"
#include "bands_fixture.hpp"
#include "oracles.hpp"

using namespace bandgap;
using std::numbers::pi;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// Principal value over [0, inf) of a resonant integrand with pole q and
// oscillation wavenumber r (in u), assembled from the brute-force pieces.
double brute_force(const oracle::Fn& f, double q, double r, double k0) {
    const double near = oracle::pv_window(f, 0.0, 2.0 * q, q, 0.1 * std::min(q, 1.0 / r), 0.5 / r);
    const double start = std::ceil((2.0 * q + k0) * r / pi) * pi / r - k0;
    const int panels = static_cast<int>(std::ceil((start - 2.0 * q) * r / pi)) * 2 + 2;
    const double middle = oracle::integrate(f, 2.0 * q, start, panels);
    return near + middle + oracle::oscillatory_tail(f, start, pi / r);
}

AtomPairConfig pair(double omega_i, double r, double mu2, Dimensionality dim) {
    AtomPairConfig cfg;
    cfg.omega_i = omega_i;
    cfg.gamma = 1e10;
    cfg.separation = r;
    cfg.dipole_magnitude_sq = mu2;
    cfg.dimensionality = dim;
    return cfg;
}

}  // namespace

TEST_CASE("closed forms against brute-force principal values") {
    const BandStructure b = unit_bands();
    for (double q : {0.05, 0.3, 2.0}) {
        for (double r : {7.0, 30.0}) {
            const double zeta = 1.0 + q * q;
            auto f3 = [=](double u) {
                return (1.0 + u * u) / ((q - u) * (q + u)) * std::sin((u + 1.0) * r) / ((u + 1.0) * r);
            };
            auto f1 = [=](double u) { return (1.0 + u * u) / ((q - u) * (q + u)) * std::cos((u + 1.0) * r); };
            const double i3 = integral_I3(zeta, r, b, IntegralMethod::closed).value;
            const double i1 = integral_I1(zeta, r, b, IntegralMethod::closed).value;
            CHECK(std::abs(i3 - brute_force(f3, q, r, 1.0)) < 1e-8 * std::max(1.0, std::abs(i3)));
            CHECK(std::abs(i1 - brute_force(f1, q, r, 1.0)) < 1e-8 * std::max(1.0, std::abs(i1)));
        }
    }
}

TEST_CASE("closed forms against the quadrature engine") {
    const BandStructure b = example_bands();
    for (double d : {1e-5, 1e-4, 1e-3}) {
        for (double kr : {20.0, 50.0, 100.0}) {
            const double zeta = b.omega_c * (1.0 + d);
            const double r = kr / b.k0;
            const auto c3 = integral_I3(zeta, r, b, IntegralMethod::closed);
            const auto q3 = integral_I3(zeta, r, b, IntegralMethod::quadrature);
            const auto c1 = integral_I1(zeta, r, b, IntegralMethod::closed);
            const auto q1 = integral_I1(zeta, r, b, IntegralMethod::quadrature);
            CHECK(rel(c3.value, q3.value) <= 1e-6);
            CHECK(rel(c1.value, q1.value) <= 1e-6);
            CHECK(std::abs(c3.value - q3.value) <= 3.0 * q3.error + 1e-15 * std::abs(q3.value));
            CHECK(q3.far_zone_ok);
        }
    }
}

TEST_CASE("near-edge forms") {
    const BandStructure b = example_bands();
    const double r = 37.3 / b.k0;
    const double d = 1e11;
    const double i3 = integral_I3(b.omega_c + d, r, b, IntegralMethod::near_edge).value;
    const double i3_half = integral_I3(b.omega_c + d / 2.0, r, b, IntegralMethod::near_edge).value;
    CHECK(rel(i3_half, std::sqrt(2.0) * i3) < 1e-14);
    const double i1 = integral_I1(b.omega_c + d, r, b, IntegralMethod::near_edge).value;
    const double i1_quarter = integral_I1(b.omega_c + d / 4.0, r, b, IntegralMethod::near_edge).value;
    CHECK(rel(i1_quarter, 2.0 * i1) < 1e-14);

    const double amplitude = pi * b.omega_c / (2.0 * std::sqrt(b.curvature_A * d));
    const double node = 10.5 * pi / b.k0;  // cos(k0 r) = 0
    CHECK(std::abs(integral_I3(b.omega_c + d, node, b, IntegralMethod::near_edge).value) < 1e-14 * amplitude);
    CHECK_FALSE(integral_I3(b.omega_c + d, 5.0 / b.k0, b, IntegralMethod::near_edge).far_zone_ok);
}

TEST_CASE("large-distance limit of the closed forms") {
    // q r >> 1: I3 -> -C cos((k0 + q) r)/(k0 r), I1 -> C sin((k0 + q) x), with the
    // near-edge amplitude C. The near-edge forms drop the q r phase.
    const BandStructure b = example_bands();
    const double d = 1e-4 * b.omega_c;
    const double q = std::sqrt(d / b.curvature_A);
    const double amplitude = pi * b.omega_c / (2.0 * std::sqrt(b.curvature_A * d));
    for (double qr : {300.0, 3000.0, 30000.0}) {
        const double r = qr / q;
        const double phase = (b.k0 + q) * r;
        const double closed = integral_I3(b.omega_c + d, r, b, IntegralMethod::closed).value;
        // corrections are O(1/(q r)) and O(q/k0)
        const double slack = 3.0 / qr + 3.0 * q / b.k0;
        CHECK(std::abs(closed + amplitude * std::cos(phase) / (b.k0 * r)) <= slack * amplitude / (b.k0 * r));
        const double c1 = integral_I1(b.omega_c + d, r, b, IntegralMethod::closed).value;
        CHECK(std::abs(c1 - amplitude * std::sin(phase)) <= slack * amplitude);
        const double near = integral_I3(b.omega_c + d, r, b, IntegralMethod::near_edge).value;
        CHECK(near == doctest::Approx(-amplitude * std::cos(b.k0 * r) / (b.k0 * r)).epsilon(1e-12));
    }
}

TEST_CASE("detuning law") {
    const BandStructure b = example_bands();
    const double r = 1e-2;
    const double base = integral_I3(b.omega_c + 1e11, r, b, IntegralMethod::near_edge).value * std::sqrt(1e11);
    double lo = 1e300;
    double hi = 0.0;
    for (int i = 0; i <= 10; ++i) {
        const double d = (b.omega_c + 1e11 * std::pow(10.0, -i / 10.0)) - b.omega_c;
        const double near = integral_I3(b.omega_c + d, r, b, IntegralMethod::near_edge).value;
        CHECK(near * std::sqrt(d) == doctest::Approx(base).epsilon(1e-12));
        // Closed form: the envelope, read at an extremum of cos((k0 + q) r), at q r >= 1000.
        const double q = std::sqrt(d / b.curvature_A);
        const double m = std::round((b.k0 + q) * r / (2.0 * pi));
        const double rm = 2.0 * pi * m / (b.k0 + q);
        const double envelope = std::abs(integral_I3(b.omega_c + d, rm, b, IntegralMethod::closed).value) * b.k0 * rm;
        lo = std::min(lo, envelope * std::sqrt(d));
        hi = std::max(hi, envelope * std::sqrt(d));
    }
    CHECK(hi / lo - 1.0 <= 0.02);
}

TEST_CASE("I1 at a node of sin(k0 x) loses the leading term") {
    const BandStructure b = example_bands();
    const double x = 40.0 * pi / b.k0;
    double prev = 1e300;
    for (double d : {1e12, 1e11, 1e10, 1e9}) {
        const double amplitude = pi * b.omega_c / (2.0 * std::sqrt(b.curvature_A * d));
        const double ratio = std::abs(integral_I1(b.omega_c + d, x, b, IntegralMethod::closed).value) / amplitude;
        CHECK(ratio < prev);
        prev = ratio;
    }
    CHECK(prev < 0.05);
}

TEST_CASE("integral domain errors") {
    const BandStructure b = example_bands();
    CHECK_THROWS_AS((void)integral_I3(b.omega_c, 1e-5, b, IntegralMethod::closed), DomainError);
    CHECK_THROWS_AS((void)integral_I3(b.omega_c * 0.99, 1e-5, b, IntegralMethod::quadrature), DomainError);
    CHECK_THROWS_AS((void)integral_I1(b.omega_c, 1e-5, b, IntegralMethod::near_edge), DomainError);
    CHECK_THROWS_AS((void)integral_I1(b.omega_c * 1.001, 0.0, b, IntegralMethod::closed), DomainError);
}

TEST_CASE("pole solution") {
    const BandStructure b = example_bands();
    const double omega_i = b.omega_c * (1.0 + 1e-4);
    const double r = 52.7 / b.k0;

    SUBCASE("free atoms do not shift") {
        for (auto dim : {Dimensionality::three_d, Dimensionality::one_d}) {
            const auto cfg = pair(omega_i, r, 0.0, dim);
            CHECK(solve_pole(cfg, b, PoleMode::first_iteration, 1.0).z_over_hbar == omega_i);
            CHECK(solve_pole(cfg, b, PoleMode::fixed_point, 1.0).z_over_hbar == omega_i);
        }
    }
    SUBCASE("first iteration reproduces the energy shifts") {
        const auto c3 = pair(omega_i, r, 1.0, Dimensionality::three_d);
        const auto s3 = solve_pole(c3, b, PoleMode::first_iteration, 1.0);
        CHECK(s3.iterations == 1);
        CHECK(s3.converged);
        CHECK(rel(s3.z_over_hbar - omega_i, energy_shift_3d(c3, b)) < 1e-12);
        auto c1 = pair(omega_i, r, 1e8, Dimensionality::one_d);
        c1.dipole_unit_vector = {0.6, 0.0, 0.8};
        const auto s1 = solve_pole(c1, b, PoleMode::first_iteration, 1.0);
        CHECK(rel(s1.z_over_hbar - omega_i, energy_shift_1d(c1, b)) < 1e-12);
    }
    SUBCASE("fixed point departs from first iteration at fourth order in the coupling") {
        auto diff = [&](double mu2) {
            const auto cfg = pair(omega_i, r, mu2, Dimensionality::three_d);
            const auto first = solve_pole(cfg, b, PoleMode::first_iteration, 1.0);
            const auto fixed = solve_pole(cfg, b, PoleMode::fixed_point, 1.0);
            CHECK(fixed.converged);
            CHECK(fixed.residual <= 1.0);
            return fixed.z_over_hbar - first.z_over_hbar;
        };
        const double ratio = diff(1e-11) / diff(0.25e-11);  // dipole moment halved
        CHECK(ratio == doctest::Approx(16.0).epsilon(0.05));
    }
    SUBCASE("closed and quadrature right-hand sides") {
        const double d = 1e-4 * b.omega_c;
        const double q = std::sqrt(d / b.curvature_A);
        const double far = 1000.0 / q;
        const auto cfg = pair(b.omega_c + d, far, 1.0, Dimensionality::three_d);
        const double closed = pole_rhs(cfg.omega_i, cfg, b, IntegralMethod::closed) - cfg.omega_i;
        // Far out the operator reduces to -(k0 + q)^2 ((mu.r)^2 - 1) on I3.
        const double i3 = integral_I3(cfg.omega_i, far, b, IntegralMethod::closed).value;
        CHECK(rel(closed, std::pow(b.k0 + q, 2) * i3 / pi) < 1e-2);
        const auto mid = pair(b.omega_c + d, 52.7 / b.k0, 1.0, Dimensionality::three_d);
        const double c = pole_rhs(mid.omega_i, mid, b, IntegralMethod::closed) - mid.omega_i;
        const double qd = pole_rhs(mid.omega_i, mid, b, IntegralMethod::quadrature) - mid.omega_i;
        CHECK(rel(qd, c) < 1e-6);
    }
    SUBCASE("runaway iteration reports its trace") {
        // cos(k0 r) = 1: a large negative shift drives the iterate into the gap.
        const auto cfg = pair(omega_i, 16.0 * pi / b.k0, 1.0, Dimensionality::three_d);
        try {
            (void)solve_pole(cfg, b, PoleMode::fixed_point, 1.0);
            FAIL("expected ConvergenceError");
        } catch (const ConvergenceError& e) {
            CHECK(e.trace().size() >= 2);
            CHECK(e.trace().front() == omega_i);
        }
        CHECK_THROWS_AS((void)solve_pole(pair(b.omega_c, r, 1.0, Dimensionality::three_d), b,
                                         PoleMode::first_iteration, 1.0),
                        DomainError);
    }
}

TEST_CASE("atom pair validation") {
    auto cfg = pair(1e15, 1e-5, 1.0, Dimensionality::three_d);
    CHECK_NOTHROW(cfg.validate());
    cfg.dipole_unit_vector = {0.0, 0.0, 1.1};
    CHECK_THROWS_AS(cfg.validate(), DomainError);
    cfg = pair(1e15, -1e-5, 1.0, Dimensionality::three_d);
    CHECK_THROWS_AS(cfg.validate(), DomainError);
    cfg = pair(1e15, 1e-5, 1.0, Dimensionality::three_d);
    cfg.gamma = -1.0;
    CHECK_THROWS_AS(cfg.validate(), DomainError);
    cfg = pair(1e15, 1e-5, 2.0, Dimensionality::one_d);
    cfg.dipole_unit_vector = {0.6, 0.8, 0.0};
    CHECK(cfg.transverse_coupling() == doctest::Approx(2.0 * 0.64));
}

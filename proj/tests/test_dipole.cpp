#include <doctest.h>

#include <cmath>
#include <numbers>

#include "bandgap/dipole.hpp"
#include "bandgap/errors.hpp"
#include "oracles.hpp"

using namespace bandgap;

TEST_CASE("far-zone limits") {
    const double k0 = 1e7;
    const double r = 3.3e-6;
    const double field = std::cos(k0 * r) / r;
    CHECK(dipole_tensor({0, 0, 1}, {1, 0, 0}, k0, r, TensorMode::far_zone) ==
          doctest::Approx(k0 * k0 * field).epsilon(1e-14));
    CHECK(dipole_tensor({1, 0, 0}, {1, 0, 0}, k0, r, TensorMode::far_zone) == 0.0);
    CHECK_THROWS_AS((void)dipole_tensor({0, 0, 1}, {1, 0, 0}, k0, 0.0, TensorMode::exact), SingularityError);
}

TEST_CASE("exact mode against a finite-difference Hessian") {
    const double k0 = 1.0;
    const double r = 50.0;
    auto phi = [k0](const std::array<double, 3>& x) {
        const double d = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
        return std::cos(k0 * d) / d;
    };
    const Vec3 mus[] = {{0, 0, 1}, {1, 0, 0}, {0.6, 0.0, 0.8}, {0.48, 0.6, 0.64}};
    const Vec3 rhat{0.36, 0.48, 0.8};
    const std::array<double, 3> point{r * rhat[0], r * rhat[1], r * rhat[2]};
    const auto d = oracle::finite_difference_hessian(phi, point, 1e-3);
    for (const auto& mu : mus) {
        double mhm = 0.0;
        for (int m = 0; m < 3; ++m)
            for (int n = 0; n < 3; ++n) mhm += mu[m] * d.hessian[m][n] * mu[n];
        const double want = -d.laplacian + mhm;
        const double got = dipole_tensor(mu, rhat, k0, r, TensorMode::exact);
        CHECK(std::abs(got - want) <= 1e-6 * k0 * k0 / r);
    }
}

TEST_CASE("exact approaches far zone") {
    const Vec3 mu{0, 0, 1};
    const Vec3 rhat{1, 0, 0};
    for (double kr : {1e2, 1e3, 1e4}) {
        const double r = kr;  // k0 = 1
        const double exact = dipole_tensor(mu, rhat, 1.0, r, TensorMode::exact);
        const double far = dipole_tensor(mu, rhat, 1.0, r, TensorMode::far_zone);
        CHECK(std::abs(exact - far) <= 2.0 / kr * (1.0 / r));
    }
}

TEST_CASE("transverse operator is the contraction") {
    // g = r^2: lap g = 6, Hessian 2 I, so -6 + 2 = -4 for any direction.
    for (double c : {0.0, 0.3, 1.0}) CHECK(transverse_operator(c, 1.7, 2.0 * 1.7, 2.0) == doctest::Approx(-4.0));
}

#include "bandgap/dipole.hpp"

#include <cmath>

#include "bandgap/errors.hpp"

namespace bandgap {

double dot(const Vec3& a, const Vec3& b) noexcept {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

double norm(const Vec3& a) noexcept { return std::sqrt(dot(a, a)); }

double transverse_operator(double cos_angle, double r, double g_prime,
                           double g_double_prime) noexcept {
    // d_m d_n g = r_m r_n (g'' - g'/r) + delta_mn g'/r,  lap g = g'' + 2 g'/r
    const double c2 = cos_angle * cos_angle;
    return (c2 - 1.0) * g_double_prime - (1.0 + c2) * g_prime / r;
}

double dipole_tensor(const Vec3& mu_hat, const Vec3& r_hat, double k0, double r,
                     TensorMode mode) {
    if (!(r > 0.0)) {
        throw SingularityError("dipole_tensor: separation must be > 0");
    }
    const double c = dot(mu_hat, r_hat);
    const double kr = k0 * r;
    const double cs = std::cos(kr);
    if (mode == TensorMode::far_zone) {
        return -k0 * k0 * (c * c - 1.0) * cs / r;
    }
    const double sn = std::sin(kr);
    const double g1 = -k0 * sn / r - cs / (r * r);
    const double g2 = -k0 * k0 * cs / r + 2.0 * k0 * sn / (r * r) + 2.0 * cs / (r * r * r);
    return transverse_operator(c, r, g1, g2);
}

}  // namespace bandgap

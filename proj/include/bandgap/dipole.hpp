#pragma once

#include <array>

namespace bandgap {

using Vec3 = std::array<double, 3>;

[[nodiscard]] double dot(const Vec3& a, const Vec3& b) noexcept;
[[nodiscard]] double norm(const Vec3& a) noexcept;

enum class TensorMode { exact, far_zone };

/// mu_m mu_n (-lap delta_mn + d_m d_n) applied to a radial field g(r), given
/// g'(r) and g''(r). With c = mu.r_hat this is (c^2 - 1) g'' - (1 + c^2) g'/r.
[[nodiscard]] double transverse_operator(double cos_angle, double r, double g_prime,
                                         double g_double_prime) noexcept;

/// The same operator applied to cos(k0 r)/r. far_zone keeps only the 1/r term,
/// -k0^2 ((mu.r_hat)^2 - 1) cos(k0 r)/r. Throws DomainError for r <= 0.
[[nodiscard]] double dipole_tensor(const Vec3& mu_hat, const Vec3& r_hat, double k0, double r,
                                   TensorMode mode);

}  // namespace bandgap

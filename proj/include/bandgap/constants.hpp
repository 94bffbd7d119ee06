#pragma once

#include <numbers>

namespace bandgap {

inline constexpr double pi = std::numbers::pi;
inline constexpr double euler_gamma = std::numbers::egamma;
/// Speed of light in vacuum, m/s.
inline constexpr double speed_of_light = 299792458.0;

}  // namespace bandgap

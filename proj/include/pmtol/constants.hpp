#pragma once

#include <cmath>

namespace pmtol {

inline constexpr double two_pi = 6.283185307179586476925286766559;
inline constexpr double speed_of_light = 299792458.0;  // m/s

// sin(x)/x with the removable singularity at 0 filled in. The series
// branch keeps full precision for |x| below the switchover.
inline double sinc(double x) {
  const double ax = std::abs(x);
  if (ax < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

// Half-width at half maximum of sinc^2: the positive root of
// sinc^2(x) = 1/2, solved once by Newton on sin^2(x) - x^2/2 and cached.
double half_max_arg();

}  // namespace pmtol

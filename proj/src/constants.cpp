#include "pmtol/constants.hpp"

namespace pmtol {

namespace {

double solve_half_max() {
  // Root of g(x) = sin^2(x) - x^2/2 on (0, pi), equivalent to
  // sinc^2(x) = 1/2 without the division. Bisection bracket, then Newton.
  double x = 1.4;
  for (int i = 0; i < 60; ++i) {
    const double s = std::sin(x);
    const double g = s * s - 0.5 * x * x;
    const double gp = std::sin(2.0 * x) - x;
    const double step = g / gp;
    x -= step;
    if (std::abs(step) < 1e-15) break;
  }
  return x;
}

}  // namespace

double half_max_arg() {
  static const double value = solve_half_max();
  return value;
}

}  // namespace pmtol

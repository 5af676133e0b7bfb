#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "pmtol/constants.hpp"
#include "pmtol/errors.hpp"
#include "pmtol/metrics.hpp"
#include "pmtol/units.hpp"

using namespace pmtol;

namespace {

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i)
    v[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  return v;
}

std::vector<double> gaussian(const std::vector<double>& x, double a, double x0, double fwhm) {
  std::vector<double> y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - x0;
    y[i] = a * std::exp(-4.0 * std::log(2.0) * dx * dx / (fwhm * fwhm));
  }
  return y;
}

}  // namespace

TEST_CASE("max efficiency") {
  auto spec = ideal_sinc(linspace(-6.0 * M_PI, 6.0 * M_PI, 501));
  CHECK(max_efficiency(spec) == doctest::Approx(1.0).epsilon(1e-12));

  for (auto& a : spec.amplitude) a *= 0.5;
  CHECK(max_efficiency(spec) == doctest::Approx(0.25).epsilon(1e-12));

  Spectrum empty;
  CHECK_THROWS_AS(max_efficiency(empty), Error);
}

TEST_CASE("gaussian fit") {
  SUBCASE("recovers an exact gaussian to 0.1%") {
    const auto x = linspace(1540.0, 1560.0, 401);
    const auto y = gaussian(x, 0.8, 1550.3, 0.4);
    const auto fit = fit_gaussian(x, y);
    CHECK(fit.converged);
    CHECK(fit.fwhm == doctest::Approx(0.4).epsilon(1e-3));
    CHECK(fit.center == doctest::Approx(1550.3).epsilon(1e-6));
    CHECK(fit.amplitude == doctest::Approx(0.8).epsilon(1e-3));
    CHECK(fit.residual_rms < 1e-9);
  }
  SUBCASE("sinc^2 fit lands within 15% of the true FWHM") {
    const auto x = linspace(-6.0 * M_PI, 6.0 * M_PI, 501);
    std::vector<double> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = sinc(x[i]) * sinc(x[i]);
    const auto fit = fit_gaussian(x, y);
    CHECK(fit.converged);
    const double truth = 2.0 * half_max_arg();  // 2.7831...
    CHECK(std::abs(fit.fwhm - truth) / truth < 0.15);
  }
  SUBCASE("flat input has no peak") {
    const auto x = linspace(0.0, 1.0, 101);
    std::vector<double> y(x.size(), 0.7);
    CHECK_THROWS_AS(fit_gaussian(x, y), Error);
    try {
      fit_gaussian(x, y);
    } catch (const Error& e) {
      CHECK(e.code() == errc::no_peak);
    }
  }
  SUBCASE("invariant under axis translation and amplitude scaling") {
    const auto x = linspace(-10.0, 10.0, 301);
    const auto y = gaussian(x, 1.0, 0.7, 2.3);
    const auto base = fit_gaussian(x, y);

    auto x2 = x;
    for (auto& v : x2) v += 123.0;
    auto y2 = y;
    for (auto& v : y2) v *= 5.5;
    const auto moved = fit_gaussian(x2, y2);
    CHECK(moved.fwhm == doctest::Approx(base.fwhm).epsilon(1e-9));
    CHECK(moved.center == doctest::Approx(base.center + 123.0).epsilon(1e-9));
    CHECK(moved.amplitude == doctest::Approx(5.5 * base.amplitude).epsilon(1e-9));
  }
}

TEST_CASE("normalized conversion efficiency rescaling") {
  CHECK(eta_norm(1.0, 0.49) == doctest::Approx(0.49).epsilon(1e-12));
  CHECK(eta_norm(0.0, 0.49) == 0.0);
  CHECK(eta_norm(0.8163, 0.49) == doctest::Approx(0.40).epsilon(1e-3));
  CHECK_THROWS_AS(eta_norm(1.5, 0.49), Error);
  CHECK_THROWS_AS(eta_norm(0.5, 0.0), Error);
}

TEST_CASE("squeezing formula") {
  SUBCASE("no pump, no loss: shot noise") {
    CHECK(squeezing_db({0.49, 0.0, 0.0, 4.0}) == doctest::Approx(0.0).epsilon(1e-12));
  }
  SUBCASE("loss alone adds no antisqueezing") {
    CHECK(squeezing_db({0.0, 0.5, 0.1, 5.0}) == doctest::Approx(0.0).epsilon(1e-12));
  }
  SUBCASE("reference point near -9.45 dB") {
    CHECK(squeezing_db({0.40, 0.5, 0.1, 4.0}) == doctest::Approx(-9.4512).epsilon(2e-4));
  }
  SUBCASE("lossless closed form") {
    const double eta = 0.3, p = 0.4, L = 3.0;
    const double want = -20.0 * std::sqrt(eta * p) * L / std::log(10.0);
    CHECK(squeezing_db({eta, p, 0.0, L}) == doctest::Approx(want).epsilon(1e-12));
  }
  SUBCASE("monotone non-increasing in pump power") {
    double prev = squeezing_db({0.4, 0.0, 0.1, 4.0});
    for (double p = 0.05; p <= 1.0; p += 0.05) {
      const double cur = squeezing_db({0.4, p, 0.1, 4.0});
      CHECK(cur <= prev + 1e-12);
      prev = cur;
    }
  }
}

TEST_CASE("bin count") {
  CHECK(n_bins(from_nm(40), from_nm(0.4)) == 66);
  CHECK(n_bins(from_nm(40), from_nm(40)) == 0);
  CHECK(n_bins(from_nm(40), from_nm(0.380)) == 70);
  CHECK_THROWS_AS(n_bins(from_nm(40), 0.0), Error);

  long prev = n_bins(from_nm(40), from_nm(0.1));
  for (double b = 0.12; b < 2.0; b += 0.07) {
    const long cur = n_bins(from_nm(40), from_nm(b));
    CHECK(cur <= prev);
    prev = cur;
  }
}

TEST_CASE("bandwidth compression factor") {
  CHECK(bcf(963e9, 963e9) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(bcf(963e9, 15e9) == doctest::Approx(64.2).epsilon(1e-12));
  CHECK(bcf(963e9, 128.9e9) == doctest::Approx(7.4709).epsilon(1e-4));
  CHECK_THROWS_AS(bcf(963e9, 0.0), Error);

  SUBCASE("wavelength FWHM conversion") {
    const double fwhm = from_nm(0.0153), center = from_nm(553);
    const double dnu = speed_of_light * fwhm / (center * center);
    CHECK(bcf_from_fwhm(963e9, fwhm, center) == doctest::Approx(963e9 / dnu).epsilon(1e-12));
  }
  SUBCASE("scale invariance of the ratio") {
    for (double k : {0.5, 2.0, 7.0}) {
      CHECK(bcf(k * 963e9, k * 15e9) == doctest::Approx(64.2).epsilon(1e-12));
    }
  }
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "pmtol/constants.hpp"
#include "pmtol/dispersion.hpp"
#include "pmtol/errors.hpp"
#include "pmtol/metrics.hpp"
#include "pmtol/noise.hpp"
#include "pmtol/phasematch.hpp"
#include "pmtol/provider.hpp"
#include "pmtol/units.hpp"

using namespace pmtol;

namespace {

const std::string kDataDir = PMTOL_TEST_DATA_DIR;

Process shg_process() {
  return make_process("shg", Wave{from_nm(775), "e", +1}, Wave{from_nm(1550), "e", +1},
                      Wave{from_nm(1550), "e", +1});
}

struct Setup {
  std::shared_ptr<SurrogateProvider> provider;
  Process process;
  double w0;
};

Setup tiln_shg(double w0_um = 7.0) {
  Setup s;
  s.provider = load_surrogate_fixture("tiln", kDataDir);
  s.w0 = from_um(w0_um);
  s.process = shg_process();
  s.process.poling = Poling::with_period(qpm_period(*s.provider, s.process, s.w0));
  return s;
}

WidthProfile constant_profile(double length_m, double dz_m, double w_m) {
  WidthProfile p;
  p.dz_m = dz_m;
  p.nominal_width_m = w_m;
  p.widths_m.assign(static_cast<std::size_t>(std::llround(length_m / dz_m)), w_m);
  return p;
}

// Mismatch (grating included) for the degenerate SHG scan at a given
// fundamental wavelength, computed straight from the provider.
double mismatch_at(const Setup& s, double lambda_fund, double width) {
  const double l1 = lambda_fund, l3 = 0.5 * lambda_fund;
  const double n3 = s.provider->n_eff(l3, width, "e");
  const double n1 = s.provider->n_eff(l1, width, "e");
  const double db = two_pi * (n3 / l3 - 2.0 * n1 / l1);
  return db - two_pi / s.process.poling.period_m;
}

}  // namespace

TEST_CASE("ideal sinc spectrum") {
  const auto s = ideal_sinc({0.0, half_max_arg(), M_PI, -M_PI});
  CHECK(s.amplitude[0] == std::complex<double>(1.0, 0.0));
  CHECK(s.intensity(0) == 1.0);
  CHECK(s.intensity(1) == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(s.intensity(2) < 1e-12);
  CHECK(s.intensity(3) < 1e-12);
}

TEST_CASE("homogeneous profile reduces to the analytic sinc") {
  const auto s = tiln_shg();
  const double L = from_mm(20);
  const auto profile = constant_profile(L, from_um(50), s.w0);
  const auto scan = default_scan(*s.provider, s.process, ScanMode::degenerate, L, s.w0);
  const auto spec = integrate_spectrum(*s.provider, s.process, profile, scan);

  double max_err = 0.0;
  for (std::size_t i = 0; i < spec.size(); ++i) {
    const double x = 0.5 * mismatch_at(s, spec.axis[i], s.w0) * L;
    const double ideal = sinc(x) * sinc(x);
    max_err = std::max(max_err, std::abs(spec.intensity(i) - ideal));
  }
  CHECK(max_err <= 1e-6);
  // The cell-exact integrator in fact hits machine precision here.
  CHECK(max_err <= 1e-12);  // homogeneous devices bypass the cubic fast path

  SUBCASE("peak is unity at the phasematched wavelength") {
    CHECK(max_efficiency(spec) == doctest::Approx(1.0).epsilon(1e-9));
    const std::size_t mid = spec.size() / 2;
    CHECK(spec.intensity(mid) == doctest::Approx(1.0).epsilon(1e-9));
  }
  SUBCASE("axis spans close to +-6 zeros") {
    const double x_end = 0.5 * mismatch_at(s, spec.axis.back(), s.w0) * L;
    CHECK(std::abs(x_end) == doctest::Approx(6.0 * M_PI).epsilon(0.02));
  }
}

TEST_CASE("two-segment profile matches the closed form") {
  const auto s = tiln_shg();
  const double L = from_mm(20);
  const double wa = from_um(6.9), wb = from_um(7.1);
  WidthProfile profile;
  profile.dz_m = from_um(50);
  profile.nominal_width_m = from_um(7);
  const std::size_t n = 400;
  for (std::size_t i = 0; i < n; ++i) profile.widths_m.push_back(i < n / 2 ? wa : wb);

  const auto scan = default_scan(*s.provider, s.process, ScanMode::degenerate, L, s.w0);
  const auto spec = integrate_spectrum(*s.provider, s.process, profile, scan);

  double max_err = 0.0;
  for (std::size_t i = 0; i < spec.size(); ++i) {
    const double da = mismatch_at(s, spec.axis[i], wa);
    const double db = mismatch_at(s, spec.axis[i], wb);
    const std::complex<double> oracle =
        0.5 * sinc(0.25 * da * L) * std::polar(1.0, 0.25 * da * L) +
        0.5 * std::polar(1.0, 0.5 * da * L) * sinc(0.25 * db * L) *
            std::polar(1.0, 0.25 * db * L);
    max_err = std::max(max_err, std::abs(spec.amplitude[i] - oracle));
  }
  CHECK(max_err <= 1e-9);
}

TEST_CASE("unitarity bound on noisy spectra") {
  const auto s = tiln_shg();
  const double L = from_mm(20);
  const auto scan = default_scan(*s.provider, s.process, ScanMode::degenerate, L, s.w0);
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    const auto profile =
        generate_profile(L, from_um(50), s.w0, {1.0, from_um(0.4), seed});
    const auto spec = integrate_spectrum(*s.provider, s.process, profile, scan);
    for (std::size_t i = 0; i < spec.size(); ++i) CHECK(spec.intensity(i) <= 1.0 + 1e-9);
  }
}

namespace {

// Wrapper adding a constant c to delta_beta: wave3's polarization gets an
// index offset proportional to wavelength, dn(l) = c l / 2pi, so
// beta3 -> beta3 + c at every scan point.
class ShiftedProvider : public DispersionProvider {
 public:
  ShiftedProvider(std::shared_ptr<DispersionProvider> base, std::string pol, double shift)
      : base_(std::move(base)), pol_(std::move(pol)), shift_(shift) {}

  Window lambda_window() const override { return base_->lambda_window(); }
  Window width_window() const override { return base_->width_window(); }
  bool has_polarization(const std::string& pol) const override {
    return pol == pol_ || base_->has_polarization(pol);
  }
  std::string describe() const override { return base_->describe() + "+shift"; }

 protected:
  double eval(double lambda_m, double width_m, const std::string& pol) const override {
    if (pol == pol_)
      return base_->n_eff(lambda_m, width_m, "e") + shift_ * lambda_m / two_pi;
    return base_->n_eff(lambda_m, width_m, pol);
  }
  double eval_dw(double lambda_m, double width_m, const std::string& pol) const override {
    return base_->n_eff_dw(lambda_m, width_m, pol == pol_ ? "e" : pol);
  }

 private:
  std::shared_ptr<DispersionProvider> base_;
  std::string pol_;
  double shift_;
};

}  // namespace

TEST_CASE("grating absorbs a constant mismatch shift") {
  auto base = load_surrogate_fixture("tiln", kDataDir);
  const double c = 812.5;  // rad/m, arbitrary constant mismatch offset

  auto prov_a = std::make_shared<ShiftedProvider>(base, "p3", 0.0);
  auto prov_b = std::make_shared<ShiftedProvider>(base, "p3", c);

  Process proc_a = make_process("shg3", Wave{from_nm(775), "p3", +1},
                                Wave{from_nm(1550), "e", +1}, Wave{from_nm(1550), "e", +1});
  proc_a.poling = Poling::with_period(qpm_period(*prov_a, proc_a, from_um(7)));
  Process proc_b = proc_a;
  proc_b.poling = Poling::with_period(two_pi / (two_pi / proc_a.poling.period_m + c));

  const auto profile =
      generate_profile(from_mm(10), from_um(50), from_um(7), {1.0, from_um(0.2), 9});
  ScanSpec scan;
  scan.degenerate_shg = true;
  for (int i = 0; i < 101; ++i)
    scan.axis_m.push_back(from_nm(1540) + from_nm(20) * i / 100.0);

  const auto spec_a = integrate_spectrum(*prov_a, proc_a, profile, scan);
  const auto spec_b = integrate_spectrum(*prov_b, proc_b, profile, scan);
  double max_diff = 0.0;
  for (std::size_t i = 0; i < spec_a.size(); ++i)
    max_diff = std::max(max_diff, std::abs(spec_a.amplitude[i] - spec_b.amplitude[i]));
  CHECK(max_diff < 1e-9);
}

TEST_CASE("cubic width fast path agrees with direct evaluation") {
  const auto s = tiln_shg();
  const double L = from_mm(20);
  const auto profile = generate_profile(L, from_um(50), s.w0, {1.0, from_um(0.4), 21});
  const auto scan = default_scan(*s.provider, s.process, ScanMode::degenerate, L, s.w0);
  const auto spec = integrate_spectrum(*s.provider, s.process, profile, scan);

  // Direct oracle: per-site provider evaluation, no cubic reconstruction.
  std::mt19937_64 rng(2024);
  for (int a = 0; a < 10; ++a) {
    const std::size_t i = static_cast<std::size_t>(rng() % spec.size());
    double theta = 0.0;
    std::complex<double> acc{0.0, 0.0};
    for (double w : profile.widths_m) {
      const double mm = mismatch_at(s, spec.axis[i], w);  // grating already inside
      const double h = 0.5 * mm * profile.dz_m;
      acc += sinc(h) * std::polar(1.0, theta + h);
      theta += mm * profile.dz_m;
    }
    acc /= static_cast<double>(profile.size());
    CHECK(std::abs(acc - spec.amplitude[i]) < 1e-8);
  }
}

TEST_CASE("halving the mesh pitch barely moves the peak") {
  const auto s = tiln_shg();
  const double L = from_mm(20);
  const auto scan = default_scan(*s.provider, s.process, ScanMode::degenerate, L, s.w0);
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const auto profile = generate_profile(L, from_um(50), s.w0, {1.0, from_um(0.1), seed});
    const auto fine = resample_profile(profile, from_um(25));
    const double peak_coarse =
        max_efficiency(integrate_spectrum(*s.provider, s.process, profile, scan));
    const double peak_fine =
        max_efficiency(integrate_spectrum(*s.provider, s.process, fine, scan));
    CHECK(std::abs(peak_coarse - peak_fine) < 1e-4);
  }
}

TEST_CASE("envelope statistics") {
  const auto s = tiln_shg();
  const double L = from_mm(10);
  const auto scan = default_scan(*s.provider, s.process, ScanMode::degenerate, L, s.w0);

  std::vector<Spectrum> specs;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    specs.push_back(integrate_spectrum(
        *s.provider, s.process, generate_profile(L, from_um(50), s.w0, {1.0, from_um(0.3), seed}),
        scan));
  }

  SUBCASE("single spectrum collapses the band") {
    const auto env = efficiency_envelope(std::span(specs.data(), 1));
    for (std::size_t i = 0; i < specs[0].size(); ++i) {
      CHECK(env.mean[i] == specs[0].intensity(i));
      CHECK(env.min[i] == env.max[i]);
    }
  }
  SUBCASE("identical spectra give zero width") {
    std::vector<Spectrum> two{specs[0], specs[0]};
    const auto env = efficiency_envelope(two);
    for (std::size_t i = 0; i < two[0].size(); ++i) CHECK(env.max[i] - env.min[i] == 0.0);
  }
  SUBCASE("band contains every sample") {
    const auto env = efficiency_envelope(specs);
    for (const auto& sp : specs) {
      for (std::size_t i = 0; i < sp.size(); ++i) {
        CHECK(sp.intensity(i) >= env.min[i]);
        CHECK(sp.intensity(i) <= env.max[i]);
      }
    }
  }
  SUBCASE("mismatched axes are rejected") {
    auto other = specs[0];
    other.axis[3] += from_nm(0.001);
    std::vector<Spectrum> bad{specs[0], other};
    CHECK_THROWS_AS(efficiency_envelope(bad), Error);
  }
}

TEST_CASE("poling state handling") {
  const auto prov = load_surrogate_fixture("tiln", kDataDir);
  auto proc = shg_process();  // poling unset
  const auto profile = constant_profile(from_mm(10), from_um(50), from_um(7));
  ScanSpec scan;
  scan.degenerate_shg = true;
  for (int i = 0; i < 11; ++i) scan.axis_m.push_back(from_nm(1545) + from_nm(1) * i);

  CHECK_THROWS_AS(integrate_spectrum(*prov, proc, profile, scan), Error);
  try {
    integrate_spectrum(*prov, proc, profile, scan);
  } catch (const Error& e) {
    CHECK(e.code() == errc::missing_period);
  }

  proc.poling = Poling::unpoled();
  CHECK_NOTHROW(integrate_spectrum(*prov, proc, profile, scan));
}

TEST_CASE("scan axis excursions outside validity are rejected") {
  const auto s = tiln_shg();
  const auto profile = constant_profile(from_mm(10), from_um(50), s.w0);
  ScanSpec scan;
  scan.degenerate_shg = true;
  scan.axis_m = {from_nm(1500), from_nm(3450)};  // second point resolves out of window
  CHECK_THROWS_AS(integrate_spectrum(*s.provider, s.process, profile, scan), Error);
}

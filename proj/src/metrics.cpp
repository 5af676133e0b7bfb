#include "pmtol/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "pmtol/constants.hpp"
#include "pmtol/errors.hpp"

namespace pmtol {

double max_efficiency(const Spectrum& spectrum) {
  if (spectrum.amplitude.empty()) fail(errc::empty_spectrum, "spectrum has no samples");
  double best = 0.0;
  for (const auto& a : spectrum.amplitude) best = std::max(best, std::norm(a));
  return best;
}

namespace {

constexpr double four_ln2 = 2.7725887222397812;  // 4 ln 2

struct Params {
  double a, x0, f;
};

double sse(std::span<const double> x, std::span<const double> y, const Params& p) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - p.x0;
    const double m = p.a * std::exp(-four_ln2 * dx * dx / (p.f * p.f));
    const double r = y[i] - m;
    s += r * r;
  }
  return s;
}

// Solve the symmetric 3x3 normal equations by Gaussian elimination with
// partial pivoting; returns false on a (near-)singular system.
bool solve3(double m[3][3], double b[3], double out[3]) {
  int idx[3] = {0, 1, 2};
  for (int col = 0; col < 3; ++col) {
    int piv = col;
    for (int r = col + 1; r < 3; ++r)
      if (std::abs(m[idx[r]][col]) > std::abs(m[idx[piv]][col])) piv = r;
    std::swap(idx[col], idx[piv]);
    const double d = m[idx[col]][col];
    if (std::abs(d) < 1e-300) return false;
    for (int r = col + 1; r < 3; ++r) {
      const double f = m[idx[r]][col] / d;
      for (int c = col; c < 3; ++c) m[idx[r]][c] -= f * m[idx[col]][c];
      b[idx[r]] -= f * b[idx[col]];
    }
  }
  for (int col = 2; col >= 0; --col) {
    double v = b[idx[col]];
    for (int c = col + 1; c < 3; ++c) v -= m[idx[col]][c] * out[c];
    out[col] = v / m[idx[col]][col];
  }
  return true;
}

}  // namespace

GaussianFit fit_gaussian(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 5)
    fail(errc::bad_input, "gaussian fit needs matching arrays of at least 5 points");

  // Peak detection gate: a usable peak stands well above the median level.
  std::size_t peak_idx = 0;
  for (std::size_t i = 1; i < y.size(); ++i)
    if (y[i] > y[peak_idx]) peak_idx = i;
  std::vector<double> sorted(y.begin(), y.end());
  std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
  const double median = sorted[sorted.size() / 2];
  const double peak = y[peak_idx];
  if (!(peak > 0.0) || !(peak > 10.0 * median))
    fail(errc::no_peak, "no dominant peak (maximum not above 10x the median)");

  // Initial guess: peak position/height plus the half-maximum crossing width
  // by linear interpolation between samples.
  Params p{peak, x[peak_idx], 0.0};
  const double half = 0.5 * peak;
  double left = x.front(), right = x.back();
  for (std::size_t i = peak_idx; i-- > 0;) {
    if (y[i] <= half) {
      const double t = (half - y[i]) / (y[i + 1] - y[i]);
      left = x[i] + t * (x[i + 1] - x[i]);
      break;
    }
  }
  for (std::size_t i = peak_idx + 1; i < y.size(); ++i) {
    if (y[i] <= half) {
      const double t = (half - y[i - 1]) / (y[i] - y[i - 1]);
      right = x[i - 1] + t * (x[i] - x[i - 1]);
      break;
    }
  }
  p.f = right - left;
  if (!(p.f > 0.0)) p.f = 0.25 * (x.back() - x.front());

  // Damped Gauss-Newton on (A, x0, F).
  double current_sse = sse(x, y, p);
  bool converged = false;
  for (int iter = 0; iter < 200; ++iter) {
    double jtj[3][3] = {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}};
    double jtr[3] = {0, 0, 0};
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double dx = x[i] - p.x0;
      const double e = std::exp(-four_ln2 * dx * dx / (p.f * p.f));
      const double m = p.a * e;
      const double r = y[i] - m;
      const double j0 = e;                                     // d m / d A
      const double j1 = m * 2.0 * four_ln2 * dx / (p.f * p.f); // d m / d x0
      const double j2 = m * 2.0 * four_ln2 * dx * dx / (p.f * p.f * p.f);  // d m / d F
      const double j[3] = {j0, j1, j2};
      for (int a = 0; a < 3; ++a) {
        jtr[a] += j[a] * r;
        for (int b = 0; b < 3; ++b) jtj[a][b] += j[a] * j[b];
      }
    }
    double step[3];
    if (!solve3(jtj, jtr, step)) break;

    // Halve the step until the residual stops increasing.
    double lam = 1.0;
    Params trial = p;
    double trial_sse = current_sse;
    bool improved = false;
    for (int back = 0; back < 25; ++back) {
      trial = Params{p.a + lam * step[0], p.x0 + lam * step[1], p.f + lam * step[2]};
      if (trial.f != 0.0) {
        trial_sse = sse(x, y, trial);
        if (trial_sse <= current_sse) {
          improved = true;
          break;
        }
      }
      lam *= 0.5;
    }
    if (!improved) break;

    const double rel = std::max({std::abs(lam * step[0]) / (std::abs(p.a) + 1e-300),
                                 std::abs(lam * step[1]) / (std::abs(p.x0) + std::abs(p.f)),
                                 std::abs(lam * step[2]) / (std::abs(p.f) + 1e-300)});
    p = trial;
    current_sse = trial_sse;
    if (rel < 1e-9) {
      converged = true;
      break;
    }
  }

  GaussianFit fit;
  fit.amplitude = p.a;
  fit.center = p.x0;
  fit.fwhm = std::abs(p.f);
  fit.residual_rms = std::sqrt(current_sse / static_cast<double>(x.size()));
  fit.converged = converged;
  return fit;
}

GaussianFit gaussian_fwhm(const Spectrum& spectrum) {
  if (spectrum.amplitude.empty()) fail(errc::empty_spectrum, "spectrum has no samples");
  const auto intensity = spectrum.intensities();
  return fit_gaussian(spectrum.axis, intensity);
}

double eta_norm(double peak_efficiency, double eta_ideal) {
  if (!(peak_efficiency >= 0.0 && peak_efficiency <= 1.0 + 1e-9))
    fail(errc::bad_input, "peak efficiency outside [0, 1]");
  if (!(eta_ideal > 0.0)) fail(errc::bad_input, "eta_ideal must be positive");
  return eta_ideal * peak_efficiency;
}

double squeezing_db(const SqueezingInputs& in) {
  if (in.eta_norm < 0.0 || in.p_in_w < 0.0 || in.alpha_db_per_cm < 0.0 || in.length_cm < 0.0)
    fail(errc::bad_input, "squeezing inputs must be non-negative");
  const double alpha = std::log(10.0) / 10.0 * in.alpha_db_per_cm;  // 1/cm
  const double gain = std::exp(-2.0 * std::sqrt(in.eta_norm * in.p_in_w) * in.length_cm);
  const double trans = std::exp(-alpha * in.length_cm);
  const double s = gain * trans + 1.0 - trans;
  return 10.0 * std::log10(s);
}

long n_bins(double band_m, double bin_m) {
  if (!(bin_m > 0.0)) fail(errc::bad_input, "bin bandwidth must be positive");
  if (band_m < 0.0) fail(errc::bad_input, "band must be non-negative");
  return static_cast<long>(std::floor(band_m / (1.5 * bin_m)));
}

double bcf(double delta_nu_in_hz, double delta_nu_out_hz) {
  if (!(delta_nu_out_hz > 0.0)) fail(errc::bad_input, "output bandwidth must be positive");
  return delta_nu_in_hz / delta_nu_out_hz;
}

double bcf_from_fwhm(double delta_nu_in_hz, double fwhm_wavelength_m,
                     double center_wavelength_m) {
  if (!(fwhm_wavelength_m > 0.0)) fail(errc::bad_input, "output FWHM must be positive");
  if (!(center_wavelength_m > 0.0)) fail(errc::bad_input, "centre wavelength must be positive");
  const double dnu = speed_of_light * fwhm_wavelength_m / (center_wavelength_m * center_wavelength_m);
  return bcf(delta_nu_in_hz, dnu);
}

}  // namespace pmtol

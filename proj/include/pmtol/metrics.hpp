#pragma once

#include <span>

#include "pmtol/phasematch.hpp"

namespace pmtol {

// Peak of |amplitude|^2 over the axis.
double max_efficiency(const Spectrum& spectrum);

struct GaussianFit {
  double amplitude = 0.0;
  double center = 0.0;
  double fwhm = 0.0;
  double residual_rms = 0.0;
  bool converged = false;
};

// Least-squares fit of y to A exp(-4 ln2 (x - x0)^2 / F^2) by damped
// Gauss-Newton. Initial guess: peak amplitude/position plus the half-max
// crossing width. Converges when the relative parameter change drops below
// 1e-9 (200 iterations max; the best iterate is returned either way with
// `converged` set accordingly). Requires a peak above 10x the median.
GaussianFit fit_gaussian(std::span<const double> x, std::span<const double> y);

// Fit applied to the spectrum's intensity over its axis.
GaussianFit gaussian_fwhm(const Spectrum& spectrum);

struct SqueezingInputs {
  double eta_norm = 0.0;         // 1/(W cm^2)
  double p_in_w = 0.0;           // pump power, W
  double alpha_db_per_cm = 0.0;  // propagation loss for the squeezed field
  double length_cm = 0.0;
};

// Normalized conversion efficiency of the degraded device: the simulated
// per-unit-length peak rescales the ideal value.
double eta_norm(double peak_efficiency, double eta_ideal);

// Single-pass CW squeezing S = e^{-2 sqrt(eta P) L} e^{-aL} + 1 - e^{-aL},
// returned in dB (negative = below shot noise).
double squeezing_db(const SqueezingInputs& in);

// Frequency bins fitting in a band when each bin is one phasematching FWHM
// wide and separated by half of that: floor(band / (1.5 * bin)).
long n_bins(double band_m, double bin_m);

// Bandwidth compression factor dnu_in / dnu_out.
double bcf(double delta_nu_in_hz, double delta_nu_out_hz);
// Same, with the output bandwidth given as a wavelength FWHM at the output
// wave's centre; converted via dnu = c dlambda / lambda^2.
double bcf_from_fwhm(double delta_nu_in_hz, double fwhm_wavelength_m, double center_wavelength_m);

}  // namespace pmtol

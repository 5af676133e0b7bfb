#pragma once

#include <complex>
#include <span>
#include <string>
#include <vector>

#include "pmtol/noise.hpp"
#include "pmtol/process.hpp"
#include "pmtol/provider.hpp"

namespace pmtol {

enum class WaveId { wave1, wave2, wave3 };

// Which wavelength is swept and which is held fixed; the third follows from
// energy conservation. degenerate_shg forces lambda1 = lambda2 = swept.
struct ScanSpec {
  WaveId swept = WaveId::wave1;
  WaveId fixed = WaveId::wave2;
  std::vector<double> axis_m;
  bool degenerate_shg = false;
};

struct SpectrumMeta {
  std::string process;
  double length_m = 0.0;
  double dz_m = 0.0;
  std::string profile;
};

// Complex phasematching amplitude over a scan axis, normalized per unit
// length so the ideal peak intensity is 1.
struct Spectrum {
  std::vector<double> axis;  // wavelengths (m), or dimensionless x for the analytic form
  std::vector<std::complex<double>> amplitude;
  SpectrumMeta meta;

  std::size_t size() const { return axis.size(); }
  double intensity(std::size_t i) const { return std::norm(amplitude[i]); }
  std::vector<double> intensities() const;
};

// amplitude(x) = sinc(x) e^{ix} on a dimensionless axis.
Spectrum ideal_sinc(const std::vector<double>& x_axis);

// Scan centred on the process' nominal swept wavelength, spanning +-n_zeros
// sinc zeros of an ideal device of length L (span derived from the local
// d(delta_beta)/d(lambda)).
ScanSpec default_scan(const DispersionProvider& provider, const Process& process,
                      ScanMode mode, double length_m, double w0_m, std::size_t points = 501,
                      double n_zeros = 6.0);

// Cumulative-phase integral for an inhomogeneous profile. The width record
// is treated as piecewise-constant per mesh cell and each cell integrates
// in closed form, so a constant profile reproduces the analytic sinc to
// machine precision. Per-axis-point cost is linear in the mesh size; width
// lookups go through an exact per-axis cubic fast path audited against
// direct provider evaluation on 10 deterministic axis points.
Spectrum integrate_spectrum(const DispersionProvider& provider, const Process& process,
                            const WidthProfile& profile, const ScanSpec& scan);

struct Envelope {
  std::vector<double> mean;
  std::vector<double> min;
  std::vector<double> max;
};

// Pointwise intensity statistics across realizations sharing one axis.
Envelope efficiency_envelope(std::span<const Spectrum> spectra);

// CSV `axis_nm,intensity,phase_rad` plus a JSON metadata sidecar.
void write_spectrum_csv(const std::string& path, const Spectrum& spectrum);
void write_spectrum_sidecar(const std::string& path, const Spectrum& spectrum,
                            const NoiseSpec& spec);

}  // namespace pmtol

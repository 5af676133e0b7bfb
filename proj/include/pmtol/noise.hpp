#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace pmtol {

// Width-noise recipe: spectral amplitude |f|^-gamma with random phases
// (gamma = 0 white, gamma = 1 pink), worst-case deviation delta_w.
struct NoiseSpec {
  double gamma = 0.0;
  double delta_w_m = 0.0;
  std::uint64_t seed = 0;
};

// Discretized width-vs-position record on a uniform mesh starting at z = 0:
// widths[m] is w(m * dz).
struct WidthProfile {
  double dz_m = 0.0;
  double nominal_width_m = 0.0;
  std::vector<double> widths_m;

  std::size_t size() const { return widths_m.size(); }
  double length_m() const { return dz_m * static_cast<double>(widths_m.size()); }
};

struct ProfileDiag {
  // Largest imaginary component of the inverse transform, mapped through
  // the same scale the normalization applies to the real part (metres).
  double imag_residual_m = 0.0;
};

// Raw complex inverse DFT of the synthesized noise spectrum, before any
// normalization. Exposed so tests can check the Hermitian-symmetry-forced
// realness independently. Deterministic in (n, gamma, seed).
std::vector<std::complex<double>> noise_sequence(std::size_t n, double dz_m, double gamma,
                                                 std::uint64_t seed);

// Appendix-style synthesis: spectrum C_k = |f_k|^-gamma e^{i phi_k} with
// phi_-k = -phi_k (C_0 = 0, even-N Nyquist bin snapped real), inverse
// transform, then affine normalization to mean w0 and max deviation
// delta_w. Bit-reproducible for a given (seed, L, dz, w0) on any platform.
WidthProfile generate_profile(double length_m, double dz_m, double w0_m, const NoiseSpec& spec,
                              ProfileDiag* diag = nullptr);

// Linear interpolation onto a finer uniform mesh; the pitch is snapped to
// span/(N-1) so both endpoints are preserved. No re-normalization.
WidthProfile resample_profile(const WidthProfile& profile, double dz_new_m);

// CSV `z_um,width_um` (full round-trip precision) plus a JSON sidecar
// carrying {seed, gamma, delta_w_um, w0_um, dz_um}.
void write_profile_csv(const std::string& path, const WidthProfile& profile);
WidthProfile read_profile_csv(const std::string& path);
void write_profile_sidecar(const std::string& path, const WidthProfile& profile,
                           const NoiseSpec& spec);

}  // namespace pmtol

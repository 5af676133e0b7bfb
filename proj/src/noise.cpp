#include "pmtol/noise.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <json.hpp>

#include "pmtol/constants.hpp"
#include "pmtol/csv.hpp"
#include "pmtol/errors.hpp"
#include "pmtol/units.hpp"

namespace pmtol {

namespace {

// Uniform phase in [0, 2pi) from the top 53 bits of the generator output.
// Built by hand (not uniform_real_distribution) so the stream is identical
// on every platform: mt19937_64 itself is pinned by the standard.
inline double draw_phase(std::mt19937_64& rng) {
  return two_pi * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
}

// The CSV stores micrometres while widths live in metres, and um <-> m is
// not bit-exact both ways. Generated widths are therefore snapped into the
// importer's image (w = fl(u * 1e-6) for some double u), and the exporter
// recovers such a u so export -> import is the identity.
inline double snap_to_um_image(double w_m) { return (w_m * 1e6) * 1e-6; }

std::string um_str_exact(double v_m) {
  const double u0 = v_m * 1e6;
  std::string best;
  double u_up = u0, u_dn = u0;
  for (int k = 0; k <= 3; ++k) {
    for (const double u : {u_up, u_dn}) {
      if (u * 1e-6 == v_m) {
        std::string s = num_str(u);
        if (best.empty() || s.size() < best.size()) best = s;
      }
    }
    u_up = std::nextafter(u_up, std::numeric_limits<double>::infinity());
    u_dn = std::nextafter(u_dn, -std::numeric_limits<double>::infinity());
  }
  return best.empty() ? num_str(u0) : best;
}

}  // namespace

std::vector<std::complex<double>> noise_sequence(std::size_t n, double dz_m, double gamma,
                                                 std::uint64_t seed) {
  if (n < 2) fail(errc::mesh_too_coarse, "noise mesh needs at least 2 points");
  const double df = 1.0 / (static_cast<double>(n) * dz_m);  // 1/L

  // Spectrum C_k = |f_k|^-gamma e^{i phi_k} with phi_{-k} = -phi_k so the
  // transform is real; bin 0 carries no power (the mean is imposed by the
  // normalization step instead). For even n the unpaired half-sampling bin
  // is its own conjugate partner and is snapped to a real value, phase in
  // {0, pi}, keeping the |f|^-gamma magnitude.
  std::vector<std::complex<double>> spectrum(n, {0.0, 0.0});
  std::mt19937_64 rng(seed);
  const std::size_t paired = (n - 1) / 2;
  for (std::size_t k = 1; k <= paired; ++k) {
    const double phi = draw_phase(rng);
    const double mag = std::pow(static_cast<double>(k) * df, -gamma);
    spectrum[k] = std::polar(mag, phi);
    spectrum[n - k] = std::polar(mag, -phi);
  }
  if (n % 2 == 0) {
    const double phi = draw_phase(rng);
    const double mag = std::pow(static_cast<double>(n / 2) * df, -gamma);
    spectrum[n / 2] = (phi < 0.5 * two_pi) ? mag : -mag;
  }

  // Inverse DFT, x_m = (1/N) sum_k C_k e^{+2pi i k m / N}. Sizes here are a
  // few hundred to a few thousand, so the direct transform with a
  // precomputed twiddle table costs milliseconds and keeps the summation
  // order (and therefore the output bits) fixed.
  std::vector<std::complex<double>> twiddle(n);
  for (std::size_t j = 0; j < n; ++j) {
    twiddle[j] = std::polar(1.0, two_pi * static_cast<double>(j) / static_cast<double>(n));
  }
  std::vector<std::complex<double>> out(n);
  for (std::size_t m = 0; m < n; ++m) {
    std::complex<double> acc{0.0, 0.0};
    std::size_t idx = 0;
    for (std::size_t k = 0; k < n; ++k) {
      acc += spectrum[k] * twiddle[idx];
      idx += m;
      if (idx >= n) idx -= n;
    }
    out[m] = acc / static_cast<double>(n);
  }
  return out;
}

WidthProfile generate_profile(double length_m, double dz_m, double w0_m, const NoiseSpec& spec,
                              ProfileDiag* diag) {
  if (!(dz_m > 0.0)) fail(errc::bad_input, "mesh pitch must be positive");
  if (!(w0_m > 0.0)) fail(errc::bad_input, "nominal width must be positive");
  if (spec.delta_w_m < 0.0) fail(errc::bad_input, "delta_w must be >= 0");
  if (!(spec.gamma >= 0.0 && spec.gamma <= 2.0))
    fail(errc::bad_input, "gamma outside the accepted [0, 2] range");
  const long long n_ll = std::llround(length_m / dz_m);
  if (n_ll < 2) fail(errc::mesh_too_coarse, "L/dz rounds below 2 mesh points");
  const std::size_t n = static_cast<std::size_t>(n_ll);

  WidthProfile profile;
  profile.dz_m = dz_m;
  profile.nominal_width_m = w0_m;
  profile.widths_m.assign(n, snap_to_um_image(w0_m));
  if (diag) diag->imag_residual_m = 0.0;
  if (spec.delta_w_m == 0.0) return profile;

  const auto raw = noise_sequence(n, dz_m, spec.gamma, spec.seed);
  std::vector<double> dev(n);
  double mean = 0.0;
  for (std::size_t m = 0; m < n; ++m) {
    dev[m] = raw[m].real();
    mean += dev[m];
  }
  mean /= static_cast<double>(n);
  double max_abs = 0.0, max_imag = 0.0;
  for (std::size_t m = 0; m < n; ++m) {
    dev[m] -= mean;
    max_abs = std::max(max_abs, std::abs(dev[m]));
    max_imag = std::max(max_imag, std::abs(raw[m].imag()));
  }
  if (max_abs == 0.0)
    fail(errc::bad_input, "noise realization is identically zero; cannot impose delta_w");

  const double scale = spec.delta_w_m / max_abs;
  for (std::size_t m = 0; m < n; ++m)
    profile.widths_m[m] = snap_to_um_image(w0_m + dev[m] * scale);
  if (diag) diag->imag_residual_m = max_imag * scale;
  return profile;
}

WidthProfile resample_profile(const WidthProfile& profile, double dz_new_m) {
  const std::size_t n = profile.size();
  if (n < 2) fail(errc::mesh_too_coarse, "profile needs at least 2 samples");
  if (!(dz_new_m > 0.0)) fail(errc::bad_input, "new pitch must be positive");
  if (dz_new_m > profile.dz_m * (1.0 + 1e-12))
    fail(errc::upsample_only, "resampling only refines the mesh (dz_new <= dz)");
  if (dz_new_m == profile.dz_m) return profile;

  const double span = profile.dz_m * static_cast<double>(n - 1);
  const std::size_t n_new = static_cast<std::size_t>(std::llround(span / dz_new_m)) + 1;
  // Snap the pitch so the last sample lands exactly on the old endpoint.
  const double dz_actual = span / static_cast<double>(n_new - 1);

  WidthProfile out;
  out.dz_m = dz_actual;
  out.nominal_width_m = profile.nominal_width_m;
  out.widths_m.resize(n_new);
  for (std::size_t j = 0; j < n_new; ++j) {
    const double z = std::min(static_cast<double>(j) * dz_actual, span);
    const double cell = z / profile.dz_m;
    std::size_t i = static_cast<std::size_t>(cell);
    if (i >= n - 1) i = n - 2;
    const double t = cell - static_cast<double>(i);
    out.widths_m[j] = (1.0 - t) * profile.widths_m[i] + t * profile.widths_m[i + 1];
  }
  out.widths_m.back() = profile.widths_m.back();
  out.widths_m.front() = profile.widths_m.front();
  return out;
}

void write_profile_csv(const std::string& path, const WidthProfile& profile) {
  std::string text = "z_um,width_um\n";
  for (std::size_t m = 0; m < profile.size(); ++m) {
    text += um_str_exact(static_cast<double>(m) * profile.dz_m);
    text += ',';
    text += um_str_exact(profile.widths_m[m]);
    text += '\n';
  }
  write_text_file(path, text);
}

WidthProfile read_profile_csv(const std::string& path) {
  const std::string text = read_text_file(path);
  std::size_t pos = 0;
  auto next_line = [&](std::string& line) {
    if (pos >= text.size()) return false;
    const std::size_t eol = text.find('\n', pos);
    line = text.substr(pos, eol == std::string::npos ? std::string::npos : eol - pos);
    pos = eol == std::string::npos ? text.size() : eol + 1;
    return true;
  };
  std::string line;
  if (!next_line(line) || split_csv_line(line) != std::vector<std::string>{"z_um", "width_um"})
    fail(errc::bad_input, path + ": header must be z_um,width_um");

  std::vector<double> zs, ws;
  while (next_line(line)) {
    if (line.empty() || line == "\r") continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 2) fail(errc::bad_input, path + ": expected 2 fields per row");
    zs.push_back(from_um(std::stod(fields[0])));
    ws.push_back(from_um(std::stod(fields[1])));
  }
  if (zs.size() < 2) fail(errc::mesh_too_coarse, path + ": profile needs at least 2 samples");
  const double dz = zs[1] - zs[0];
  if (!(dz > 0.0)) fail(errc::bad_input, path + ": z must be increasing");
  for (std::size_t i = 1; i < zs.size(); ++i) {
    if (std::abs(zs[i] - zs[i - 1] - dz) > 1e-9 * dz)
      fail(errc::bad_input, path + ": mesh must be uniform");
  }

  WidthProfile profile;
  profile.dz_m = dz;
  profile.widths_m = std::move(ws);
  double mean = 0.0;
  for (double w : profile.widths_m) mean += w;
  profile.nominal_width_m = mean / static_cast<double>(profile.size());
  return profile;
}

void write_profile_sidecar(const std::string& path, const WidthProfile& profile,
                           const NoiseSpec& spec) {
  nlohmann::json j;
  j["seed"] = spec.seed;
  j["gamma"] = spec.gamma;
  j["delta_w_um"] = to_um(spec.delta_w_m);
  j["w0_um"] = to_um(profile.nominal_width_m);
  j["dz_um"] = to_um(profile.dz_m);
  write_text_file(path, j.dump(2) + "\n");
}

}  // namespace pmtol

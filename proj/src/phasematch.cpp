#include "pmtol/phasematch.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <json.hpp>

#include "pmtol/constants.hpp"
#include "pmtol/csv.hpp"
#include "pmtol/dispersion.hpp"
#include "pmtol/errors.hpp"
#include "pmtol/interp.hpp"
#include "pmtol/units.hpp"

namespace pmtol {

std::vector<double> Spectrum::intensities() const {
  std::vector<double> out(amplitude.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::norm(amplitude[i]);
  return out;
}

Spectrum ideal_sinc(const std::vector<double>& x_axis) {
  Spectrum s;
  s.axis = x_axis;
  s.amplitude.resize(x_axis.size());
  for (std::size_t i = 0; i < x_axis.size(); ++i) {
    const double x = x_axis[i];
    s.amplitude[i] = sinc(x) * std::polar(1.0, x);
  }
  s.meta.process = "ideal";
  s.meta.profile = "analytic";
  return s;
}

namespace {

struct WaveTriple {
  double l1, l2, l3;
};

const Wave& wave_of(const Process& p, WaveId id) {
  switch (id) {
    case WaveId::wave1: return p.wave1;
    case WaveId::wave2: return p.wave2;
    case WaveId::wave3: return p.wave3;
  }
  fail(errc::bad_input, "bad wave id");
}

// Energy-conservation closure: the swept wave takes the axis value, the
// fixed wave keeps its catalog value, the remaining one is solved.
WaveTriple resolve_wavelengths(const Process& process, const ScanSpec& scan, double axis_value) {
  WaveTriple t{process.wave1.lambda_m, process.wave2.lambda_m, process.wave3.lambda_m};
  if (scan.degenerate_shg) {
    t.l1 = axis_value;
    t.l2 = axis_value;
    t.l3 = 0.5 * axis_value;
    return t;
  }
  if (scan.swept == scan.fixed) fail(errc::bad_input, "scan cannot sweep and fix the same wave");
  auto assign = [&](WaveId id, double v) {
    if (id == WaveId::wave1) t.l1 = v;
    else if (id == WaveId::wave2) t.l2 = v;
    else t.l3 = v;
  };
  assign(scan.swept, axis_value);
  // Solve the wave that is neither swept nor fixed.
  const bool solve1 = scan.swept != WaveId::wave1 && scan.fixed != WaveId::wave1;
  const bool solve2 = scan.swept != WaveId::wave2 && scan.fixed != WaveId::wave2;
  double inv;
  if (solve1) {
    inv = 1.0 / t.l3 - 1.0 / t.l2;
    if (!(inv > 0.0)) fail(errc::out_of_range, "energy conservation gives non-positive lambda1");
    t.l1 = 1.0 / inv;
  } else if (solve2) {
    inv = 1.0 / t.l3 - 1.0 / t.l1;
    if (!(inv > 0.0)) fail(errc::out_of_range, "energy conservation gives non-positive lambda2");
    t.l2 = 1.0 / inv;
  } else {
    t.l3 = 1.0 / (1.0 / t.l2 + 1.0 / t.l1);
  }
  return t;
}

double grating_term(const Process& process) {
  switch (process.poling.state) {
    case Poling::State::unpoled: return 0.0;
    case Poling::State::value: return two_pi / process.poling.period_m;
    case Poling::State::unset:
      fail(errc::missing_period,
           "process '" + process.name + "' has no QPM period; assign one or mark it unpoled");
  }
  return 0.0;
}

// delta_beta as a cubic-reconstructed function of width at fixed wavelengths.
// Built from exact node values and analytic node slopes on provider-chosen
// nodes, so for tabulated dispersion it coincides with direct evaluation.
CubicHermiteSeries build_width_curve(const DispersionProvider& provider, const Process& process,
                                     const WaveTriple& t, const std::vector<double>& nodes) {
  std::vector<double> vals(nodes.size(), 0.0), slopes(nodes.size(), 0.0);
  const struct {
    double lambda;
    const Wave* wave;
    double sign;
  } terms[3] = {{t.l3, &process.wave3, +1.0},
                {t.l2, &process.wave2, -1.0},
                {t.l1, &process.wave1, -1.0}};
  for (const auto& term : terms) {
    const double factor = term.sign * term.wave->direction * two_pi / term.lambda;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      vals[i] += factor * provider.n_eff(term.lambda, nodes[i], term.wave->pol);
      slopes[i] += factor * provider.n_eff_dw(term.lambda, nodes[i], term.wave->pol);
    }
  }
  return CubicHermiteSeries(nodes, std::move(vals), std::move(slopes));
}

double direct_delta_beta(const DispersionProvider& provider, const Process& process,
                         const WaveTriple& t, double width) {
  const struct {
    double lambda;
    const Wave* wave;
    double sign;
  } terms[3] = {{t.l3, &process.wave3, +1.0},
                {t.l2, &process.wave2, -1.0},
                {t.l1, &process.wave1, -1.0}};
  double db = 0.0;
  for (const auto& term : terms) {
    db += term.sign * term.wave->direction * two_pi *
          provider.n_eff(term.lambda, width, term.wave->pol) / term.lambda;
  }
  return db;
}

// One axis point of the cumulative-phase sum. Each mesh cell holds a
// constant mismatch and integrates in closed form:
//   cell_n = sinc(h_n) e^{i(theta_n + h_n)} dz / L,  h_n = dbeta_n dz / 2,
// with theta_n the running phase at the cell's left edge. A homogeneous
// profile therefore reproduces sinc(x)e^{ix} exactly.
template <typename DeltaBetaFn>
std::complex<double> integrate_point(const WidthProfile& profile, double grating,
                                     DeltaBetaFn&& db_of_w) {
  const double dz = profile.dz_m;
  double theta = 0.0;
  std::complex<double> acc{0.0, 0.0};
  for (double w : profile.widths_m) {
    const double mismatch = db_of_w(w) - grating;
    const double h = 0.5 * mismatch * dz;
    acc += sinc(h) * std::polar(1.0, theta + h);
    theta += mismatch * dz;
  }
  return acc / static_cast<double>(profile.size());
}

}  // namespace

ScanSpec default_scan(const DispersionProvider& provider, const Process& process, ScanMode mode,
                      double length_m, double w0_m, std::size_t points, double n_zeros) {
  if (points < 2) fail(errc::bad_input, "scan needs at least 2 points");
  if (!(length_m > 0.0)) fail(errc::bad_input, "device length must be positive");

  ScanSpec scan;
  scan.degenerate_shg = (mode == ScanMode::degenerate);
  scan.swept = WaveId::wave1;
  scan.fixed = WaveId::wave2;
  const double center = wave_of(process, scan.swept).lambda_m;

  // Local slope of the mismatch along the swept wavelength, for converting
  // the +-n_zeros dimensionless span into a wavelength span.
  const double dl = 1e-6 * center;
  const auto lo = resolve_wavelengths(process, scan, center - dl);
  const auto hi = resolve_wavelengths(process, scan, center + dl);
  const double slope = (direct_delta_beta(provider, process, hi, w0_m) -
                        direct_delta_beta(provider, process, lo, w0_m)) /
                       (2.0 * dl);
  if (slope == 0.0)
    fail(errc::bad_input, "mismatch does not vary along the scan; cannot derive an axis");

  double half_span = n_zeros * (two_pi / length_m) / std::abs(slope);
  // Shrink if the span would push any resolved wavelength outside validity.
  const Window lw = provider.lambda_window();
  for (int tries = 0; tries < 64; ++tries) {
    bool ok = true;
    for (double edge : {center - half_span, center + half_span}) {
      const auto t = resolve_wavelengths(process, scan, edge);
      ok = ok && lw.contains(t.l1) && lw.contains(t.l2) && lw.contains(t.l3);
    }
    if (ok) break;
    half_span *= 0.8;
  }

  scan.axis_m.resize(points);
  for (std::size_t i = 0; i < points; ++i) {
    scan.axis_m[i] =
        center - half_span +
        2.0 * half_span * static_cast<double>(i) / static_cast<double>(points - 1);
  }
  return scan;
}

Spectrum integrate_spectrum(const DispersionProvider& provider, const Process& process,
                            const WidthProfile& profile, const ScanSpec& scan) {
  if (profile.size() < 2) fail(errc::mesh_too_coarse, "profile needs at least 2 samples");
  if (scan.axis_m.empty()) fail(errc::bad_input, "scan axis is empty");
  for (std::size_t i = 1; i < scan.axis_m.size(); ++i) {
    if (!(scan.axis_m[i] > scan.axis_m[i - 1]))
      fail(errc::bad_input, "scan axis must be strictly increasing");
  }
  const double grating = grating_term(process);

  const auto [wmin_it, wmax_it] =
      std::minmax_element(profile.widths_m.begin(), profile.widths_m.end());
  const auto nodes = provider.curve_nodes(*wmin_it, *wmax_it);

  Spectrum s;
  s.axis = scan.axis_m;
  s.amplitude.resize(s.axis.size());
  s.meta.process = process.name;
  s.meta.length_m = profile.length_m();
  s.meta.dz_m = profile.dz_m;
  s.meta.profile = "mesh[" + std::to_string(profile.size()) + "]";

  const bool constant_width = (*wmin_it == *wmax_it);
  std::vector<WaveTriple> triples(s.axis.size());
  for (std::size_t i = 0; i < s.axis.size(); ++i) {
    triples[i] = resolve_wavelengths(process, scan, s.axis[i]);
    if (constant_width) {
      // Homogeneous device: one mismatch per axis point, no reconstruction.
      const double db = direct_delta_beta(provider, process, triples[i], *wmin_it);
      s.amplitude[i] = integrate_point(profile, grating, [&](double) { return db; });
    } else {
      const auto curve = build_width_curve(provider, process, triples[i], nodes);
      s.amplitude[i] = integrate_point(profile, grating, curve);
    }
  }

  // Audit the cubic fast path on 10 deterministic axis points against direct
  // per-site provider evaluation; fall back to the direct path everywhere if
  // the reconstruction ever drifts.
  std::mt19937_64 audit_rng(0x70617463ull ^ (profile.size() << 16) ^ s.axis.size());
  bool fallback = false;
  for (int a = 0; a < 10 && !fallback; ++a) {
    const std::size_t i = static_cast<std::size_t>(audit_rng() % s.axis.size());
    const auto direct = integrate_point(profile, grating, [&](double w) {
      return direct_delta_beta(provider, process, triples[i], w);
    });
    if (std::abs(direct - s.amplitude[i]) > 1e-8) fallback = true;
  }
  if (fallback) {
    for (std::size_t i = 0; i < s.axis.size(); ++i) {
      s.amplitude[i] = integrate_point(profile, grating, [&](double w) {
        return direct_delta_beta(provider, process, triples[i], w);
      });
    }
  }
  return s;
}

Envelope efficiency_envelope(std::span<const Spectrum> spectra) {
  if (spectra.empty()) fail(errc::empty_spectrum, "no spectra to aggregate");
  const auto& axis = spectra.front().axis;
  for (const auto& s : spectra) {
    if (s.axis.size() != axis.size() || !std::equal(axis.begin(), axis.end(), s.axis.begin()))
      fail(errc::axis_mismatch, "spectra do not share one axis");
  }
  const std::size_t n = axis.size();
  Envelope env;
  env.mean.assign(n, 0.0);
  env.min.assign(n, 0.0);
  env.max.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double lo = std::norm(spectra[0].amplitude[i]);
    double hi = lo, sum = 0.0;
    for (const auto& s : spectra) {
      const double v = std::norm(s.amplitude[i]);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
      sum += v;
    }
    env.mean[i] = sum / static_cast<double>(spectra.size());
    env.min[i] = lo;
    env.max[i] = hi;
  }
  return env;
}

void write_spectrum_csv(const std::string& path, const Spectrum& spectrum) {
  std::string text = "axis_nm,intensity,phase_rad\n";
  for (std::size_t i = 0; i < spectrum.size(); ++i) {
    text += num_str(to_nm(spectrum.axis[i]));
    text += ',';
    text += num_str(std::norm(spectrum.amplitude[i]));
    text += ',';
    text += num_str(std::arg(spectrum.amplitude[i]));
    text += '\n';
  }
  write_text_file(path, text);
}

void write_spectrum_sidecar(const std::string& path, const Spectrum& spectrum,
                            const NoiseSpec& spec) {
  nlohmann::json j;
  j["process"] = spectrum.meta.process;
  j["L_mm"] = to_mm(spectrum.meta.length_m);
  j["dz_um"] = to_um(spectrum.meta.dz_m);
  j["seed"] = spec.seed;
  j["gamma"] = spec.gamma;
  j["delta_w_um"] = to_um(spec.delta_w_m);
  write_text_file(path, j.dump(2) + "\n");
}

}  // namespace pmtol

// Command-line front end: every subcommand is a thin wrapper over the
// library and emits plain CSV (stdout or files) plus JSON sidecars, leaving
// plotting to external tools.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "pmtol/constants.hpp"
#include "pmtol/csv.hpp"
#include "pmtol/dispersion.hpp"
#include "pmtol/errors.hpp"
#include "pmtol/metrics.hpp"
#include "pmtol/montecarlo.hpp"
#include "pmtol/noise.hpp"
#include "pmtol/phasematch.hpp"
#include "pmtol/units.hpp"

namespace fs = std::filesystem;
using namespace pmtol;

namespace {

struct GlobalOpts {
  std::string provider = "surrogate:tiln";
  std::string data_dir;
  std::uint64_t seed = 0;
  bool seed_set = false;
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  std::string out;
};

std::string resolved_data_dir(const GlobalOpts& g) {
  return g.data_dir.empty() ? default_data_dir() : g.data_dir;
}

void emit(const std::string& out_path, const std::string& csv) {
  if (out_path.empty()) {
    std::fputs(csv.c_str(), stdout);
  } else {
    write_text_file(out_path, csv);
  }
}

Process poled_at(const DispersionProvider& provider, Process process, double w0_m) {
  try {
    process.poling = Poling::with_period(qpm_period(provider, process, w0_m));
  } catch (const Error& e) {
    if (e.code() != errc::degenerate_no_poling) throw;
    process.poling = Poling::unpoled();
  }
  return process;
}

int run_sensitivity(const GlobalOpts& g, const std::string& process_name, double wmin_um,
                    double wmax_um, double step_um) {
  const auto provider = make_provider(g.provider, resolved_data_dir(g));
  const auto preset = find_preset(process_name, resolved_data_dir(g));
  std::string csv = "width_um,sensitivity_rad_per_m_um\n";
  const double lo = from_um(wmin_um), hi = from_um(wmax_um), step = from_um(step_um);
  const std::size_t n = static_cast<std::size_t>(std::ceil((hi - lo) / step - 1e-9));
  for (std::size_t i = 0; i <= n; ++i) {
    const double w = std::min(lo + static_cast<double>(i) * step, hi);
    const double s = sensitivity(*provider, preset.process, w, 5e-8, true);
    // rad/m per metre -> rad/m per micrometre
    csv += num_str(to_um(w)) + "," + num_str(s * 1e-6) + "\n";
  }
  emit(g.out, csv);
  return 0;
}

int run_lmax(const GlobalOpts& g, const std::string& process_name,
             const std::vector<double>& widths_um, double dw_min_um, double dw_max_um,
             int dw_steps) {
  const auto provider = make_provider(g.provider, resolved_data_dir(g));
  const auto preset = find_preset(process_name, resolved_data_dir(g));
  std::string csv = "delta_w_um,width_um,l_max_mm\n";
  for (int i = 0; i < dw_steps; ++i) {
    const double dw_um =
        dw_min_um + (dw_max_um - dw_min_um) * static_cast<double>(i) /
                        static_cast<double>(std::max(1, dw_steps - 1));
    for (double w_um : widths_um) {
      const double s = sensitivity(*provider, preset.process, from_um(w_um), 5e-8, true);
      std::string cell;
      try {
        cell = num_str(to_mm(l_max(s, from_um(dw_um))));
      } catch (const Error& e) {
        if (e.code() != errc::infinite_tolerance) throw;
        cell = "unbounded";
      }
      csv += num_str(dw_um) + "," + num_str(w_um) + "," + cell + "\n";
    }
  }
  emit(g.out, csv);
  return 0;
}

int run_profile(const GlobalOpts& g, double L_mm, double dz_um, double w0_um, double gamma,
                double delta_w_um) {
  const NoiseSpec spec{gamma, from_um(delta_w_um), g.seed};
  const WidthProfile profile = generate_profile(from_mm(L_mm), from_um(dz_um), from_um(w0_um), spec);
  const fs::path dir = g.out.empty() ? fs::path(".") : fs::path(g.out);
  fs::create_directories(dir);
  write_profile_csv((dir / "profile.csv").string(), profile);
  write_profile_sidecar((dir / "profile.json").string(), profile, spec);
  std::cout << "wrote " << (dir / "profile.csv").string() << " (" << profile.size()
            << " samples)\n";
  return 0;
}

int run_spectrum(const GlobalOpts& g, const std::string& process_name, double L_mm, double dz_um,
                 double w0_um, double gamma, double delta_w_um, const std::string& profile_path,
                 int points, double zeros) {
  const std::string data_dir = resolved_data_dir(g);
  const auto provider = make_provider(g.provider, data_dir);
  const auto preset = find_preset(process_name, data_dir);

  WidthProfile profile;
  NoiseSpec spec{gamma, from_um(delta_w_um), g.seed};
  bool generated = false;
  if (!profile_path.empty()) {
    profile = read_profile_csv(profile_path);
    if (w0_um <= 0.0) w0_um = to_um(profile.nominal_width_m);
  } else {
    profile = generate_profile(from_mm(L_mm), from_um(dz_um), from_um(w0_um), spec);
    generated = true;
  }

  const Process process = poled_at(*provider, preset.process, from_um(w0_um));
  const ScanSpec scan =
      default_scan(*provider, process, preset.scan_mode, profile.length_m(), from_um(w0_um),
                   static_cast<std::size_t>(points), zeros);
  const Spectrum spectrum = integrate_spectrum(*provider, process, profile, scan);

  const fs::path dir = g.out.empty() ? fs::path(".") : fs::path(g.out);
  fs::create_directories(dir);
  write_spectrum_csv((dir / "spectrum.csv").string(), spectrum);
  write_spectrum_sidecar((dir / "spectrum.json").string(), spectrum, spec);
  if (generated) {
    write_profile_csv((dir / "profile.csv").string(), profile);
    write_profile_sidecar((dir / "profile.json").string(), profile, spec);
  }
  std::cout << "wrote " << (dir / "spectrum.csv").string() << " (peak intensity "
            << num_str(max_efficiency(spectrum)) << ")\n";
  return 0;
}

int run_ensemble(const GlobalOpts& g, const std::string& config_path) {
  ExperimentConfig cfg = load_config(config_path);
  if (!g.provider.empty() && g.provider != "surrogate:tiln") cfg.provider = g.provider;
  if (!g.data_dir.empty()) cfg.data_dir = g.data_dir;
  if (g.seed_set) cfg.master_seed = g.seed;
  const Dataset ds = run_experiment(cfg, g.threads);
  const std::string out = g.out.empty() ? "pmtol_dataset" : g.out;
  write_dataset(out, ds);
  std::cout << "wrote dataset to " << out << " (" << ds.cells.size() << " cells";
  if (!ds.failures.empty()) std::cout << ", " << ds.failures.size() << " failed";
  std::cout << ")\n";
  return ds.failures.empty() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"phasematching tolerance toolkit for nonlinear waveguides"};
  app.require_subcommand(1);

  GlobalOpts g;
  app.add_option("--provider", g.provider, "dispersion source: surrogate:<fixture> or table:<csv>");
  app.add_option("--data-dir", g.data_dir, "directory with presets/fixture data files");
  auto* seed_opt = app.add_option("--seed", g.seed, "noise seed / master seed override");
  app.add_option("--threads", g.threads, "max parallel work units");
  app.add_option("--out", g.out, "output file or directory");

  // sensitivity
  auto* cmd_sens = app.add_subcommand("sensitivity", "process sensitivity vs waveguide width");
  std::string process_name;
  double wmin_um = 5.5, wmax_um = 22.0, step_um = 0.25;
  cmd_sens->add_option("--process", process_name, "process preset name")->required();
  cmd_sens->add_option("--wmin", wmin_um, "width range start (um)");
  cmd_sens->add_option("--wmax", wmax_um, "width range end (um)");
  cmd_sens->add_option("--step", step_um, "width step (um)");

  // lmax
  auto* cmd_lmax = app.add_subcommand("lmax", "maximum length vs width error");
  std::vector<double> widths_um{7.0};
  double dw_min_um = 0.05, dw_max_um = 0.5;
  int dw_steps = 10;
  cmd_lmax->add_option("--process", process_name, "process preset name")->required();
  cmd_lmax->add_option("--widths", widths_um, "nominal widths (um)")->delimiter(',');
  cmd_lmax->add_option("--dw-min", dw_min_um, "smallest width error (um)");
  cmd_lmax->add_option("--dw-max", dw_max_um, "largest width error (um)");
  cmd_lmax->add_option("--dw-steps", dw_steps, "number of width-error rows");

  // profile
  auto* cmd_profile = app.add_subcommand("profile", "generate a noisy width profile");
  double L_mm = 20.0, dz_um = 50.0, w0_um = 7.0, gamma = 1.0, delta_w_um = 0.0;
  cmd_profile->add_option("--L", L_mm, "device length (mm)");
  cmd_profile->add_option("--dz", dz_um, "mesh pitch (um)");
  cmd_profile->add_option("--w0", w0_um, "nominal width (um)");
  cmd_profile->add_option("--gamma", gamma, "spectral amplitude exponent (0 white, 1 pink)");
  cmd_profile->add_option("--delta-w", delta_w_um, "maximum width deviation (um)");

  // spectrum
  auto* cmd_spectrum = app.add_subcommand("spectrum", "phasematching spectrum of one device");
  std::string profile_path;
  int points = 501;
  double zeros = 6.0;
  cmd_spectrum->add_option("--process", process_name, "process preset name")->required();
  cmd_spectrum->add_option("--L", L_mm, "device length (mm)");
  cmd_spectrum->add_option("--dz", dz_um, "mesh pitch (um)");
  cmd_spectrum->add_option("--w0", w0_um, "nominal width (um)");
  cmd_spectrum->add_option("--gamma", gamma, "spectral amplitude exponent");
  cmd_spectrum->add_option("--delta-w", delta_w_um, "maximum width deviation (um)");
  cmd_spectrum->add_option("--profile", profile_path, "read the width profile from a CSV instead");
  cmd_spectrum->add_option("--points", points, "scan axis points");
  cmd_spectrum->add_option("--zeros", zeros, "scan halfspan in ideal sinc zeros");

  // ensemble
  auto* cmd_ensemble = app.add_subcommand("ensemble", "seeded Monte Carlo over a parameter grid");
  std::string config_path;
  cmd_ensemble->add_option("--config", config_path, "experiment config file")->required();

  // squeezing
  auto* cmd_squeezing = app.add_subcommand("squeezing", "single-pass squeezing from the loss model");
  double eta = 0.49, p_in = 0.5, alpha = 0.1, length_cm = 4.0;
  cmd_squeezing->add_option("--eta-norm", eta, "normalized conversion efficiency (1/(W cm^2))");
  cmd_squeezing->add_option("--p-in", p_in, "pump power (W)");
  cmd_squeezing->add_option("--alpha", alpha, "propagation loss (dB/cm)");
  cmd_squeezing->add_option("--length-cm", length_cm, "device length (cm)");

  // bins
  auto* cmd_bins = app.add_subcommand("bins", "frequency-bin count for a band");
  double band_nm = 40.0, bin_nm = 0.4;
  cmd_bins->add_option("--band", band_nm, "available band (nm)");
  cmd_bins->add_option("--bin", bin_nm, "bin bandwidth = phasematching FWHM (nm)");

  // bcf
  auto* cmd_bcf = app.add_subcommand("bcf", "bandwidth compression factor");
  double nu_in_ghz = 963.0, nu_out_ghz = 0.0, fwhm_nm = 0.0, center_nm = 553.0;
  cmd_bcf->add_option("--nu-in", nu_in_ghz, "input bandwidth (GHz)");
  cmd_bcf->add_option("--nu-out", nu_out_ghz, "output bandwidth (GHz)");
  cmd_bcf->add_option("--fwhm", fwhm_nm, "output FWHM in wavelength (nm)");
  cmd_bcf->add_option("--center", center_nm, "output centre wavelength (nm)");

  // presets
  auto* cmd_presets = app.add_subcommand("presets", "process catalog");
  auto* cmd_presets_list = cmd_presets->add_subcommand("list", "list shipped process presets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  g.seed_set = seed_opt->count() > 0;

  try {
    if (cmd_sens->parsed()) return run_sensitivity(g, process_name, wmin_um, wmax_um, step_um);
    if (cmd_lmax->parsed())
      return run_lmax(g, process_name, widths_um, dw_min_um, dw_max_um, dw_steps);
    if (cmd_profile->parsed()) return run_profile(g, L_mm, dz_um, w0_um, gamma, delta_w_um);
    if (cmd_spectrum->parsed())
      return run_spectrum(g, process_name, L_mm, dz_um, w0_um, gamma, delta_w_um, profile_path,
                          points, zeros);
    if (cmd_ensemble->parsed()) return run_ensemble(g, config_path);
    if (cmd_squeezing->parsed()) {
      std::cout << num_str(squeezing_db({eta, p_in, alpha, length_cm})) << "\n";
      return 0;
    }
    if (cmd_bins->parsed()) {
      std::cout << n_bins(from_nm(band_nm), from_nm(bin_nm)) << "\n";
      return 0;
    }
    if (cmd_bcf->parsed()) {
      if (nu_out_ghz > 0.0) {
        std::cout << num_str(bcf(nu_in_ghz * 1e9, nu_out_ghz * 1e9)) << "\n";
      } else if (fwhm_nm > 0.0) {
        std::cout << num_str(bcf_from_fwhm(nu_in_ghz * 1e9, from_nm(fwhm_nm), from_nm(center_nm)))
                  << "\n";
      } else {
        fail(errc::bad_config, "pass --nu-out or --fwhm");
      }
      return 0;
    }
    if (cmd_presets->parsed()) {
      if (!cmd_presets_list->parsed()) fail(errc::bad_config, "usage: presets list");
      for (const auto& p : load_presets(resolved_data_dir(g))) {
        std::printf("%-16s %9.3f nm (%s,%+d) <- %9.3f nm (%s,%+d) + %9.3f nm (%s,%+d)  %s\n",
                    p.process.name.c_str(), to_nm(p.process.wave3.lambda_m),
                    p.process.wave3.pol.c_str(), p.process.wave3.direction,
                    to_nm(p.process.wave2.lambda_m), p.process.wave2.pol.c_str(),
                    p.process.wave2.direction, to_nm(p.process.wave1.lambda_m),
                    p.process.wave1.pol.c_str(), p.process.wave1.direction,
                    p.description.c_str());
      }
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == errc::bad_config ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

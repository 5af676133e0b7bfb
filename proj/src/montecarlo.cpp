#include "pmtol/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <set>
#include <sstream>

#include <json.hpp>

#include "pmtol/csv.hpp"
#include "pmtol/dispersion.hpp"
#include "pmtol/errors.hpp"
#include "pmtol/parallel.hpp"
#include "pmtol/units.hpp"

namespace pmtol {

using nlohmann::json;

bool operator<(const CellKey& a, const CellKey& b) {
  if (a.length_m != b.length_m) return a.length_m < b.length_m;
  if (a.delta_w_m != b.delta_w_m) return a.delta_w_m < b.delta_w_m;
  if (a.gamma != b.gamma) return a.gamma < b.gamma;
  return a.w0_m < b.w0_m;
}

bool operator==(const CellKey& a, const CellKey& b) {
  return a.length_m == b.length_m && a.delta_w_m == b.delta_w_m && a.gamma == b.gamma &&
         a.w0_m == b.w0_m;
}

const std::vector<std::string>& known_metric_names() {
  static const std::vector<std::string> names = {"max_efficiency", "fwhm_nm", "eta_norm",
                                                 "squeezing_db", "n_bins", "bcf"};
  return names;
}

namespace {

bool needs_fit(const std::vector<std::string>& metrics) {
  for (const auto& m : metrics)
    if (m == "fwhm_nm" || m == "n_bins" || m == "bcf") return true;
  return false;
}

double evaluate_metric(const std::string& name, const Spectrum& spectrum,
                       const GaussianFit* fit, const ExperimentConfig& config,
                       const CellKey& key) {
  if (name == "max_efficiency") return max_efficiency(spectrum);
  if (name == "eta_norm") return eta_norm(max_efficiency(spectrum), config.app.eta_ideal);
  if (name == "squeezing_db") {
    SqueezingInputs in;
    in.eta_norm = eta_norm(max_efficiency(spectrum), config.app.eta_ideal);
    in.p_in_w = config.app.p_in_w;
    in.alpha_db_per_cm = config.app.alpha_db_per_cm;
    in.length_cm = to_cm(key.length_m);
    return squeezing_db(in);
  }
  if (name == "fwhm_nm") return to_nm(fit->fwhm);
  if (name == "n_bins") return static_cast<double>(n_bins(config.app.band_m, fit->fwhm));
  if (name == "bcf") {
    const double axis_center = 0.5 * (spectrum.axis.front() + spectrum.axis.back());
    // With the fixed wave monochromatic the output bandwidth equals the
    // frequency width of the swept-side acceptance; converting at an
    // explicit output centre (when configured) is algebraically identical.
    double fwhm = fit->fwhm, center = axis_center;
    if (config.app.bcf_center_m > 0.0) {
      const double ratio = config.app.bcf_center_m / axis_center;
      fwhm *= ratio * ratio;
      center = config.app.bcf_center_m;
    }
    return bcf_from_fwhm(config.app.nu_in_hz, fwhm, center);
  }
  fail(errc::bad_config, "unknown metric '" + name + "'");
}

}  // namespace

EnsembleResult run_cell(const DispersionProvider& provider, const Process& process,
                        ScanMode scan_mode, const ExperimentConfig& config, const CellKey& key,
                        unsigned threads) {
  if (config.realizations < 1) fail(errc::bad_config, "realizations must be >= 1");
  const Window ww = provider.width_window();
  if (!ww.contains(key.w0_m - key.delta_w_m) || !ww.contains(key.w0_m + key.delta_w_m))
    fail(errc::width_window_exceeded, "w0 +- delta_w leaves the dispersion validity window");

  const ScanSpec scan =
      default_scan(provider, process, scan_mode, key.length_m, key.w0_m,
                   static_cast<std::size_t>(config.scan_points), config.scan_zeros);
  const bool fit_needed = needs_fit(config.metrics);
  const std::size_t reals = static_cast<std::size_t>(config.realizations);

  EnsembleResult result;
  result.key = key;
  result.seeds.resize(reals);
  std::vector<std::vector<double>> values(reals,
                                          std::vector<double>(config.metrics.size(), 0.0));

  parallel_for(reals, threads, [&](std::size_t r) {
    const std::uint64_t seed = config.master_seed ^ static_cast<std::uint64_t>(r);
    result.seeds[r] = seed;
    const NoiseSpec spec{key.gamma, key.delta_w_m, seed};
    const WidthProfile profile = generate_profile(key.length_m, config.dz_m, key.w0_m, spec);
    const Spectrum spectrum = integrate_spectrum(provider, process, profile, scan);
    GaussianFit fit;
    if (fit_needed) fit = gaussian_fwhm(spectrum);
    for (std::size_t mi = 0; mi < config.metrics.size(); ++mi) {
      values[r][mi] = evaluate_metric(config.metrics[mi], spectrum, &fit, config, key);
    }
  });

  for (std::size_t mi = 0; mi < config.metrics.size(); ++mi) {
    MetricStats stats;
    stats.per_seed.resize(reals);
    double sum = 0.0;
    double lo = values[0][mi], hi = values[0][mi];
    for (std::size_t r = 0; r < reals; ++r) {
      const double v = values[r][mi];
      stats.per_seed[r] = v;
      sum += v;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    stats.mean = sum / static_cast<double>(reals);
    stats.min = lo;
    stats.max = hi;
    result.metrics.emplace(config.metrics[mi], std::move(stats));
  }
  return result;
}

Dataset run_experiment(const ExperimentConfig& config, unsigned threads) {
  const std::string data_dir = config.data_dir.empty() ? default_data_dir() : config.data_dir;
  const auto provider = make_provider(config.provider, data_dir);
  const ProcessPreset preset = find_preset(config.process, data_dir);

  Process process = preset.process;
  try {
    process.poling = Poling::with_period(qpm_period(*provider, process, config.w0_m));
  } catch (const Error& e) {
    if (e.code() != errc::degenerate_no_poling) throw;
    process.poling = Poling::unpoled();  // already phasematched at w0
  }

  std::vector<CellKey> keys;
  for (double L : config.lengths_m)
    for (double dw : config.delta_ws_m)
      for (double g : config.gammas) keys.push_back(CellKey{L, dw, g, config.w0_m});
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  if (keys.empty()) fail(errc::bad_config, "experiment grid is empty");

  const unsigned cell_workers = std::max<unsigned>(
      1, static_cast<unsigned>(std::min<std::size_t>(threads, keys.size())));
  const unsigned per_cell = std::max(1u, threads / cell_workers);

  struct Slot {
    std::optional<EnsembleResult> result;
    std::string error;
  };
  std::vector<Slot> slots(keys.size());
  parallel_for(keys.size(), cell_workers, [&](std::size_t i) {
    try {
      slots[i].result = run_cell(*provider, process, preset.scan_mode, config, keys[i], per_cell);
    } catch (const std::exception& e) {
      slots[i].error = e.what();
    }
  });

  Dataset ds;
  ds.config = config;
  ds.config.data_dir = data_dir;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    if (slots[i].result) {
      ds.cells.push_back(std::move(*slots[i].result));
    } else {
      ds.failures.push_back(CellFailure{keys[i], slots[i].error});
    }
  }
  return ds;
}

namespace {

std::string csv_key_prefix(const CellKey& key) {
  return num_str(to_mm(key.length_m)) + "," + num_str(to_um(key.delta_w_m)) + "," +
         num_str(key.gamma) + ",";
}

json config_json(const ExperimentConfig& c) {
  json j;
  j["process"] = c.process;
  j["provider"] = c.provider;
  j["data_dir"] = c.data_dir;
  j["w0_um"] = to_um(c.w0_m);
  json lengths = json::array(), dws = json::array(), gammas = json::array();
  for (double v : c.lengths_m) lengths.push_back(to_mm(v));
  for (double v : c.delta_ws_m) dws.push_back(to_um(v));
  for (double v : c.gammas) gammas.push_back(v);
  j["L_mm"] = lengths;
  j["delta_w_um"] = dws;
  j["gamma"] = gammas;
  j["realizations"] = c.realizations;
  j["master_seed"] = c.master_seed;
  j["dz_um"] = to_um(c.dz_m);
  j["scan_points"] = c.scan_points;
  j["scan_zeros"] = c.scan_zeros;
  j["metrics"] = c.metrics;
  j["p_in_w"] = c.app.p_in_w;
  j["alpha_db_per_cm"] = c.app.alpha_db_per_cm;
  j["eta_ideal"] = c.app.eta_ideal;
  j["band_nm"] = to_nm(c.app.band_m);
  j["nu_in_ghz"] = c.app.nu_in_hz / 1e9;
  j["bcf_center_nm"] = c.app.bcf_center_m > 0.0 ? to_nm(c.app.bcf_center_m) : 0.0;
  return j;
}

}  // namespace

void write_dataset(const std::string& out_dir, const Dataset& dataset) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);

  for (const auto& metric : dataset.config.metrics) {
    std::string text = "L_mm,delta_w_um,gamma,seed,metric_name,value,mean,min,max\n";
    for (const auto& cell : dataset.cells) {
      const auto it = cell.metrics.find(metric);
      if (it == cell.metrics.end()) continue;
      const std::string prefix = csv_key_prefix(cell.key);
      for (std::size_t r = 0; r < it->second.per_seed.size(); ++r) {
        text += prefix + std::to_string(cell.seeds[r]) + "," + metric + "," +
                num_str(it->second.per_seed[r]) + ",,,\n";
      }
      text += prefix + "agg," + metric + ",," + num_str(it->second.mean) + "," +
              num_str(it->second.min) + "," + num_str(it->second.max) + "\n";
    }
    write_text_file((fs::path(out_dir) / ("metric_" + metric + ".csv")).string(), text);
  }

  json manifest;
  manifest["artifact"] = "pmtol";
  manifest["version"] = PMTOL_VERSION;
  manifest["config"] = config_json(dataset.config);
  {
    char buf[32];
    const std::time_t now = std::time(nullptr);
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    manifest["created_utc"] = buf;
  }
  json inputs = json::object();
  namespace fsys = std::filesystem;
  const fsys::path data(dataset.config.data_dir);
  for (const char* name : {"presets.json", "sellmeier_cln.json", "surrogate_fixtures.json"}) {
    const auto p = data / name;
    if (fsys::exists(p)) inputs[name] = file_fingerprint(p.string());
  }
  if (dataset.config.provider.rfind("table:", 0) == 0) {
    const std::string path = dataset.config.provider.substr(6);
    if (fsys::exists(path)) inputs["table"] = file_fingerprint(path);
  }
  manifest["inputs"] = inputs;
  json fails = json::array();
  for (const auto& f : dataset.failures) {
    fails.push_back({{"L_mm", to_mm(f.key.length_m)},
                     {"delta_w_um", to_um(f.key.delta_w_m)},
                     {"gamma", f.key.gamma},
                     {"error", f.what}});
  }
  manifest["failed_cells"] = fails;
  write_text_file((fs::path(out_dir) / "manifest.json").string(), manifest.dump(2) + "\n");
}

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == ',') {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  const std::string last = trim(cur);
  if (!last.empty() || !out.empty()) out.push_back(last);
  return out;
}

double to_double(const std::string& v, const std::string& key) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    fail(errc::bad_config, "key '" + key + "': bad number '" + v + "'");
  }
}

std::vector<double> to_doubles(const std::string& v, const std::string& key) {
  std::vector<double> out;
  for (const auto& item : split_list(v)) {
    if (item.empty()) fail(errc::bad_config, "key '" + key + "': empty list element");
    out.push_back(to_double(item, key));
  }
  if (out.empty()) fail(errc::bad_config, "key '" + key + "': empty list");
  return out;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig cfg;
  cfg.lengths_m.clear();
  cfg.delta_ws_m = {0.0};
  cfg.gammas = {1.0};

  std::vector<std::string> unknown;
  bool have_process = false, have_lengths = false;

  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      fail(errc::bad_config, "line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      fail(errc::bad_config, "line " + std::to_string(line_no) + ": empty key or value");

    if (key == "process") {
      cfg.process = value;
      have_process = true;
    } else if (key == "provider") {
      cfg.provider = value;
    } else if (key == "data_dir") {
      cfg.data_dir = value;
    } else if (key == "w0_um") {
      cfg.w0_m = from_um(to_double(value, key));
    } else if (key == "L_mm") {
      cfg.lengths_m.clear();
      for (double v : to_doubles(value, key)) cfg.lengths_m.push_back(from_mm(v));
      have_lengths = true;
    } else if (key == "delta_w_um") {
      cfg.delta_ws_m.clear();
      for (double v : to_doubles(value, key)) cfg.delta_ws_m.push_back(from_um(v));
    } else if (key == "gamma") {
      cfg.gammas = to_doubles(value, key);
    } else if (key == "realizations") {
      cfg.realizations = static_cast<int>(to_double(value, key));
    } else if (key == "master_seed") {
      try {
        cfg.master_seed = std::stoull(value);
      } catch (const std::exception&) {
        fail(errc::bad_config, "key 'master_seed': bad unsigned integer '" + value + "'");
      }
    } else if (key == "dz_um") {
      cfg.dz_m = from_um(to_double(value, key));
    } else if (key == "scan_points") {
      cfg.scan_points = static_cast<int>(to_double(value, key));
    } else if (key == "scan_zeros") {
      cfg.scan_zeros = to_double(value, key);
    } else if (key == "metrics") {
      cfg.metrics = split_list(value);
    } else if (key == "p_in_w") {
      cfg.app.p_in_w = to_double(value, key);
    } else if (key == "alpha_db_per_cm") {
      cfg.app.alpha_db_per_cm = to_double(value, key);
    } else if (key == "eta_ideal") {
      cfg.app.eta_ideal = to_double(value, key);
    } else if (key == "band_nm") {
      cfg.app.band_m = from_nm(to_double(value, key));
    } else if (key == "nu_in_ghz") {
      cfg.app.nu_in_hz = to_double(value, key) * 1e9;
    } else if (key == "bcf_center_nm") {
      cfg.app.bcf_center_m = from_nm(to_double(value, key));
    } else {
      unknown.push_back(key);
    }
  }

  if (!unknown.empty()) {
    std::string joined;
    for (const auto& k : unknown) joined += (joined.empty() ? "" : ", ") + k;
    fail(errc::bad_config, "unknown config keys: " + joined);
  }
  if (!have_process) fail(errc::bad_config, "missing required key 'process'");
  if (!have_lengths || cfg.lengths_m.empty()) fail(errc::bad_config, "missing required key 'L_mm'");
  if (cfg.realizations < 1) fail(errc::bad_config, "realizations must be >= 1");
  if (cfg.scan_points < 2) fail(errc::bad_config, "scan_points must be >= 2");
  if (!(cfg.dz_m > 0.0)) fail(errc::bad_config, "dz_um must be positive");

  std::set<std::string> known(known_metric_names().begin(), known_metric_names().end());
  for (const auto& m : cfg.metrics) {
    if (!known.count(m)) fail(errc::bad_config, "unknown metric '" + m + "'");
  }
  if (cfg.metrics.empty()) fail(errc::bad_config, "metrics list is empty");

  // Canonicalize the grids so declaration order never changes the dataset.
  auto canon = [](std::vector<double>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  };
  canon(cfg.lengths_m);
  canon(cfg.delta_ws_m);
  canon(cfg.gammas);
  return cfg;
}

ExperimentConfig load_config(const std::string& path) { return parse_config(read_text_file(path)); }

}  // namespace pmtol

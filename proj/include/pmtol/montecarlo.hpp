#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pmtol/metrics.hpp"
#include "pmtol/phasematch.hpp"

namespace pmtol {

struct ApplicationParams {
  double p_in_w = 0.5;
  double alpha_db_per_cm = 0.1;
  double eta_ideal = 0.49;      // 1/(W cm^2), zero-noise normalized efficiency
  double band_m = 40e-9;        // encoding band for the bin count
  double nu_in_hz = 963e9;      // input photon bandwidth for the BCF
  double bcf_center_m = 0.0;    // 0 = use the scan axis centre
};

struct ExperimentConfig {
  std::string process;                 // preset name
  std::string provider = "surrogate:tiln";
  std::string data_dir;                // empty = default resolution order
  double w0_m = 7e-6;
  std::vector<double> lengths_m;
  std::vector<double> delta_ws_m;
  std::vector<double> gammas;
  int realizations = 40;
  std::uint64_t master_seed = 0;
  double dz_m = 50e-6;
  int scan_points = 501;
  double scan_zeros = 6.0;
  std::vector<std::string> metrics = {"max_efficiency"};
  ApplicationParams app;
};

struct CellKey {
  double length_m = 0.0;
  double delta_w_m = 0.0;
  double gamma = 0.0;
  double w0_m = 0.0;

  friend bool operator<(const CellKey& a, const CellKey& b);
  friend bool operator==(const CellKey& a, const CellKey& b);
};

struct MetricStats {
  std::vector<double> per_seed;  // indexed by realization
  double mean = 0.0, min = 0.0, max = 0.0;
};

struct EnsembleResult {
  CellKey key;
  std::vector<std::uint64_t> seeds;
  std::map<std::string, MetricStats> metrics;
};

struct CellFailure {
  CellKey key;
  std::string what;
};

struct Dataset {
  ExperimentConfig config;
  std::vector<EnsembleResult> cells;     // canonical (sorted) order
  std::vector<CellFailure> failures;
};

// One (L, delta_w, gamma) cell: realization r uses seed master_seed XOR r;
// profile -> spectrum -> requested metrics, then mean/min/max aggregation in
// realization order. Fails atomically (no partial aggregates). The process
// must already carry its QPM period.
EnsembleResult run_cell(const DispersionProvider& provider, const Process& process,
                        ScanMode scan_mode, const ExperimentConfig& config, const CellKey& key,
                        unsigned threads = 1);

// Maps run_cell over the full grid. Cells and realizations are independent;
// execution order never changes the result, and the dataset comes back in
// canonical key order.
Dataset run_experiment(const ExperimentConfig& config, unsigned threads = 1);

// One CSV per metric (rows `L_mm,delta_w_um,gamma,seed,metric_name,value`
// plus aggregate rows with seed = "agg") and a manifest.json with the
// resolved config and input hashes.
void write_dataset(const std::string& out_dir, const Dataset& dataset);

// Flat key = value experiment file; unknown keys are rejected with a list
// of offenders. See docs/config_reference.md.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

const std::vector<std::string>& known_metric_names();

}  // namespace pmtol

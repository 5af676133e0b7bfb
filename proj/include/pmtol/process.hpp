#pragma once

#include <string>
#include <vector>

namespace pmtol {

// One interacting field. direction is the propagation sign along z
// (+1 forward, -1 backward, supporting counter-propagating processes).
struct Wave {
  double lambda_m = 0.0;
  std::string pol;
  int direction = +1;
};

struct Poling {
  enum class State { unset, unpoled, value };
  State state = State::unset;
  double period_m = 0.0;

  static Poling unpoled() { return {State::unpoled, 0.0}; }
  static Poling with_period(double period_m) { return {State::value, period_m}; }
};

// Three-wave mixing process, pump/output convention w3 = w2 + w1.
struct Process {
  std::string name;
  Wave wave3, wave2, wave1;
  Poling poling;
};

// Validates energy conservation (1/l3 = 1/l2 + 1/l1 to 1e-9 relative),
// direction signs and a positive period when present.
Process make_process(std::string name, Wave wave3, Wave wave2, Wave wave1,
                     Poling poling = Poling{});

// How a process is characterized when sweeping a spectrum.
enum class ScanMode {
  degenerate,        // lambda1 = lambda2 = swept value (SHG-style)
  fix_w2_sweep_w1,   // wave2 fixed, wave1 swept, wave3 solved
};

struct ProcessPreset {
  Process process;
  ScanMode scan_mode = ScanMode::degenerate;
  std::string description;
};

// Presets shipped in data/presets.json (wavelengths marked "auto" in the
// file are solved from energy conservation at load time).
std::vector<ProcessPreset> load_presets(const std::string& data_dir);
ProcessPreset find_preset(const std::string& name, const std::string& data_dir);

}  // namespace pmtol

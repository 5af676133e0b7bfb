#include "pmtol/process.hpp"

#include <cmath>
#include <filesystem>

#include <json.hpp>

#include "pmtol/csv.hpp"
#include "pmtol/errors.hpp"
#include "pmtol/units.hpp"

namespace pmtol {

using nlohmann::json;

Process make_process(std::string name, Wave wave3, Wave wave2, Wave wave1, Poling poling) {
  for (const Wave* w : {&wave3, &wave2, &wave1}) {
    if (!(w->lambda_m > 0.0)) fail(errc::bad_input, name + ": wavelengths must be positive");
    if (w->direction != 1 && w->direction != -1)
      fail(errc::bad_input, name + ": direction must be +1 or -1");
  }
  const double lhs = 1.0 / wave3.lambda_m;
  const double rhs = 1.0 / wave2.lambda_m + 1.0 / wave1.lambda_m;
  if (std::abs(lhs - rhs) > 1e-9 * lhs)
    fail(errc::bad_input, name + ": energy conservation 1/l3 = 1/l2 + 1/l1 violated");
  if (poling.state == Poling::State::value && !(poling.period_m > 0.0) &&
      !(poling.period_m < 0.0))
    fail(errc::bad_input, name + ": QPM period must be nonzero");
  return Process{std::move(name), wave3, wave2, wave1, poling};
}

namespace {

ScanMode parse_scan_mode(const std::string& s) {
  if (s == "degenerate") return ScanMode::degenerate;
  if (s == "fix_w2_sweep_w1") return ScanMode::fix_w2_sweep_w1;
  fail(errc::bad_config, "unknown scan mode '" + s + "'");
}

}  // namespace

std::vector<ProcessPreset> load_presets(const std::string& data_dir) {
  namespace fs = std::filesystem;
  const std::string path = (fs::path(data_dir) / "presets.json").string();
  json root;
  try {
    root = json::parse(read_text_file(path));
  } catch (const json::exception& e) {
    fail(errc::bad_config, path + ": " + e.what());
  }

  std::vector<ProcessPreset> out;
  for (const auto& entry : root.at("presets")) {
    Wave waves[3];
    int auto_idx = -1;
    int have = 0;
    for (const auto& wj : entry.at("waves")) {
      const std::string role = wj.at("role").get<std::string>();
      int idx;
      if (role == "wave3") idx = 0;
      else if (role == "wave2") idx = 1;
      else if (role == "wave1") idx = 2;
      else fail(errc::bad_config, "preset wave role must be wave1/wave2/wave3");
      Wave w;
      if (wj.at("lambda_nm").is_string()) {
        if (wj.at("lambda_nm").get<std::string>() != "auto")
          fail(errc::bad_config, "preset wavelength must be a number or \"auto\"");
        if (auto_idx >= 0) fail(errc::bad_config, "only one preset wavelength may be auto");
        auto_idx = idx;
        w.lambda_m = 0.0;
      } else {
        w.lambda_m = from_nm(wj.at("lambda_nm").get<double>());
      }
      w.pol = wj.at("pol").get<std::string>();
      w.direction = wj.at("direction").get<int>();
      waves[idx] = w;
      ++have;
    }
    if (have != 3) fail(errc::bad_config, "preset needs exactly three waves");
    // Solve the "auto" wavelength from 1/l3 = 1/l2 + 1/l1 so the preset
    // satisfies energy conservation exactly, not just to catalog precision.
    if (auto_idx == 0) {
      waves[0].lambda_m = 1.0 / (1.0 / waves[1].lambda_m + 1.0 / waves[2].lambda_m);
    } else if (auto_idx == 1) {
      waves[1].lambda_m = 1.0 / (1.0 / waves[0].lambda_m - 1.0 / waves[2].lambda_m);
    } else if (auto_idx == 2) {
      waves[2].lambda_m = 1.0 / (1.0 / waves[0].lambda_m - 1.0 / waves[1].lambda_m);
    }

    ProcessPreset preset;
    preset.process = make_process(entry.at("name").get<std::string>(), waves[0], waves[1],
                                  waves[2]);
    preset.scan_mode = parse_scan_mode(entry.at("scan").get<std::string>());
    preset.description = entry.value("description", "");
    out.push_back(std::move(preset));
  }
  return out;
}

ProcessPreset find_preset(const std::string& name, const std::string& data_dir) {
  for (auto& p : load_presets(data_dir)) {
    if (p.process.name == name) return p;
  }
  fail(errc::bad_config, "unknown process preset '" + name + "'");
}

}  // namespace pmtol

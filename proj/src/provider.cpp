#include "pmtol/provider.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <set>
#include <sstream>

#include <json.hpp>

#include "pmtol/csv.hpp"
#include "pmtol/errors.hpp"
#include "pmtol/units.hpp"

namespace pmtol {

using nlohmann::json;

void DispersionProvider::check(double lambda_m, double width_m, const std::string& pol) const {
  if (!has_polarization(pol)) fail(errc::unknown_polarization, "'" + pol + "' (" + describe() + ")");
  const Window lw = lambda_window();
  if (!lw.contains(lambda_m)) {
    fail(errc::out_of_range, "wavelength " + std::to_string(to_nm(lambda_m)) + " nm outside [" +
                                 std::to_string(to_nm(lw.lo)) + ", " + std::to_string(to_nm(lw.hi)) +
                                 "] nm");
  }
  const Window ww = width_window();
  if (!ww.contains(width_m)) {
    fail(errc::out_of_range, "width " + std::to_string(to_um(width_m)) + " um outside [" +
                                 std::to_string(to_um(ww.lo)) + ", " + std::to_string(to_um(ww.hi)) +
                                 "] um");
  }
}

double DispersionProvider::n_eff(double lambda_m, double width_m, const std::string& pol) const {
  check(lambda_m, width_m, pol);
  return eval(lambda_m, width_m, pol);
}

double DispersionProvider::n_eff_dw(double lambda_m, double width_m, const std::string& pol) const {
  check(lambda_m, width_m, pol);
  return eval_dw(lambda_m, width_m, pol);
}

std::vector<double> DispersionProvider::curve_nodes(double w_lo_m, double w_hi_m) const {
  const Window ww = width_window();
  constexpr double pitch = 5e-8;  // 0.05 um
  double lo = std::max(ww.lo, w_lo_m - pitch);
  double hi = std::min(ww.hi, w_hi_m + pitch);
  if (!(hi > lo)) return {ww.lo, ww.hi};
  const std::size_t n = std::max<std::size_t>(
      3, static_cast<std::size_t>(std::ceil((hi - lo) / pitch)) + 1);
  std::vector<double> nodes(n);
  for (std::size_t i = 0; i < n; ++i) {
    nodes[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  return nodes;
}

SurrogateProvider::SurrogateProvider(std::map<std::string, SurrogatePolParams> pols,
                                     Window lambda_win, Window width_win, std::string name)
    : pols_(std::move(pols)), lambda_win_(lambda_win), width_win_(width_win),
      name_(std::move(name)) {
  for (const auto& [pol, p] : pols_) {
    if (p.amplitude < 0.0) fail(errc::bad_input, "surrogate amplitude must be >= 0 (" + pol + ")");
    if (!(p.ws0_m + p.ws_slope * lambda_win_.lo > 0.0) ||
        !(p.ws0_m + p.ws_slope * lambda_win_.hi > 0.0))
      fail(errc::bad_input, "surrogate saturation width must stay positive (" + pol + ")");
  }
}

const SurrogatePolParams& SurrogateProvider::params(const std::string& pol) const {
  const auto it = pols_.find(pol);
  if (it == pols_.end()) fail(errc::unknown_polarization, "'" + pol + "'");
  return it->second;
}

double SurrogateProvider::saturation_width(double lambda_m, const std::string& pol) const {
  const auto& p = params(pol);
  return p.ws0_m + p.ws_slope * lambda_m;
}

double SurrogateProvider::eval(double lambda_m, double width_m, const std::string& pol) const {
  const auto& p = params(pol);
  const double ws = p.ws0_m + p.ws_slope * lambda_m;
  return n_bulk(p.sellmeier, lambda_m) + p.amplitude * (1.0 - std::exp(-width_m / ws));
}

double SurrogateProvider::eval_dw(double lambda_m, double width_m, const std::string& pol) const {
  const auto& p = params(pol);
  const double ws = p.ws0_m + p.ws_slope * lambda_m;
  return p.amplitude / ws * std::exp(-width_m / ws);
}

TableProvider::TableProvider(std::map<std::string, BicubicGrid> grids, std::string source)
    : grids_(std::move(grids)), source_(std::move(source)) {
  if (grids_.empty()) fail(errc::bad_input, "table provider needs at least one polarization");
  bool first = true;
  for (const auto& [pol, g] : grids_) {
    const Window lw{g.xs().front(), g.xs().back()};
    const Window ww{g.ys().front(), g.ys().back()};
    if (first) {
      lambda_win_ = lw;
      width_win_ = ww;
      first = false;
    } else {
      // The shared validity window is the intersection across polarizations.
      lambda_win_.lo = std::max(lambda_win_.lo, lw.lo);
      lambda_win_.hi = std::min(lambda_win_.hi, lw.hi);
      width_win_.lo = std::max(width_win_.lo, ww.lo);
      width_win_.hi = std::min(width_win_.hi, ww.hi);
    }
  }
}

const BicubicGrid& TableProvider::grid(const std::string& pol) const {
  const auto it = grids_.find(pol);
  if (it == grids_.end()) fail(errc::unknown_polarization, "'" + pol + "'");
  return it->second;
}

std::vector<double> TableProvider::curve_nodes(double w_lo_m, double w_hi_m) const {
  // The grid's own width nodes (all polarizations share them after the
  // loader's completeness check, but merge defensively), padded one cell and
  // clamped to the shared window. On these nodes the cubic reconstruction
  // equals the bicubic itself.
  std::set<double> merged;
  for (const auto& [pol, g] : grids_) merged.insert(g.ys().begin(), g.ys().end());
  std::vector<double> all(merged.begin(), merged.end());
  const auto lo_it = std::upper_bound(all.begin(), all.end(), w_lo_m);
  const auto hi_it = std::lower_bound(all.begin(), all.end(), w_hi_m);
  std::size_t lo = static_cast<std::size_t>(lo_it - all.begin());
  std::size_t hi = static_cast<std::size_t>(hi_it - all.begin());
  lo = (lo >= 2) ? lo - 2 : 0;
  hi = std::min(all.size(), hi + 2);
  std::vector<double> nodes(all.begin() + static_cast<std::ptrdiff_t>(lo),
                            all.begin() + static_cast<std::ptrdiff_t>(hi));
  const Window ww = width_window();
  std::erase_if(nodes, [&](double w) { return !ww.contains(w); });
  if (nodes.size() < 2) return {ww.lo, ww.hi};
  return nodes;
}

double TableProvider::eval(double lambda_m, double width_m, const std::string& pol) const {
  return grid(pol).value(lambda_m, width_m);
}

double TableProvider::eval_dw(double lambda_m, double width_m, const std::string& pol) const {
  return grid(pol).deriv_y(lambda_m, width_m);
}

namespace {

double parse_double(const std::string& s, const std::string& where) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    fail(errc::bad_input, "bad number '" + s + "' in " + where);
  }
}

}  // namespace

std::shared_ptr<TableProvider> load_table_csv(const std::string& path) {
  const std::string text = read_text_file(path);
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) fail(errc::bad_input, path + ": empty table");
  {
    auto header = split_csv_line(line);
    const std::vector<std::string> want = {"polarization", "wavelength_nm", "width_um", "n_eff"};
    if (std::vector<std::string>(header.begin(), header.end()) != want)
      fail(errc::bad_input, path + ": header must be polarization,wavelength_nm,width_um,n_eff");
  }

  struct PolData {
    std::set<double> lams, widths;
    std::map<std::pair<double, double>, double> values;
  };
  std::map<std::string, PolData> by_pol;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 4)
      fail(errc::bad_input, path + ":" + std::to_string(line_no) + ": expected 4 fields");
    const std::string where = path + ":" + std::to_string(line_no);
    const double lam = from_nm(parse_double(fields[1], where));
    const double w = from_um(parse_double(fields[2], where));
    const double n = parse_double(fields[3], where);
    if (!(n > 1.0 && n < 3.5))
      fail(errc::bad_input, where + ": n_eff " + fields[3] + " outside (1.0, 3.5)");
    auto& pd = by_pol[fields[0]];
    if (!pd.values.emplace(std::make_pair(lam, w), n).second)
      fail(errc::bad_input, where + ": duplicate (wavelength, width) entry");
    pd.lams.insert(lam);
    pd.widths.insert(w);
  }
  if (by_pol.empty()) fail(errc::bad_input, path + ": no data rows");

  std::map<std::string, BicubicGrid> grids;
  for (auto& [pol, pd] : by_pol) {
    std::vector<double> xs(pd.lams.begin(), pd.lams.end());
    std::vector<double> ys(pd.widths.begin(), pd.widths.end());
    if (xs.size() < 2 || ys.size() < 2)
      fail(errc::bad_input, path + ": polarization '" + pol + "' needs a 2x2 grid at least");
    std::vector<double> values(xs.size() * ys.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
      for (std::size_t j = 0; j < ys.size(); ++j) {
        const auto it = pd.values.find({xs[i], ys[j]});
        if (it == pd.values.end())
          fail(errc::bad_input, path + ": polarization '" + pol + "' missing node (" +
                                    num_str(to_nm(xs[i])) + " nm, " + num_str(to_um(ys[j])) +
                                    " um)");
        values[i * ys.size() + j] = it->second;
      }
    }
    grids.emplace(pol, BicubicGrid(std::move(xs), std::move(ys), std::move(values)));
  }
  return std::make_shared<TableProvider>(std::move(grids), path);
}

namespace {

SellmeierSet load_sellmeier_set(const json& root, const std::string& key,
                                const std::string& file_label) {
  const auto& sets = root.at("sets");
  if (!sets.contains(key))
    fail(errc::bad_config, "sellmeier set '" + key + "' not in " + file_label);
  SellmeierSet set;
  set.b = sets.at(key).at("b").get<std::vector<double>>();
  set.c = sets.at(key).at("c").get<std::vector<double>>();
  if (set.b.size() != set.c.size() || set.b.empty())
    fail(errc::bad_config, "sellmeier set '" + key + "' has mismatched coefficients");
  set.lambda_min_m = from_nm(root.at("lambda_min_nm").get<double>());
  set.lambda_max_m = from_nm(root.at("lambda_max_nm").get<double>());
  set.label = file_label + "@" + key;
  return set;
}

json parse_json_file(const std::string& path) {
  try {
    return json::parse(read_text_file(path));
  } catch (const json::exception& e) {
    fail(errc::bad_config, path + ": " + e.what());
  }
}

}  // namespace

std::shared_ptr<SurrogateProvider> load_surrogate_fixture(const std::string& name,
                                                          const std::string& data_dir) {
  namespace fs = std::filesystem;
  const fs::path dir(data_dir);
  const json root = parse_json_file((dir / "surrogate_fixtures.json").string());
  const auto& fixtures = root.at("fixtures");
  if (!fixtures.contains(name))
    fail(errc::bad_config, "unknown surrogate fixture '" + name + "'");
  const auto& fx = fixtures.at(name);

  const std::string sell_file = root.at("sellmeier_file").get<std::string>();
  const json sell = parse_json_file((dir / sell_file).string());

  std::map<std::string, SurrogatePolParams> pols;
  Window lambda_win{from_nm(sell.at("lambda_min_nm").get<double>()),
                    from_nm(sell.at("lambda_max_nm").get<double>())};
  for (const auto& [pol, cfg] : fx.at("pols").items()) {
    SurrogatePolParams p;
    p.sellmeier = load_sellmeier_set(sell, cfg.at("sellmeier").get<std::string>(), sell_file);
    p.amplitude = cfg.at("amplitude").get<double>();
    p.ws0_m = from_um(cfg.at("ws0_um").get<double>());
    p.ws_slope = cfg.at("ws_slope").get<double>();
    pols.emplace(pol, std::move(p));
  }
  const Window width_win{from_um(fx.at("width_min_um").get<double>()),
                         from_um(fx.at("width_max_um").get<double>())};
  return std::make_shared<SurrogateProvider>(std::move(pols), lambda_win, width_win, name);
}

std::shared_ptr<DispersionProvider> make_provider(const std::string& source,
                                                  const std::string& data_dir) {
  const auto colon = source.find(':');
  if (colon == std::string::npos)
    fail(errc::bad_config, "provider must be surrogate:<fixture> or table:<path>, got '" +
                               source + "'");
  const std::string kind = source.substr(0, colon);
  const std::string rest = source.substr(colon + 1);
  if (kind == "surrogate") return load_surrogate_fixture(rest, data_dir);
  if (kind == "table") return load_table_csv(rest);
  fail(errc::bad_config, "unknown provider kind '" + kind + "'");
}

std::string default_data_dir() {
  if (const char* env = std::getenv("PMTOL_DATA_DIR")) return env;
#ifdef PMTOL_DEFAULT_DATA_DIR
  return PMTOL_DEFAULT_DATA_DIR;
#else
  return "data";
#endif
}

}  // namespace pmtol

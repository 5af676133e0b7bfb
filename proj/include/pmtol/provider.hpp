#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "pmtol/interp.hpp"
#include "pmtol/sellmeier.hpp"

namespace pmtol {

struct Window {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double v) const { return v >= lo && v <= hi; }
};

// Maps (vacuum wavelength, waveguide width, polarization label) to an
// effective refractive index. Providers are immutable after construction
// and safe to share across threads; every operation is a pure function.
class DispersionProvider {
 public:
  virtual ~DispersionProvider() = default;

  // Checked entry point: validates the window and the polarization label
  // before dispatching.
  double n_eff(double lambda_m, double width_m, const std::string& pol) const;
  // Analytic width derivative of n_eff; same checks.
  double n_eff_dw(double lambda_m, double width_m, const std::string& pol) const;

  virtual Window lambda_window() const = 0;
  virtual Window width_window() const = 0;
  virtual bool has_polarization(const std::string& pol) const = 0;
  virtual std::string describe() const = 0;

  // Width nodes for an exact-slope cubic reconstruction of n_eff(w) over
  // [w_lo, w_hi]: tables hand back their own grid nodes (making the
  // reconstruction identical to direct evaluation); the default is a 0.05 um
  // lattice, padded one node each side and clamped to the validity window.
  virtual std::vector<double> curve_nodes(double w_lo_m, double w_hi_m) const;

 protected:
  virtual double eval(double lambda_m, double width_m, const std::string& pol) const = 0;
  virtual double eval_dw(double lambda_m, double width_m, const std::string& pol) const = 0;

 private:
  void check(double lambda_m, double width_m, const std::string& pol) const;
};

// Analytic stand-in for an externally computed mode solver:
//   n_eff(lambda, w) = n_bulk(lambda) + A * (1 - exp(-w / w_s(lambda))),
// with w_s(lambda) = ws0 + ws_slope * lambda. Monotone in w, smooth
// everywhere inside the validity window.
struct SurrogatePolParams {
  SellmeierSet sellmeier;
  double amplitude = 0.0;   // index elevation A, dimensionless, >= 0
  double ws0_m = 5e-6;      // saturation width intercept
  double ws_slope = 0.0;    // dimensionless (metres per metre of wavelength)
};

class SurrogateProvider : public DispersionProvider {
 public:
  SurrogateProvider(std::map<std::string, SurrogatePolParams> pols, Window lambda_win,
                    Window width_win, std::string name);

  Window lambda_window() const override { return lambda_win_; }
  Window width_window() const override { return width_win_; }
  bool has_polarization(const std::string& pol) const override { return pols_.count(pol) != 0; }
  std::string describe() const override { return "surrogate:" + name_; }

  const SurrogatePolParams& params(const std::string& pol) const;
  double saturation_width(double lambda_m, const std::string& pol) const;

 protected:
  double eval(double lambda_m, double width_m, const std::string& pol) const override;
  double eval_dw(double lambda_m, double width_m, const std::string& pol) const override;

 private:
  std::map<std::string, SurrogatePolParams> pols_;
  Window lambda_win_, width_win_;
  std::string name_;
};

// Tabulated n_eff on a full (wavelength x width) grid per polarization,
// interpolated bicubically (C1).
class TableProvider : public DispersionProvider {
 public:
  TableProvider(std::map<std::string, BicubicGrid> grids, std::string source);

  Window lambda_window() const override { return lambda_win_; }
  Window width_window() const override { return width_win_; }
  bool has_polarization(const std::string& pol) const override { return grids_.count(pol) != 0; }
  std::string describe() const override { return "table:" + source_; }
  std::vector<double> curve_nodes(double w_lo_m, double w_hi_m) const override;

  const BicubicGrid& grid(const std::string& pol) const;

 protected:
  double eval(double lambda_m, double width_m, const std::string& pol) const override;
  double eval_dw(double lambda_m, double width_m, const std::string& pol) const override;

 private:
  std::map<std::string, BicubicGrid> grids_;
  Window lambda_win_, width_win_;
  std::string source_;
};

// CSV header: polarization,wavelength_nm,width_um,n_eff. Rows may come in
// any order; the loader checks full-grid completeness, strict monotonicity
// and the physical n_eff range.
std::shared_ptr<TableProvider> load_table_csv(const std::string& path);

// Named fixtures from data/surrogate_fixtures.json (+ the Sellmeier data
// file next to it).
std::shared_ptr<SurrogateProvider> load_surrogate_fixture(const std::string& name,
                                                          const std::string& data_dir);

// "surrogate:<fixture>" or "table:<csv path>".
std::shared_ptr<DispersionProvider> make_provider(const std::string& source,
                                                  const std::string& data_dir);

// Resolution order: explicit argument, PMTOL_DATA_DIR env var, compiled-in
// default (the repo's data/ directory).
std::string default_data_dir();

}  // namespace pmtol

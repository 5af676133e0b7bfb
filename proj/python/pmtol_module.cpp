#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pmtol/constants.hpp"
#include "pmtol/dispersion.hpp"
#include "pmtol/errors.hpp"
#include "pmtol/metrics.hpp"
#include "pmtol/montecarlo.hpp"
#include "pmtol/noise.hpp"
#include "pmtol/phasematch.hpp"
#include "pmtol/process.hpp"
#include "pmtol/provider.hpp"

namespace py = pybind11;
using namespace pybind11::literals;
using namespace pmtol;

PYBIND11_MODULE(pmtol, m) {
  m.doc() = "phasematching tolerance toolkit for nonlinear waveguides";

  py::register_exception<Error>(m, "PmtolError");

  m.attr("GAMMA_HWHM") = half_max_arg();
  m.def("sinc", &sinc, "x"_a);
  m.def("default_data_dir", &default_data_dir);

  py::class_<DispersionProvider, std::shared_ptr<DispersionProvider>>(m, "DispersionProvider")
      .def("n_eff", &DispersionProvider::n_eff, "lambda_m"_a, "width_m"_a, "pol"_a)
      .def("describe", &DispersionProvider::describe)
      .def_property_readonly("lambda_window",
                             [](const DispersionProvider& p) {
                               const auto w = p.lambda_window();
                               return std::make_pair(w.lo, w.hi);
                             })
      .def_property_readonly("width_window", [](const DispersionProvider& p) {
        const auto w = p.width_window();
        return std::make_pair(w.lo, w.hi);
      });
  py::class_<SurrogateProvider, DispersionProvider, std::shared_ptr<SurrogateProvider>>(
      m, "SurrogateProvider");
  py::class_<TableProvider, DispersionProvider, std::shared_ptr<TableProvider>>(m,
                                                                                "TableProvider");

  m.def("load_surrogate_fixture", &load_surrogate_fixture, "name"_a, "data_dir"_a);
  m.def("load_table_csv", &load_table_csv, "path"_a);
  m.def("make_provider", &make_provider, "source"_a, "data_dir"_a);

  py::class_<Wave>(m, "Wave")
      .def(py::init([](double lambda_m, const std::string& pol, int direction) {
             return Wave{lambda_m, pol, direction};
           }),
           "lambda_m"_a, "pol"_a, "direction"_a = 1)
      .def_readonly("lambda_m", &Wave::lambda_m)
      .def_readonly("pol", &Wave::pol)
      .def_readonly("direction", &Wave::direction);

  py::class_<Process>(m, "Process")
      .def_readonly("name", &Process::name)
      .def_readonly("wave3", &Process::wave3)
      .def_readonly("wave2", &Process::wave2)
      .def_readonly("wave1", &Process::wave1)
      .def_property_readonly("qpm_period_m",
                             [](const Process& p) -> py::object {
                               if (p.poling.state == Poling::State::value)
                                 return py::float_(p.poling.period_m);
                               return py::none();
                             })
      .def("with_period", [](const Process& p, double period_m) {
        Process q = p;
        q.poling = Poling::with_period(period_m);
        return q;
      })
      .def("unpoled", [](const Process& p) {
        Process q = p;
        q.poling = Poling::unpoled();
        return q;
      });

  m.def("make_process", &make_process, "name"_a, "wave3"_a, "wave2"_a, "wave1"_a,
        "poling"_a = Poling{});

  py::enum_<ScanMode>(m, "ScanMode")
      .value("degenerate", ScanMode::degenerate)
      .value("fix_w2_sweep_w1", ScanMode::fix_w2_sweep_w1);

  py::class_<ProcessPreset>(m, "ProcessPreset")
      .def_readonly("process", &ProcessPreset::process)
      .def_readonly("scan_mode", &ProcessPreset::scan_mode)
      .def_readonly("description", &ProcessPreset::description);
  m.def("load_presets", &load_presets, "data_dir"_a);
  m.def("find_preset", &find_preset, "name"_a, "data_dir"_a);

  m.def("delta_beta", &delta_beta, "provider"_a, "process"_a, "width_m"_a);
  m.def("qpm_period", &qpm_period, "provider"_a, "process"_a, "width_m"_a);
  m.def("sensitivity", &sensitivity, "provider"_a, "process"_a, "width_m"_a, "step_m"_a = 5e-8,
        "one_sided_fallback"_a = false);
  m.def("noncritical_widths", &noncritical_widths, "provider"_a, "process"_a, "w_lo_m"_a,
        "w_hi_m"_a, "scan_step_m"_a = 2.5e-7);
  m.def("l_max", &l_max, "sens"_a, "delta_w_max_m"_a);

  py::class_<NoiseSpec>(m, "NoiseSpec")
      .def(py::init([](double gamma, double delta_w_m, std::uint64_t seed) {
             return NoiseSpec{gamma, delta_w_m, seed};
           }),
           "gamma"_a, "delta_w_m"_a, "seed"_a)
      .def_readonly("gamma", &NoiseSpec::gamma)
      .def_readonly("delta_w_m", &NoiseSpec::delta_w_m)
      .def_readonly("seed", &NoiseSpec::seed);

  py::class_<WidthProfile>(m, "WidthProfile")
      .def_readonly("dz_m", &WidthProfile::dz_m)
      .def_readonly("nominal_width_m", &WidthProfile::nominal_width_m)
      .def_readonly("widths_m", &WidthProfile::widths_m)
      .def_property_readonly("length_m", &WidthProfile::length_m);

  m.def(
      "generate_profile",
      [](double length_m, double dz_m, double w0_m, const NoiseSpec& spec) {
        return generate_profile(length_m, dz_m, w0_m, spec);
      },
      "length_m"_a, "dz_m"_a, "w0_m"_a, "spec"_a);
  m.def("resample_profile", &resample_profile, "profile"_a, "dz_new_m"_a);

  py::class_<ScanSpec>(m, "ScanSpec")
      .def_readonly("axis_m", &ScanSpec::axis_m)
      .def_readonly("degenerate_shg", &ScanSpec::degenerate_shg);

  py::class_<Spectrum>(m, "Spectrum")
      .def_readonly("axis", &Spectrum::axis)
      .def_readonly("amplitude", &Spectrum::amplitude)
      .def("intensities", &Spectrum::intensities);

  m.def("ideal_sinc", &ideal_sinc, "x_axis"_a);
  m.def("default_scan", &default_scan, "provider"_a, "process"_a, "mode"_a, "length_m"_a,
        "w0_m"_a, "points"_a = 501, "n_zeros"_a = 6.0);
  m.def("integrate_spectrum", &integrate_spectrum, "provider"_a, "process"_a, "profile"_a,
        "scan"_a);

  py::class_<GaussianFit>(m, "GaussianFit")
      .def_readonly("amplitude", &GaussianFit::amplitude)
      .def_readonly("center", &GaussianFit::center)
      .def_readonly("fwhm", &GaussianFit::fwhm)
      .def_readonly("residual_rms", &GaussianFit::residual_rms)
      .def_readonly("converged", &GaussianFit::converged);

  m.def("max_efficiency", &max_efficiency, "spectrum"_a);
  m.def("gaussian_fwhm", &gaussian_fwhm, "spectrum"_a);
  m.def(
      "fit_gaussian",
      [](const std::vector<double>& x, const std::vector<double>& y) {
        return fit_gaussian(x, y);
      },
      "x"_a, "y"_a);
  m.def("eta_norm", &eta_norm, "peak_efficiency"_a, "eta_ideal"_a);
  m.def(
      "squeezing_db",
      [](double eta, double p_in_w, double alpha_db_per_cm, double length_cm) {
        return squeezing_db({eta, p_in_w, alpha_db_per_cm, length_cm});
      },
      "eta_norm"_a, "p_in_w"_a, "alpha_db_per_cm"_a, "length_cm"_a);
  m.def("n_bins", &n_bins, "band_m"_a, "bin_m"_a);
  m.def("bcf", &bcf, "delta_nu_in_hz"_a, "delta_nu_out_hz"_a);
  m.def("bcf_from_fwhm", &bcf_from_fwhm, "delta_nu_in_hz"_a, "fwhm_wavelength_m"_a,
        "center_wavelength_m"_a);

  py::class_<ExperimentConfig>(m, "ExperimentConfig")
      .def_readonly("process", &ExperimentConfig::process)
      .def_readonly("provider", &ExperimentConfig::provider)
      .def_readonly("realizations", &ExperimentConfig::realizations)
      .def_readonly("master_seed", &ExperimentConfig::master_seed)
      .def_readonly("metrics", &ExperimentConfig::metrics);
  m.def("load_config", &load_config, "path"_a);
  m.def("parse_config", &parse_config, "text"_a);
  m.def("run_experiment", &run_experiment, "config"_a, "threads"_a = 1);
  m.def(
      "write_dataset",
      [](const std::string& out_dir, const Dataset& ds) { write_dataset(out_dir, ds); },
      "out_dir"_a, "dataset"_a);

  py::class_<MetricStats>(m, "MetricStats")
      .def_readonly("per_seed", &MetricStats::per_seed)
      .def_readonly("mean", &MetricStats::mean)
      .def_readonly("min", &MetricStats::min)
      .def_readonly("max", &MetricStats::max);
  py::class_<CellKey>(m, "CellKey")
      .def_readonly("length_m", &CellKey::length_m)
      .def_readonly("delta_w_m", &CellKey::delta_w_m)
      .def_readonly("gamma", &CellKey::gamma)
      .def_readonly("w0_m", &CellKey::w0_m);
  py::class_<EnsembleResult>(m, "EnsembleResult")
      .def_readonly("key", &EnsembleResult::key)
      .def_readonly("seeds", &EnsembleResult::seeds)
      .def_readonly("metrics", &EnsembleResult::metrics);
  py::class_<Dataset>(m, "Dataset").def_readonly("cells", &Dataset::cells);

  py::class_<Poling>(m, "Poling");
}

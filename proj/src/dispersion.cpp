#include "pmtol/dispersion.hpp"

#include <cmath>

#include "pmtol/constants.hpp"
#include "pmtol/errors.hpp"
#include "pmtol/units.hpp"

namespace pmtol {

double delta_beta(const DispersionProvider& provider, const Process& process, double width_m) {
  auto beta = [&](const Wave& w) {
    return two_pi * provider.n_eff(w.lambda_m, width_m, w.pol) / w.lambda_m;
  };
  return process.wave3.direction * beta(process.wave3) -
         process.wave2.direction * beta(process.wave2) -
         process.wave1.direction * beta(process.wave1);
}

double delta_beta_dw(const DispersionProvider& provider, const Process& process, double width_m) {
  auto beta_dw = [&](const Wave& w) {
    return two_pi * provider.n_eff_dw(w.lambda_m, width_m, w.pol) / w.lambda_m;
  };
  return process.wave3.direction * beta_dw(process.wave3) -
         process.wave2.direction * beta_dw(process.wave2) -
         process.wave1.direction * beta_dw(process.wave1);
}

double qpm_period(const DispersionProvider& provider, const Process& process, double width_m) {
  const double db = delta_beta(provider, process, width_m);
  if (std::abs(db) < 1e-6)
    fail(errc::degenerate_no_poling, "process already phasematched (|delta_beta| < 1e-6 rad/m)");
  return two_pi / db;
}

double sensitivity(const DispersionProvider& provider, const Process& process, double width_m,
                   double step_m, bool one_sided_fallback) {
  if (!(step_m > 0.0)) fail(errc::bad_input, "sensitivity step must be positive");
  const Window ww = provider.width_window();
  const bool lo_ok = ww.contains(width_m - step_m);
  const bool hi_ok = ww.contains(width_m + step_m);
  if (lo_ok && hi_ok) {
    return (delta_beta(provider, process, width_m + step_m) -
            delta_beta(provider, process, width_m - step_m)) /
           (2.0 * step_m);
  }
  if (!one_sided_fallback)
    fail(errc::out_of_range, "width +- step leaves the validity window (pass "
                             "one_sided_fallback to use a one-sided difference)");
  if (hi_ok) {
    return (delta_beta(provider, process, width_m + step_m) -
            delta_beta(provider, process, width_m)) /
           step_m;
  }
  if (lo_ok) {
    return (delta_beta(provider, process, width_m) -
            delta_beta(provider, process, width_m - step_m)) /
           step_m;
  }
  fail(errc::out_of_range, "width window narrower than the difference step");
}

std::vector<double> noncritical_widths(const DispersionProvider& provider, const Process& process,
                                       double w_lo_m, double w_hi_m, double scan_step_m) {
  if (!(w_hi_m > w_lo_m)) fail(errc::bad_input, "width range must be increasing");
  if (!(scan_step_m > 0.0)) fail(errc::bad_input, "scan step must be positive");

  auto sens_at = [&](double w) {
    return sensitivity(provider, process, w, 5e-8, /*one_sided_fallback=*/true);
  };

  // Coarse scan; indexed grid so rounding never drops or doubles the last node.
  const std::size_t n_steps =
      static_cast<std::size_t>(std::ceil((w_hi_m - w_lo_m) / scan_step_m - 1e-9));
  std::vector<double> ws, ss;
  ws.reserve(n_steps + 1);
  for (std::size_t i = 0; i <= n_steps; ++i) {
    const double w = std::min(w_lo_m + static_cast<double>(i) * scan_step_m, w_hi_m);
    ws.push_back(w);
    ss.push_back(sens_at(w));
  }

  double max_abs = 0.0;
  for (double s : ss) max_abs = std::max(max_abs, std::abs(s));
  // 1e-6 rad/m^2 is ~1e-12 rad/(m um): a "the index never reacts to the
  // width" detector, not a loose numerical threshold.
  if (max_abs < 1e-6)
    fail(errc::degenerate_everywhere_critical,
         "sensitivity vanishes over the whole range; every width is noncritical");

  std::vector<double> roots;
  const double tol = from_um(1e-3);
  for (std::size_t i = 1; i < ws.size(); ++i) {
    double a = ws[i - 1], b = ws[i];
    double fa = ss[i - 1], fb = ss[i];
    if (fa == 0.0) {
      roots.push_back(a);
      continue;
    }
    if (!(fa * fb < 0.0)) continue;
    while (b - a > tol) {
      const double m = 0.5 * (a + b);
      const double fm = sens_at(m);
      if (fm == 0.0) {
        a = b = m;
        break;
      }
      if (fa * fm < 0.0) {
        b = m;
        fb = fm;
      } else {
        a = m;
        fa = fm;
      }
    }
    roots.push_back(0.5 * (a + b));
  }
  if (!ss.empty() && ss.back() == 0.0) roots.push_back(ws.back());
  return roots;
}

double l_max(double sens, double delta_w_max_m) {
  if (!(delta_w_max_m > 0.0)) fail(errc::bad_input, "delta_w_max must be positive");
  if (sens == 0.0)
    fail(errc::infinite_tolerance,
         "noncritical operation: the tolerable error diverges and no length bound exists");
  return 2.0 * half_max_arg() / (std::abs(sens) * delta_w_max_m);
}

}  // namespace pmtol

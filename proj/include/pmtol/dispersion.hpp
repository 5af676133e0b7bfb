#pragma once

#include <vector>

#include "pmtol/process.hpp"
#include "pmtol/provider.hpp"

namespace pmtol {

// Momentum mismatch d3*b3 - d2*b2 - d1*b1 with b_i = 2*pi*n_eff_i/lambda_i,
// in rad/m. The QPM grating term is NOT subtracted here; callers subtract
// 2*pi/period explicitly.
double delta_beta(const DispersionProvider& provider, const Process& process, double width_m);

// Analytic width derivative of delta_beta (rad/m per m). Internal fast-path
// machinery; the published process sensitivity below is the spec'd finite
// difference.
double delta_beta_dw(const DispersionProvider& provider, const Process& process, double width_m);

// Signed first-order QPM period 2*pi/delta_beta so that
// delta_beta - 2*pi/period == 0 at this width. Throws DegenerateNoPoling
// when |delta_beta| < 1e-6 rad/m.
double qpm_period(const DispersionProvider& provider, const Process& process, double width_m);

// Central finite difference of delta_beta in the width, step h (default
// 0.05 um). rad/m per m. With one_sided_fallback the window edges fall back
// to a one-sided difference instead of failing.
double sensitivity(const DispersionProvider& provider, const Process& process, double width_m,
                   double step_m = 5e-8, bool one_sided_fallback = false);

// All roots of sensitivity(w) in [w_lo, w_hi]: coarse scan at scan_step,
// then bisection of each sign-change bracket to below 1e-3 um. Ascending;
// may be empty. Throws DegenerateEverywhereCritical when the sensitivity
// vanishes over the whole range.
std::vector<double> noncritical_widths(const DispersionProvider& provider, const Process& process,
                                       double w_lo_m, double w_hi_m, double scan_step_m = 2.5e-7);

// Maximum device length keeping the process above 50% efficiency for a
// worst-case width error: 2*Gamma / (|sens| * dw_max). Throws
// InfiniteTolerance at sens == 0 (noncritical operation).
double l_max(double sens, double delta_w_max_m);

}  // namespace pmtol

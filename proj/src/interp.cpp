#include "pmtol/interp.hpp"

#include <algorithm>
#include <cmath>

#include "pmtol/errors.hpp"

namespace pmtol {

namespace {

// Node slopes by centred differences on a possibly non-uniform grid,
// one-sided at the ends. stride walks the flattened value array along the
// differentiated axis.
void fill_slopes(const std::vector<double>& grid, const std::vector<double>& f,
                 std::vector<double>& out, std::size_t stride, std::size_t line_stride,
                 std::size_t lines) {
  const std::size_t n = grid.size();
  for (std::size_t line = 0; line < lines; ++line) {
    const std::size_t base = line * line_stride;
    for (std::size_t i = 0; i < n; ++i) {
      double d;
      if (i == 0) {
        d = (f[base + stride] - f[base]) / (grid[1] - grid[0]);
      } else if (i + 1 == n) {
        d = (f[base + i * stride] - f[base + (i - 1) * stride]) / (grid[i] - grid[i - 1]);
      } else {
        d = (f[base + (i + 1) * stride] - f[base + (i - 1) * stride]) /
            (grid[i + 1] - grid[i - 1]);
      }
      out[base + i * stride] = d;
    }
  }
}

inline void hermite_weights(double t, double w[4]) {
  const double t2 = t * t;
  const double t3 = t2 * t;
  w[0] = 2.0 * t3 - 3.0 * t2 + 1.0;  // value at left node
  w[1] = t3 - 2.0 * t2 + t;          // slope at left node
  w[2] = -2.0 * t3 + 3.0 * t2;       // value at right node
  w[3] = t3 - t2;                    // slope at right node
}

inline void hermite_weights_d(double t, double w[4]) {
  const double t2 = t * t;
  w[0] = 6.0 * t2 - 6.0 * t;
  w[1] = 3.0 * t2 - 4.0 * t + 1.0;
  w[2] = -6.0 * t2 + 6.0 * t;
  w[3] = 3.0 * t2 - 2.0 * t;
}

}  // namespace

BicubicGrid::BicubicGrid(std::vector<double> xs, std::vector<double> ys,
                         std::vector<double> values)
    : xs_(std::move(xs)), ys_(std::move(ys)), f_(std::move(values)) {
  const std::size_t nx = xs_.size(), ny = ys_.size();
  if (nx < 2 || ny < 2) fail(errc::bad_input, "bicubic grid needs at least 2x2 nodes");
  if (f_.size() != nx * ny) fail(errc::bad_input, "bicubic grid value count mismatch");
  for (std::size_t i = 1; i < nx; ++i)
    if (!(xs_[i] > xs_[i - 1])) fail(errc::bad_input, "bicubic x grid not strictly increasing");
  for (std::size_t j = 1; j < ny; ++j)
    if (!(ys_[j] > ys_[j - 1])) fail(errc::bad_input, "bicubic y grid not strictly increasing");

  fx_.resize(f_.size());
  fy_.resize(f_.size());
  fxy_.resize(f_.size());
  // d/dx along columns (node stride ny, one line per y index), d/dy along
  // rows (node stride 1, one line per x index), cross slopes from fx.
  fill_slopes(xs_, f_, fx_, ny, 1, ny);
  fill_slopes(ys_, f_, fy_, 1, ny, nx);
  fill_slopes(ys_, fx_, fxy_, 1, ny, nx);
}

std::size_t BicubicGrid::cell(const std::vector<double>& grid, double v) const {
  const auto it = std::upper_bound(grid.begin(), grid.end(), v);
  std::size_t i = static_cast<std::size_t>(it - grid.begin());
  if (i == 0) i = 1;
  if (i >= grid.size()) i = grid.size() - 1;
  return i - 1;
}

void BicubicGrid::eval_patch(double x, double y, double* out_f, double* out_fy) const {
  const std::size_t ny = ys_.size();
  const std::size_t i = cell(xs_, x);
  const std::size_t j = cell(ys_, y);
  const double hx = xs_[i + 1] - xs_[i];
  const double hy = ys_[j + 1] - ys_[j];
  const double tx = (x - xs_[i]) / hx;
  const double ty = (y - ys_[j]) / hy;

  double wx[4], wy[4], wyd[4];
  hermite_weights(tx, wx);
  hermite_weights(ty, wy);
  if (out_fy) hermite_weights_d(ty, wyd);

  const std::size_t n00 = i * ny + j;
  const std::size_t n01 = n00 + 1;
  const std::size_t n10 = n00 + ny;
  const std::size_t n11 = n10 + 1;

  // Collapse the y direction first at both x nodes, for both the value and
  // the x-slope surfaces.
  auto collapse = [&](const std::vector<double>& v, const std::vector<double>& vy,
                      const double w[4], std::size_t a, std::size_t b) {
    return w[0] * v[a] + w[1] * hy * vy[a] + w[2] * v[b] + w[3] * hy * vy[b];
  };

  if (out_f) {
    const double f0 = collapse(f_, fy_, wy, n00, n01);
    const double f1 = collapse(f_, fy_, wy, n10, n11);
    const double g0 = collapse(fx_, fxy_, wy, n00, n01);
    const double g1 = collapse(fx_, fxy_, wy, n10, n11);
    *out_f = wx[0] * f0 + wx[1] * hx * g0 + wx[2] * f1 + wx[3] * hx * g1;
  }
  if (out_fy) {
    const double f0 = collapse(f_, fy_, wyd, n00, n01) / hy;
    const double f1 = collapse(f_, fy_, wyd, n10, n11) / hy;
    const double g0 = collapse(fx_, fxy_, wyd, n00, n01) / hy;
    const double g1 = collapse(fx_, fxy_, wyd, n10, n11) / hy;
    *out_fy = wx[0] * f0 + wx[1] * hx * g0 + wx[2] * f1 + wx[3] * hx * g1;
  }
}

double BicubicGrid::value(double x, double y) const {
  double f = 0.0;
  eval_patch(x, y, &f, nullptr);
  return f;
}

double BicubicGrid::deriv_y(double x, double y) const {
  double fy = 0.0;
  eval_patch(x, y, nullptr, &fy);
  return fy;
}

CubicHermiteSeries::CubicHermiteSeries(std::vector<double> xs, std::vector<double> values,
                                       std::vector<double> slopes)
    : xs_(std::move(xs)), f_(std::move(values)), d_(std::move(slopes)) {
  if (xs_.size() < 2 || f_.size() != xs_.size() || d_.size() != xs_.size())
    fail(errc::bad_input, "hermite series needs matching node/value/slope arrays");
}

double CubicHermiteSeries::operator()(double x) const {
  const auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
  std::size_t i = static_cast<std::size_t>(it - xs_.begin());
  if (i == 0) i = 1;
  if (i >= xs_.size()) i = xs_.size() - 1;
  --i;
  const double h = xs_[i + 1] - xs_[i];
  const double t = (x - xs_[i]) / h;
  double w[4];
  hermite_weights(t, w);
  return w[0] * f_[i] + w[1] * h * d_[i] + w[2] * f_[i + 1] + w[3] * h * d_[i + 1];
}

}  // namespace pmtol

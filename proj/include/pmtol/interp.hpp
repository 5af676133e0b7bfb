#pragma once

#include <cstddef>
#include <vector>

namespace pmtol {

// C1 tensor-product cubic Hermite interpolation on a rectilinear grid.
// Node slopes come from centred finite differences (one-sided at the
// edges), so the surface passes through every node exactly and has
// continuous first derivatives across cell boundaries -- the property the
// width-derivative (process sensitivity) needs. Grids may be non-uniform.
class BicubicGrid {
 public:
  BicubicGrid() = default;
  // values[i * ny + j] is the sample at (xs[i], ys[j]); both grids must be
  // strictly increasing with at least two points each.
  BicubicGrid(std::vector<double> xs, std::vector<double> ys, std::vector<double> values);

  double value(double x, double y) const;
  // Analytic partial derivative of the interpolant along y.
  double deriv_y(double x, double y) const;

  const std::vector<double>& xs() const { return xs_; }
  const std::vector<double>& ys() const { return ys_; }
  double node(std::size_t i, std::size_t j) const { return f_[i * ys_.size() + j]; }
  double node_dy(std::size_t i, std::size_t j) const { return fy_[i * ys_.size() + j]; }

 private:
  std::size_t cell(const std::vector<double>& grid, double v) const;
  void eval_patch(double x, double y, double* out_f, double* out_fy) const;

  std::vector<double> xs_, ys_;
  std::vector<double> f_, fx_, fy_, fxy_;
};

// Piecewise cubic Hermite through (xs[i], values[i]) with prescribed node
// slopes. Used for the per-axis-point delta-beta-vs-width fast path.
class CubicHermiteSeries {
 public:
  CubicHermiteSeries() = default;
  CubicHermiteSeries(std::vector<double> xs, std::vector<double> values, std::vector<double> slopes);

  double operator()(double x) const;
  bool empty() const { return xs_.empty(); }

 private:
  std::vector<double> xs_, f_, d_;
};

}  // namespace pmtol

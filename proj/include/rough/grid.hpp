#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace rough {

using Array = Eigen::ArrayXd;
using Vec = Eigen::Vector3d;  // point in R^n, n <= 3; trailing coordinates are zero

[[noreturn]] inline void fail(const std::string& msg) { throw std::invalid_argument(msg); }

inline void require(bool cond, const std::string& msg) {
  if (!cond) fail(msg);
}

/// Uniform cell-centered grid on the box [-R, R]^n.
/// Cell centers along each axis sit at x_i = -R + (i + 1/2) h with h = 2R/N.
struct GridSpec {
  int n = 2;               // dimension, 1..3
  int cells = 64;          // N, cells per axis (even)
  double half_width = 1.0; // R

  GridSpec() = default;
  GridSpec(int dim, int cells_per_axis, double half_width_)
      : n(dim), cells(cells_per_axis), half_width(half_width_) {
    require(n >= 1 && n <= 3, "GridSpec: dimension must be 1, 2 or 3");
    require(cells >= 2 && cells % 2 == 0, "GridSpec: cells per axis must be even and >= 2");
    require(half_width > 0, "GridSpec: half-width must be positive");
  }

  double spacing() const { return 2.0 * half_width / cells; }
  double cell_volume() const {
    double h = spacing(), v = 1.0;
    for (int d = 0; d < n; ++d) v *= h;
    return v;
  }

  Eigen::Index size() const {
    Eigen::Index s = 1;
    for (int d = 0; d < n; ++d) s *= cells;
    return s;
  }

  std::array<int, 3> unflatten(Eigen::Index flat) const {
    std::array<int, 3> idx{0, 0, 0};
    for (int d = 0; d < n; ++d) {
      idx[d] = static_cast<int>(flat % cells);
      flat /= cells;
    }
    return idx;
  }

  Eigen::Index flatten(const std::array<int, 3>& idx) const {
    Eigen::Index flat = 0;
    for (int d = n - 1; d >= 0; --d) flat = flat * cells + idx[d];
    return flat;
  }

  double axis_center(int i) const { return -half_width + (i + 0.5) * spacing(); }

  Vec point(Eigen::Index flat) const {
    auto idx = unflatten(flat);
    Vec x = Vec::Zero();
    for (int d = 0; d < n; ++d) x[d] = axis_center(idx[d]);
    return x;
  }

  bool contains(const Vec& x) const {
    for (int d = 0; d < n; ++d)
      if (x[d] < -half_width || x[d] > half_width) return false;
    return true;
  }

  /// Index of the cell whose center is nearest to coordinate x along one axis.
  int nearest_axis_index(double x) const {
    int i = static_cast<int>(std::lround((x + half_width) / spacing() - 0.5));
    return std::clamp(i, 0, cells - 1);
  }

  bool same_layout(const GridSpec& o) const {
    return n == o.n && cells == o.cells && half_width == o.half_width;
  }

  /// True when the two grids share spacing and their cell centers differ by
  /// integer multiples of h (kernel tables indexed by offset then apply).
  bool commensurate(const GridSpec& o) const {
    if (n != o.n) return false;
    double h = spacing();
    if (std::abs(h - o.spacing()) > 1e-14 * h) return false;
    double shift = (o.half_width - half_width) / h;
    return std::abs(shift - std::lround(shift)) < 1e-9;
  }
};

}  // namespace rough

#pragma once

#include <vector>

#include "rough/field.hpp"

namespace rough {

/// Axis-parallel cube, half-open membership [center - l/2, center + l/2).
struct Cube {
  Vec center = Vec::Zero();
  double side = 1.0;
  double volume(int n) const {
    double v = 1;
    for (int d = 0; d < n; ++d) v *= side;
    return v;
  }
};

struct Ball {
  Vec center = Vec::Zero();
  double radius = 1.0;
};

/// Per-axis half-open index window [lo, hi) of cells inside a cube, clipped
/// to the grid. count() == 0 means the cube misses every cell center.
struct IndexWindow {
  int lo[3] = {0, 0, 0};
  int hi[3] = {0, 0, 0};
  int dims = 1;
  Eigen::Index count() const {
    Eigen::Index c = 1;
    for (int d = 0; d < dims; ++d) c *= std::max(0, hi[d] - lo[d]);
    return c;
  }
};

IndexWindow cube_window(const GridSpec& g, const Cube& q);

/// Inclusive n-dimensional prefix sums over cell values; O(1) window sums.
class BoxSums {
 public:
  BoxSums() = default;
  BoxSums(const GridSpec& g, const Array& values);
  double window_sum(const IndexWindow& w) const;
  double window_mean(const IndexWindow& w) const;  // sum / cell count
 private:
  GridSpec grid_;
  std::vector<double> sums_;  // (N+1)^n
  Eigen::Index stride_[3] = {1, 1, 1};
  double corner(int i0, int i1, int i2) const;
};

/// Finite set of cubes used for every discretized supremum. The generated
/// family has dyadic side lengths h*2^j, centers on grid points with stride
/// max(1, 2^(j-1)) per axis, and is clipped to twice the domain box.
struct CubeFamily {
  GridSpec grid;
  int j_min = 0;
  int j_max = 0;
  std::vector<Cube> cubes;

  static CubeFamily dyadic(const GridSpec& g, int j_min = 0, int j_max = -1);
  static CubeFamily from_cubes(const GridSpec& g, std::vector<Cube> list);

  int scale_count() const { return j_max - j_min + 1; }
  double side(int j) const { return grid.spacing() * std::ldexp(1.0, j); }
};

/// Mean of f over cell centers inside Q. Rejects cubes holding no center.
double average(const ScalarField& f, const Cube& q);

/// All family cubes containing x.
std::vector<Cube> cubes_containing(const Vec& x, const CubeFamily& family);

/// Quadrature nodes and positive weights on S^(n-1).
/// n=2: equi-angular nodes, weights 2*pi/M. n=3: Gauss-Legendre in cos(theta)
/// crossed with a uniform azimuthal grid, node count ~ M.
struct SphereQuadrature {
  int n = 2;
  std::vector<Vec> nodes;
  Array weights;
  double total() const { return weights.sum(); }
};

SphereQuadrature sphere_quadrature(int n, int node_count);

/// Surface measure of the unit sphere: 2 (n=1), 2*pi (n=2), 4*pi (n=3).
double sphere_measure(int n);

/// Unit ball volume: sphere_measure(n) / n.
double ball_volume(int n);

}  // namespace rough

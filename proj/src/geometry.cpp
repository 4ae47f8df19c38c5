#include "rough/geometry.hpp"

#include <cmath>

namespace rough {

static int axis_lo_index(const GridSpec& g, double coord) {
  // first i with cell center >= coord
  double u = (coord + g.half_width) / g.spacing() - 0.5;
  return static_cast<int>(std::ceil(u - 1e-9));
}

IndexWindow cube_window(const GridSpec& g, const Cube& q) {
  IndexWindow w;
  w.dims = g.n;
  for (int d = 0; d < g.n; ++d) {
    double lo = q.center[d] - 0.5 * q.side;
    double hi = q.center[d] + 0.5 * q.side;
    w.lo[d] = std::max(0, axis_lo_index(g, lo));
    w.hi[d] = std::min(g.cells, axis_lo_index(g, hi));
  }
  return w;
}

BoxSums::BoxSums(const GridSpec& g, const Array& values) : grid_(g) {
  const int N = g.cells;
  Eigen::Index total = 1;
  for (int d = 0; d < g.n; ++d) {
    stride_[d] = total;
    total *= (N + 1);
  }
  sums_.assign(total, 0.0);
  const int n = g.n;
  const int n1 = n >= 2 ? N : 1, n2 = n >= 3 ? N : 1;
  for (int i2 = 0; i2 < n2; ++i2)
    for (int i1 = 0; i1 < n1; ++i1)
      for (int i0 = 0; i0 < N; ++i0) {
        Eigen::Index src = i0 + static_cast<Eigen::Index>(N) * (i1 + static_cast<Eigen::Index>(N) * i2);
        Eigen::Index dst = (i0 + 1) * stride_[0] + (n >= 2 ? (i1 + 1) * stride_[1] : 0) +
                           (n >= 3 ? (i2 + 1) * stride_[2] : 0);
        double v = values[src];
        // standard inclusion-exclusion update
        v += sums_[dst - stride_[0]];
        if (n >= 2) {
          v += sums_[dst - stride_[1]] - sums_[dst - stride_[0] - stride_[1]];
        }
        if (n >= 3) {
          v += sums_[dst - stride_[2]] - sums_[dst - stride_[0] - stride_[2]] -
               sums_[dst - stride_[1] - stride_[2]] + sums_[dst - stride_[0] - stride_[1] - stride_[2]];
        }
        sums_[dst] = v;
      }
}

double BoxSums::corner(int i0, int i1, int i2) const {
  Eigen::Index idx = i0 * stride_[0];
  if (grid_.n >= 2) idx += i1 * stride_[1];
  if (grid_.n >= 3) idx += i2 * stride_[2];
  return sums_[idx];
}

double BoxSums::window_sum(const IndexWindow& w) const {
  for (int d = 0; d < grid_.n; ++d)
    if (w.hi[d] <= w.lo[d]) return 0.0;
  const int a0 = w.lo[0], b0 = w.hi[0];
  switch (grid_.n) {
    case 1:
      return corner(b0, 0, 0) - corner(a0, 0, 0);
    case 2: {
      const int a1 = w.lo[1], b1 = w.hi[1];
      return corner(b0, b1, 0) - corner(a0, b1, 0) - corner(b0, a1, 0) + corner(a0, a1, 0);
    }
    default: {
      const int a1 = w.lo[1], b1 = w.hi[1], a2 = w.lo[2], b2 = w.hi[2];
      return corner(b0, b1, b2) - corner(a0, b1, b2) - corner(b0, a1, b2) + corner(a0, a1, b2) -
             corner(b0, b1, a2) + corner(a0, b1, a2) + corner(b0, a1, a2) - corner(a0, a1, a2);
    }
  }
}

double BoxSums::window_mean(const IndexWindow& w) const {
  Eigen::Index c = w.count();
  require(c > 0, "window_mean: empty window");
  return window_sum(w) / static_cast<double>(c);
}

CubeFamily CubeFamily::dyadic(const GridSpec& g, int j_min, int j_max) {
  CubeFamily fam;
  fam.grid = g;
  const double h = g.spacing();
  if (j_max < 0) {
    j_max = 0;
    while (std::ldexp(1.0, j_max + 1) <= 2 * g.cells) ++j_max;
  }
  require(j_min >= 0 && j_min <= j_max, "CubeFamily: bad scale range");
  fam.j_min = j_min;
  fam.j_max = j_max;
  const double clip = 2.0 * g.half_width + 0.5 * h;
  const int N = g.cells;
  for (int j = j_min; j <= j_max; ++j) {
    double side = h * std::ldexp(1.0, j);
    int stride = std::max(1, 1 << (j - 1));
    const int n1 = g.n >= 2 ? N : 1, n2 = g.n >= 3 ? N : 1;
    for (int i2 = 0; i2 < n2; i2 += (g.n >= 3 ? stride : 1))
      for (int i1 = 0; i1 < n1; i1 += (g.n >= 2 ? stride : 1))
        for (int i0 = 0; i0 < N; i0 += stride) {
          Cube q;
          q.side = side;
          q.center = Vec::Zero();
          std::array<int, 3> idx{i0, i1, i2};
          bool ok = true;
          for (int d = 0; d < g.n; ++d) {
            q.center[d] = g.axis_center(idx[d]);
            if (q.center[d] - side / 2 < -clip || q.center[d] + side / 2 > clip) ok = false;
          }
          if (ok) fam.cubes.push_back(q);
          if (g.n < 3) break;
        }
  }
  return fam;
}

CubeFamily CubeFamily::from_cubes(const GridSpec& g, std::vector<Cube> list) {
  CubeFamily fam;
  fam.grid = g;
  fam.cubes = std::move(list);
  require(!fam.cubes.empty(), "CubeFamily: empty cube list");
  double h = g.spacing();
  double lo = fam.cubes.front().side, hi = lo;
  for (const Cube& q : fam.cubes) {
    lo = std::min(lo, q.side);
    hi = std::max(hi, q.side);
    IndexWindow w = cube_window(g, q);
    require(w.count() > 0, "CubeFamily: cube misses every cell center");
  }
  fam.j_min = std::max(0, static_cast<int>(std::floor(std::log2(lo / h))));
  fam.j_max = std::max(fam.j_min, static_cast<int>(std::ceil(std::log2(hi / h))));
  return fam;
}

double average(const ScalarField& f, const Cube& q) {
  IndexWindow w = cube_window(f.grid, q);
  Eigen::Index cnt = w.count();
  require(cnt > 0, "average: cube contains no cell center");
  const GridSpec& g = f.grid;
  double s = 0;
  const int n = g.n;
  for (int i2 = (n >= 3 ? w.lo[2] : 0); i2 < (n >= 3 ? w.hi[2] : 1); ++i2)
    for (int i1 = (n >= 2 ? w.lo[1] : 0); i1 < (n >= 2 ? w.hi[1] : 1); ++i1) {
      Eigen::Index rowbase = static_cast<Eigen::Index>(g.n >= 2 ? i1 : 0) * g.cells +
                             static_cast<Eigen::Index>(g.n >= 3 ? i2 : 0) * g.cells * g.cells;
      for (int i0 = w.lo[0]; i0 < w.hi[0]; ++i0) s += f.values[rowbase + i0];
    }
  return s / static_cast<double>(cnt);
}

std::vector<Cube> cubes_containing(const Vec& x, const CubeFamily& family) {
  require(family.grid.contains(x), "cubes_containing: point outside domain box");
  std::vector<Cube> out;
  for (const Cube& q : family.cubes) {
    bool in = true;
    for (int d = 0; d < family.grid.n && in; ++d) {
      double lo = q.center[d] - q.side / 2, hi = q.center[d] + q.side / 2;
      if (x[d] < lo || x[d] >= hi) in = false;
    }
    if (in) out.push_back(q);
  }
  require(!out.empty(), "cubes_containing: family misses the point (family too sparse)");
  return out;
}

double sphere_measure(int n) {
  switch (n) {
    case 1: return 2.0;
    case 2: return 2.0 * M_PI;
    case 3: return 4.0 * M_PI;
    default: fail("sphere_measure: dimension must be 1..3");
  }
}

double ball_volume(int n) { return sphere_measure(n) / n; }

// Gauss-Legendre nodes/weights on (-1, 1) by Newton iteration.
static void gauss_legendre(int m, std::vector<double>& x, std::vector<double>& w) {
  x.assign(m, 0.0);
  w.assign(m, 0.0);
  for (int i = 0; i < (m + 1) / 2; ++i) {
    double z = std::cos(M_PI * (i + 0.75) / (m + 0.5));
    double pp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int k = 0; k < m; ++k) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2 * k + 1) * z * p1 - k * p2) / (k + 1);
      }
      pp = m * (z * p0 - p1) / (z * z - 1.0);
      double dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    x[i] = -z;
    x[m - 1 - i] = z;
    double wi = 2.0 / ((1.0 - z * z) * pp * pp);
    w[i] = wi;
    w[m - 1 - i] = wi;
  }
}

SphereQuadrature sphere_quadrature(int n, int node_count) {
  SphereQuadrature q;
  q.n = n;
  if (n == 2) {
    require(node_count >= 8, "sphere_quadrature: need at least 8 nodes on S^1");
    q.nodes.resize(node_count);
    q.weights = Array::Constant(node_count, 2.0 * M_PI / node_count);
    for (int i = 0; i < node_count; ++i) {
      double th = 2.0 * M_PI * (i + 0.5) / node_count;
      q.nodes[i] = Vec(std::cos(th), std::sin(th), 0.0);
    }
    return q;
  }
  if (n == 3) {
    require(node_count >= 32, "sphere_quadrature: need at least 32 nodes on S^2");
    int mt = std::max(4, static_cast<int>(std::lround(std::sqrt(node_count / 2.0))));
    int mp = std::max(8, (node_count + mt - 1) / mt);
    std::vector<double> gx, gw;
    gauss_legendre(mt, gx, gw);
    q.nodes.reserve(static_cast<size_t>(mt) * mp);
    std::vector<double> wts;
    wts.reserve(static_cast<size_t>(mt) * mp);
    for (int i = 0; i < mt; ++i) {
      double mu = gx[i];                  // cos(theta)
      double s = std::sqrt(1.0 - mu * mu);
      for (int j = 0; j < mp; ++j) {
        double phi = 2.0 * M_PI * (j + 0.5) / mp;
        q.nodes.emplace_back(s * std::cos(phi), s * std::sin(phi), mu);
        wts.push_back(gw[i] * 2.0 * M_PI / mp);
      }
    }
    q.weights = Eigen::Map<Array>(wts.data(), static_cast<Eigen::Index>(wts.size()));
    return q;
  }
  if (n == 1) {
    // S^0 = two points, needed only for completeness of radial decompositions
    q.nodes = {Vec(1, 0, 0), Vec(-1, 0, 0)};
    q.weights = Array::Constant(2, 1.0);
    return q;
  }
  fail("sphere_quadrature: dimension must be 1..3");
}

}  // namespace rough

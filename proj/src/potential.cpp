#include "rough/potential.hpp"

#include <cmath>

namespace rough {

double singular_cell_average(int n, double alpha, double h) {
  require(alpha > 0 && alpha < n, "singular_cell_average: alpha must lie in (0, n)");
  if (n == 1) {
    // (1/h) Int_{-h/2}^{h/2} |z|^(alpha-1) dz = 2 (h/2)^alpha / (alpha h)
    return 2.0 * std::pow(0.5 * h, alpha) / (alpha * h);
  }
  if (n == 2 && alpha == 1.0) {
    // Int over the square of 1/|z| has the closed form 8 (h/2) asinh(1)
    return 4.0 * std::log(1.0 + std::sqrt(2.0)) / h;
  }
  const int refine = 16;
  double sum = 0;
  const double sub = h / refine;
  const int n1 = n >= 2 ? refine : 1, n2 = n >= 3 ? refine : 1;
  for (int i2 = 0; i2 < n2; ++i2)
    for (int i1 = 0; i1 < n1; ++i1)
      for (int i0 = 0; i0 < refine; ++i0) {
        double z0 = -0.5 * h + (i0 + 0.5) * sub;
        double z1 = n >= 2 ? -0.5 * h + (i1 + 0.5) * sub : 0.0;
        double z2 = n >= 3 ? -0.5 * h + (i2 + 0.5) * sub : 0.0;
        double rr = std::sqrt(z0 * z0 + z1 * z1 + z2 * z2);
        sum += std::pow(rr, alpha - n);
      }
  double cells = std::pow(static_cast<double>(refine), n);
  return sum / cells;
}

namespace {

// Kernel table over integer cell offsets for commensurate grids.
struct KernelTable {
  std::vector<double> k;  // indexed by shifted offsets
  int ext[3] = {1, 1, 1};
  int off[3] = {0, 0, 0};
  double at(int d0, int d1, int d2) const {
    size_t idx = static_cast<size_t>(d0 + off[0]);
    idx += static_cast<size_t>(ext[0]) * static_cast<size_t>(d1 + off[1]);
    idx += static_cast<size_t>(ext[0]) * ext[1] * static_cast<size_t>(d2 + off[2]);
    return k[idx];
  }
};

KernelTable build_kernel_table(int n, double alpha, double h, int max_abs_offset) {
  KernelTable t;
  int ext = 2 * max_abs_offset + 1;
  for (int d = 0; d < n; ++d) {
    t.ext[d] = ext;
    t.off[d] = max_abs_offset;
  }
  size_t total = 1;
  for (int d = 0; d < n; ++d) total *= ext;
  t.k.resize(total);
  double singular = singular_cell_average(n, alpha, h);
  const int e1 = n >= 2 ? ext : 1, e2 = n >= 3 ? ext : 1;
  for (int i2 = 0; i2 < e2; ++i2)
    for (int i1 = 0; i1 < e1; ++i1)
      for (int i0 = 0; i0 < ext; ++i0) {
        double z0 = (i0 - max_abs_offset) * h;
        double z1 = n >= 2 ? (i1 - max_abs_offset) * h : 0;
        double z2 = n >= 3 ? (i2 - max_abs_offset) * h : 0;
        double rr = std::sqrt(z0 * z0 + z1 * z1 + z2 * z2);
        size_t idx = static_cast<size_t>(i0) + static_cast<size_t>(ext) * (n >= 2 ? i1 : 0) +
                     static_cast<size_t>(ext) * e1 * (n >= 3 ? i2 : 0);
        t.k[idx] = rr == 0 ? singular : std::pow(rr, alpha - n);
      }
  return t;
}

}  // namespace

ScalarField riesz_potential(const ScalarField& f, double alpha) {
  return riesz_potential(f, alpha, f.grid);
}

ScalarField riesz_potential(const ScalarField& f, double alpha, const GridSpec& eval_grid) {
  const GridSpec& gs = f.grid;
  require(alpha > 0 && alpha < gs.n, "riesz_potential: alpha must lie in (0, n)");
  require(eval_grid.n == gs.n, "riesz_potential: dimension mismatch");
  ScalarField out(eval_grid);
  const Eigen::Index me = eval_grid.size(), ms = gs.size();
  const double hn = gs.cell_volume();
  const int n = gs.n;

  if (gs.commensurate(eval_grid)) {
    const double h = gs.spacing();
    // offset between eval point i and source point j in units of h, per axis
    double shift_f = (gs.half_width - eval_grid.half_width) / h;
    int shift = static_cast<int>(std::lround(shift_f));
    int max_off = std::max(gs.cells, eval_grid.cells) + std::abs(shift) + 1;
    KernelTable table = build_kernel_table(n, alpha, h, max_off);
    const int Ns = gs.cells;
#pragma omp parallel for schedule(static)
    for (Eigen::Index ie = 0; ie < me; ++ie) {
      auto ei = eval_grid.unflatten(ie);
      int base_d[3] = {0, 0, 0};
      for (int d = 0; d < n; ++d) base_d[d] = ei[d] + shift;
      double acc = 0;
      const int s1 = n >= 2 ? Ns : 1, s2 = n >= 3 ? Ns : 1;
      for (int j2 = 0; j2 < s2; ++j2)
        for (int j1 = 0; j1 < s1; ++j1) {
          Eigen::Index row = (n >= 2 ? static_cast<Eigen::Index>(Ns) * j1 : 0) +
                             (n >= 3 ? static_cast<Eigen::Index>(Ns) * Ns * j2 : 0);
          int d1 = n >= 2 ? base_d[1] - j1 : 0;
          int d2 = n >= 3 ? base_d[2] - j2 : 0;
          for (int j0 = 0; j0 < Ns; ++j0) {
            double fv = f.values[row + j0];
            if (fv != 0) acc += fv * table.at(base_d[0] - j0, d1, d2);
          }
        }
      out.values[ie] = acc * hn;
    }
    return out;
  }

  // general grids: direct kernel evaluation per pair
  double singular = singular_cell_average(n, alpha, gs.spacing());
#pragma omp parallel for schedule(static)
  for (Eigen::Index ie = 0; ie < me; ++ie) {
    Vec x = eval_grid.point(ie);
    double acc = 0;
    for (Eigen::Index js = 0; js < ms; ++js) {
      double fv = f.values[js];
      if (fv == 0) continue;
      double rr = (x - gs.point(js)).head(n).norm();
      acc += fv * (rr < 0.5 * gs.spacing() * 1e-9 ? singular : std::pow(rr, alpha - n));
    }
    out.values[ie] = acc * hn;
  }
  return out;
}

ScalarField riesz_potential_measure(const DiscreteMeasure& mu, double alpha,
                                    const GridSpec& grid) {
  require(alpha > 0 && alpha < grid.n, "riesz_potential_measure: alpha must lie in (0, n)");
  ScalarField out(grid);
  const Eigen::Index m = grid.size();
  const int na = static_cast<int>(mu.points.size());
  const double tol = grid.spacing() * 1e-9;
#pragma omp parallel for schedule(static)
  for (Eigen::Index i = 0; i < m; ++i) {
    Vec x = grid.point(i);
    double acc = 0;
    for (int k = 0; k < na; ++k) {
      double rr = (x - mu.points[k]).head(grid.n).norm();
      if (rr < tol)
        fail("riesz_potential_measure: evaluation point coincides with a mass point; "
             "offset the measure by a fraction of the grid spacing");
      acc += mu.masses[k] * std::pow(rr, alpha - grid.n);
    }
    out.values[i] = acc;
  }
  return out;
}

ScalarField a1_power_weight(const DiscreteMeasure& mu, double alpha, double r,
                            const GridSpec& grid) {
  require(r >= 0, "a1_power_weight: power must be nonnegative");
  ScalarField w(grid);
  if (r == 0) {
    w.values = Array::Ones(grid.size());
    return w;
  }
  ScalarField pot = riesz_potential_measure(mu, alpha, grid);
  w.values = pot.values.pow(r);
  return w;
}

std::pair<double, double> kolmogorov_local_estimate(const DiscreteMeasure& mu, double alpha,
                                                    const Cube& q, double r,
                                                    const GridSpec& grid) {
  require(r >= 0, "kolmogorov_local_estimate: power must be nonnegative");
  IndexWindow w = cube_window(grid, q);
  require(w.count() > 0, "kolmogorov_local_estimate: cube contains no cell center");

  // masses restricted to 2Q
  Cube q2 = q;
  q2.side = 2 * q.side;
  std::vector<Vec> pts;
  std::vector<double> ms;
  for (size_t i = 0; i < mu.points.size(); ++i) {
    bool in = true;
    for (int d = 0; d < grid.n && in; ++d)
      if (std::abs(mu.points[i][d] - q2.center[d]) >= q2.side / 2) in = false;
    if (in) {
      pts.push_back(mu.points[i]);
      ms.push_back(mu.masses[i]);
    }
  }

  ScalarField full = riesz_potential_measure(mu, alpha, grid);
  double rhs = std::numeric_limits<double>::infinity();
  double local_avg = 0;
  Eigen::Index cnt = 0;
  const int n = grid.n;
  for (int i2 = (n >= 3 ? w.lo[2] : 0); i2 < (n >= 3 ? w.hi[2] : 1); ++i2)
    for (int i1 = (n >= 2 ? w.lo[1] : 0); i1 < (n >= 2 ? w.hi[1] : 1); ++i1)
      for (int i0 = w.lo[0]; i0 < w.hi[0]; ++i0) {
        std::array<int, 3> idx{i0, i1, i2};
        Eigen::Index flat = grid.flatten(idx);
        rhs = std::min(rhs, full.values[flat]);
        if (r > 0 && !pts.empty()) {
          Vec x = grid.point(flat);
          double acc = 0;
          for (size_t k = 0; k < pts.size(); ++k) {
            double rr = (x - pts[k]).head(n).norm();
            require(rr > grid.spacing() * 1e-9,
                    "kolmogorov_local_estimate: cell center coincides with a mass point");
            acc += ms[k] * std::pow(rr, alpha - n);
          }
          local_avg += std::pow(acc, r);
        }
        ++cnt;
      }
  double lhs;
  if (r == 0)
    lhs = 1.0;  // degenerate convention
  else if (pts.empty())
    lhs = 0.0;
  else
    lhs = std::pow(local_avg / static_cast<double>(cnt), 1.0 / r);
  return {lhs, rhs};
}

}  // namespace rough

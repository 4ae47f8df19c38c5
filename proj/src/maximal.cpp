#include "rough/maximal.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

#include "rough/potential.hpp"

namespace rough {

MaximalGauge MaximalGauge::mean(double alpha) {
  MaximalGauge g;
  g.alpha = alpha;
  return g;
}

MaximalGauge MaximalGauge::power(double r, double alpha) {
  require(r >= 1, "MaximalGauge: power exponent must be >= 1");
  MaximalGauge g;
  g.kind = Kind::Power;
  g.r = r;
  g.alpha = alpha;
  return g;
}

MaximalGauge MaximalGauge::lorentz(const LorentzIndex& idx, double alpha) {
  MaximalGauge g;
  g.kind = Kind::Lorentz;
  g.lorentz_index = idx;
  g.alpha = alpha;
  return g;
}

MaximalGauge MaximalGauge::orlicz(const YoungFunction& phi, double alpha) {
  MaximalGauge g;
  g.kind = Kind::Orlicz;
  g.young = phi;
  g.alpha = alpha;
  return g;
}

namespace {

struct AxisWindow {
  int lo, hi;
};

// Centered half-open window [i - 2^(j-1), i + 2^(j-1)) clipped to [0, N).
inline AxisWindow centered_axis_window(int i, int j, int N) {
  if (j == 0) return {i, std::min(i + 1, N)};
  int half = 1 << (j - 1);
  return {std::max(0, i - half), std::min(N, i + half)};
}

// Sliding range-max pyramid; level j covers [s, s + 2^j) per axis, clipped.
// Queries over-cover a window by up to one block per axis, so they yield an
// upper bound, which is all the pruning needs.
class RangeMax {
 public:
  RangeMax(const GridSpec& g, const Array& abs_values, int levels) : g_(g) {
    const int N = g.cells;
    tables_.resize(levels + 1);
    tables_[0].assign(abs_values.data(), abs_values.data() + abs_values.size());
    for (int j = 1; j <= levels; ++j) {
      const int d = 1 << (j - 1);
      const auto& prev = tables_[j - 1];
      auto& cur = tables_[j];
      cur = prev;
      const int n1 = g.n >= 2 ? N : 1, n2 = g.n >= 3 ? N : 1;
      for (int i2 = 0; i2 < n2; ++i2)
        for (int i1 = 0; i1 < n1; ++i1)
          for (int i0 = 0; i0 < N; ++i0) {
            Eigen::Index base = idx(i0, i1, i2);
            double v = prev[base];
            if (i0 + d < N) v = std::max(v, prev[idx(i0 + d, i1, i2)]);
            if (g.n >= 2 && i1 + d < N) {
              v = std::max(v, prev[idx(i0, i1 + d, i2)]);
              if (i0 + d < N) v = std::max(v, prev[idx(i0 + d, i1 + d, i2)]);
            }
            if (g.n >= 3 && i2 + d < N) {
              v = std::max(v, prev[idx(i0, i1, i2 + d)]);
              if (i0 + d < N) v = std::max(v, prev[idx(i0 + d, i1, i2 + d)]);
              if (i1 + d < N) {
                v = std::max(v, prev[idx(i0, i1 + d, i2 + d)]);
                if (i0 + d < N) v = std::max(v, prev[idx(i0 + d, i1 + d, i2 + d)]);
              }
            }
            cur[base] = v;
          }
    }
  }

  double bound(const AxisWindow* w, int level) const {
    level = std::min(level, static_cast<int>(tables_.size()) - 1);
    const int N = g_.cells, block = 1 << level;
    int s0[2], s1[2], s2[2];
    starts(w[0], block, N, s0);
    if (g_.n >= 2) starts(w[1], block, N, s1);
    if (g_.n >= 3) starts(w[2], block, N, s2);
    double best = 0;
    const int c1 = g_.n >= 2 ? 2 : 1, c2 = g_.n >= 3 ? 2 : 1;
    for (int b2 = 0; b2 < c2; ++b2)
      for (int b1 = 0; b1 < c1; ++b1)
        for (int b0 = 0; b0 < 2; ++b0)
          best = std::max(best, tables_[level][idx(s0[b0], g_.n >= 2 ? s1[b1] : 0,
                                                   g_.n >= 3 ? s2[b2] : 0)]);
    return best;
  }

 private:
  static void starts(const AxisWindow& w, int block, int N, int out[2]) {
    out[0] = std::clamp(w.lo, 0, std::max(0, N - 1));
    out[1] = std::clamp(w.hi - block, 0, std::max(0, N - 1));
  }
  Eigen::Index idx(int i0, int i1, int i2) const {
    Eigen::Index r = i0;
    if (g_.n >= 2) r += static_cast<Eigen::Index>(g_.cells) * i1;
    if (g_.n >= 3) r += static_cast<Eigen::Index>(g_.cells) * g_.cells * i2;
    return r;
  }
  GridSpec g_;
  std::vector<std::vector<double>> tables_;
};

void radix_sort_u32(std::vector<uint32_t>& a, std::vector<uint32_t>& tmp) {
  if (a.size() < 64) {
    std::sort(a.begin(), a.end());
    return;
  }
  uint32_t mx = 0;
  for (uint32_t v : a) mx = std::max(mx, v);
  tmp.resize(a.size());
  uint32_t counts[256];
  for (int shift = 0; shift < 32 && (mx >> shift); shift += 8) {
    std::fill(std::begin(counts), std::end(counts), 0u);
    for (uint32_t v : a) ++counts[(v >> shift) & 0xff];
    uint32_t run = 0;
    for (int b = 0; b < 256; ++b) {
      uint32_t c = counts[b];
      counts[b] = run;
      run += c;
    }
    for (uint32_t v : a) tmp[counts[(v >> shift) & 0xff]++] = v;
    a.swap(tmp);
  }
}

template <typename Fn>
void for_window_cells(const GridSpec& g, const AxisWindow* w, Fn&& fn) {
  const int N = g.cells;
  const int lo1 = g.n >= 2 ? w[1].lo : 0, hi1 = g.n >= 2 ? w[1].hi : 1;
  const int lo2 = g.n >= 3 ? w[2].lo : 0, hi2 = g.n >= 3 ? w[2].hi : 1;
  for (int i2 = lo2; i2 < hi2; ++i2)
    for (int i1 = lo1; i1 < hi1; ++i1) {
      Eigen::Index base = (g.n >= 2 ? static_cast<Eigen::Index>(N) * i1 : 0) +
                          (g.n >= 3 ? static_cast<Eigen::Index>(N) * N * i2 : 0);
      for (int i0 = w[0].lo; i0 < w[0].hi; ++i0) fn(base + i0);
    }
}

struct RankOrder {
  std::vector<uint32_t> rank;   // rank[cell]: 0 = largest |f|
  std::vector<double> vq;       // |f|^q at the cell (q = 1 when unused)
  std::vector<double> vabs;     // |f| at the cell
};

RankOrder build_rank_order(const Array& values, double q) {
  const Eigen::Index m = values.size();
  std::vector<uint32_t> order(m);
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&](uint32_t a, uint32_t b) {
    double va = std::abs(values[a]), vb = std::abs(values[b]);
    return va > vb || (va == vb && a < b);
  });
  RankOrder ro;
  ro.rank.resize(m);
  ro.vabs.resize(m);
  ro.vq.resize(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    ro.rank[order[i]] = static_cast<uint32_t>(i);
    double v = std::abs(values[order[i]]);
    ro.vabs[i] = v;
    ro.vq[i] = std::isinf(q) ? v : std::pow(v, q);
  }
  return ro;
}

}  // namespace

ScalarField cube_maximal(const ScalarField& f, const MaximalGauge& gauge,
                         const CubeFamily& family) {
  const GridSpec& g = f.grid;
  require(family.grid.same_layout(g), "cube_maximal: family grid mismatch");
  require(gauge.alpha >= 0 && gauge.alpha < g.n, "cube_maximal: alpha must lie in [0, n)");
  const int N = g.cells;
  const double h = g.spacing();
  const Eigen::Index m = g.size();
  const int j_lo = family.j_min, j_hi = family.j_max;
  ScalarField out(g);

  if (gauge.kind == MaximalGauge::Kind::Mean || gauge.kind == MaximalGauge::Kind::Power) {
    const double r = gauge.kind == MaximalGauge::Kind::Mean ? 1.0 : gauge.r;
    Array powv = f.values.abs().pow(r);
    BoxSums sums(g, powv);
#pragma omp parallel for schedule(static)
    for (Eigen::Index i = 0; i < m; ++i) {
      auto idx = g.unflatten(i);
      double best = 0;
      for (int j = j_lo; j <= j_hi; ++j) {
        IndexWindow w;
        w.dims = g.n;
        for (int d = 0; d < g.n; ++d) {
          AxisWindow aw = centered_axis_window(idx[d], j, N);
          w.lo[d] = aw.lo;
          w.hi[d] = aw.hi;
        }
        double mean = sums.window_sum(w) / static_cast<double>(w.count());
        double side = h * std::ldexp(1.0, j);
        double v = std::pow(mean, 1.0 / r) * std::pow(side, gauge.alpha);
        best = std::max(best, v);
      }
      out.values[i] = best;
    }
    return out;
  }

  // Lorentz / Orlicz gauges: exact per-window order statistics over global
  // ranks, with a range-max bound to prune scales that cannot win.
  const bool is_lorentz = gauge.kind == MaximalGauge::Kind::Lorentz;
  const double p = gauge.lorentz_index.p, q = gauge.lorentz_index.q;
  RangeMax rmax(g, f.values.abs(), j_hi);
  RankOrder ro = is_lorentz ? build_rank_order(f.values, q) : RankOrder{};
  if (!is_lorentz) {
    ro.vabs.resize(m);
    for (Eigen::Index i = 0; i < m; ++i) ro.vabs[i] = std::abs(f.values[i]);
  }

  // dtab[i] = i^e - (i-1)^e with e = q/p (finite q) or 1/p (q = inf)
  std::vector<double> dtab;
  double expo = 0;
  if (is_lorentz) {
    expo = std::isinf(q) ? 1.0 / p : q / p;
    dtab.resize(m + 1);
    dtab[0] = 0;
    double prev = 0;
    for (Eigen::Index i = 1; i <= m; ++i) {
      double cur = std::pow(static_cast<double>(i), expo);
      dtab[i] = cur - prev;
      prev = cur;
    }
  }
  const double bound_factor =
      is_lorentz ? (std::isinf(q) ? 1.0 : std::pow(p / q, 1.0 / q))
                 : 1.0 / gauge.young.inverse(1.0);
  const double phi_inv1 = is_lorentz ? 0.0 : gauge.young.inverse(1.0);

  // whole-grid windows are point independent: cache them up front
  std::vector<double> full_scale_value(j_hi + 1, -1.0);

  // floor_best: a cube whose gauge value cannot exceed it may bail out early
  // (Orlicz path: one mean-of-Phi pass decides).
  auto eval_window = [&](const AxisWindow* w, std::vector<uint32_t>& buf,
                         std::vector<uint32_t>& tmp, double floor_best) -> double {
    Eigen::Index cnt = 1;
    for (int d = 0; d < g.n; ++d) cnt *= std::max(0, w[d].hi - w[d].lo);
    if (cnt <= 0) return 0.0;
    const double K = static_cast<double>(cnt);
    if (is_lorentz) {
      buf.clear();
      for_window_cells(g, w, [&](Eigen::Index cell) {
        uint32_t rk = ro.rank[cell];
        if (ro.vabs[rk] > 0) buf.push_back(rk);
      });
      if (buf.empty()) return 0.0;
      radix_sort_u32(buf, tmp);
      if (std::isinf(q)) {
        double best = 0;
        double kpow = std::pow(K, -1.0 / p);
        double run = 0;  // i^(1/p) accumulated through dtab
        for (size_t i = 0; i < buf.size(); ++i) {
          run += dtab[i + 1];
          best = std::max(best, ro.vabs[buf[i]] * run);
        }
        return best * kpow;
      }
      double s = 0;
      for (size_t i = 0; i < buf.size(); ++i) s += ro.vq[buf[i]] * dtab[i + 1];
      return std::pow(p / q * s, 1.0 / q) * std::pow(K, -1.0 / p);
    }
    // Orlicz: Luxemburg bisection; the mean of Phi needs no ordering
    double vmax = 0;
    for_window_cells(g, w, [&](Eigen::Index cell) { vmax = std::max(vmax, ro.vabs[cell]); });
    if (vmax <= 0) return 0.0;
    auto mean_phi = [&](double lambda) {
      double s = 0;
      for_window_cells(g, w, [&](Eigen::Index cell) {
        double v = std::abs(f.values[cell]);
        if (v > 0) s += gauge.young.value(v / lambda);
      });
      return s / K;
    };
    double hi = vmax / phi_inv1;
    if (hi <= floor_best) return 0.0;
    double lo;
    if (floor_best > 0) {
      if (mean_phi(floor_best) <= 1.0) return 0.0;  // value cannot beat the floor
      lo = floor_best;
    } else {
      lo = hi;
      for (int it = 0; it < 300 && mean_phi(lo) < 1.0; ++it) lo *= 0.5;
      if (mean_phi(lo) < 1.0) return lo;  // numerically flat: f vanishes a.e. on Q
    }
    for (int it = 0; it < 200 && hi / lo > 1.0 + 2e-11; ++it) {
      double mid = std::sqrt(lo * hi);
      (mean_phi(mid) <= 1.0 ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
  };

  {
    std::vector<uint32_t> buf, tmp;
    for (int j = j_lo; j <= j_hi; ++j) {
      if ((1 << j) >= 2 * N) {
        AxisWindow w[3] = {{0, N}, {0, N}, {0, N}};
        full_scale_value[j] = eval_window(w, buf, tmp, 0.0);
      }
    }
  }

#pragma omp parallel
  {
    std::vector<uint32_t> buf, tmp;
#pragma omp for schedule(dynamic, 64)
    for (Eigen::Index i = 0; i < m; ++i) {
      auto idx = g.unflatten(i);
      double best = 0;
      for (int j = j_lo; j <= j_hi; ++j) {
        double side_alpha = std::pow(h * std::ldexp(1.0, j), gauge.alpha);
        if (full_scale_value[j] >= 0) {
          best = std::max(best, full_scale_value[j] * side_alpha);
          continue;
        }
        AxisWindow w[3];
        for (int d = 0; d < g.n; ++d) w[d] = centered_axis_window(idx[d], j, N);
        for (int d = g.n; d < 3; ++d) w[d] = {0, 1};
        double bound = bound_factor * rmax.bound(w, j) * side_alpha;
        if (bound <= best) continue;
        double floor_best = is_lorentz ? 0.0 : best / side_alpha;
        best = std::max(best, eval_window(w, buf, tmp, floor_best) * side_alpha);
      }
      out.values[i] = best;
    }
  }
  return out;
}

ScalarField iterated_maximal(const ScalarField& f, int k, const CubeFamily& family) {
  require(k >= 0 && k <= 4, "iterated_maximal: k must lie in [0, 4]");
  if (k == 0) return abs_field(f);
  ScalarField cur = f;
  for (int it = 0; it < k; ++it) cur = cube_maximal(cur, MaximalGauge::mean(), family);
  return cur;
}

ScalarField sharp_maximal(const ScalarField& f, const CubeFamily& family) {
  const GridSpec& g = f.grid;
  require(family.grid.same_layout(g), "sharp_maximal: family grid mismatch");
  const int N = g.cells;
  const Eigen::Index m = g.size();
  BoxSums mean_sums(g, f.values);
  BoxSums abs_sums(g, f.values.abs());
  ScalarField out(g);
#pragma omp parallel for schedule(dynamic, 64)
  for (Eigen::Index i = 0; i < m; ++i) {
    auto idx = g.unflatten(i);
    double best = 0;
    for (int j = family.j_min; j <= family.j_max; ++j) {
      IndexWindow w;
      w.dims = g.n;
      AxisWindow aw[3];
      for (int d = 0; d < g.n; ++d) {
        aw[d] = centered_axis_window(idx[d], j, N);
        w.lo[d] = aw[d].lo;
        w.hi[d] = aw[d].hi;
      }
      double K = static_cast<double>(w.count());
      double c = mean_sums.window_sum(w) / K;
      double bound = abs_sums.window_sum(w) / K + std::abs(c);
      if (bound <= best) continue;
      double s = 0;
      for_window_cells(g, aw, [&](Eigen::Index cell) { s += std::abs(f.values[cell] - c); });
      best = std::max(best, s / K);
    }
    out.values[i] = best;
  }
  return out;
}

std::vector<double> half_octave_radii(double t0, double t_max) {
  require(t0 > 0 && t_max > t0, "half_octave_radii: need 0 < t0 < t_max");
  std::vector<double> t;
  for (double v = t0; v <= t_max * (1 + 1e-12); v *= std::sqrt(2.0)) t.push_back(v);
  return t;
}

ScalarField rough_maximal(const ScalarField& f, const SphereFunction& omega,
                          const std::vector<double>& t_grid) {
  const GridSpec& g = f.grid;
  require(omega.dim() == g.n, "rough_maximal: sphere dimension mismatch");
  require(!t_grid.empty(), "rough_maximal: empty t grid");
  const Eigen::Index m = g.size();
  const auto& quad = omega.quad;
  const int ns = static_cast<int>(quad.nodes.size());
  const size_t nt = t_grid.size();
  ScalarField out(g);

  // radial sub-nodes per shell (between consecutive t values), 4 per shell
  struct Node {
    double r, w;  // weight already carries r^{n-1} dr
  };
  std::vector<std::vector<Node>> shells(nt);
  {
    // innermost disk [0, t_0): linear midpoints
    const int kin = 4;
    auto& s0 = shells[0];
    for (int k = 0; k < kin; ++k) {
      double r = t_grid[0] * (k + 0.5) / kin;
      s0.push_back({r, std::pow(r, g.n - 1) * t_grid[0] / kin});
    }
    for (size_t j = 1; j < nt; ++j) {
      double a = t_grid[j - 1], b = t_grid[j];
      int kr = 4;
      double dl = std::log(b / a) / kr;
      for (int k = 0; k < kr; ++k) {
        double r = a * std::exp((k + 0.5) * dl);
        shells[j].push_back({r, std::pow(r, g.n - 1) * r * dl});
      }
    }
  }
  const double support = f.support_radius.value_or(std::sqrt(double(g.n)) * g.half_width);

#pragma omp parallel for schedule(dynamic, 64)
  for (Eigen::Index i = 0; i < m; ++i) {
    Vec x = g.point(i);
    double reach = x.head(g.n).norm() + support + g.spacing();
    double acc = 0, best = 0;
    for (size_t j = 0; j < nt; ++j) {
      if (t_grid[j] > reach && j > 0) {
        // f vanishes on the remaining shells; t^-n only shrinks the value
        break;
      }
      for (const Node& nd : shells[j]) {
        double ring = 0;
        for (int s = 0; s < ns; ++s) {
          Vec y = x - nd.r * quad.nodes[s];
          double fv = interpolate(f, y);
          if (fv != 0) ring += quad.weights[s] * std::abs(omega.values[s] * fv);
        }
        acc += ring * nd.w;
      }
      best = std::max(best, acc / std::pow(t_grid[j], g.n));
    }
    out.values[i] = best;
  }
  return out;
}

ScalarField sphere_maximal(const ScalarField& f, const SphereQuadrature& quad,
                           const std::vector<double>& t_grid) {
  const GridSpec& g = f.grid;
  require(quad.n == g.n, "sphere_maximal: sphere dimension mismatch");
  require(!t_grid.empty(), "sphere_maximal: empty t grid");
  for (double t : t_grid)
    require(t > 0 && t < 2 * g.half_width, "sphere_maximal: t grid must lie in (0, 2R)");
  const Eigen::Index m = g.size();
  const int ns = static_cast<int>(quad.nodes.size());
  ScalarField out(g);
#pragma omp parallel for schedule(static)
  for (Eigen::Index i = 0; i < m; ++i) {
    Vec x = g.point(i);
    double best = 0;
    for (double t : t_grid) {
      double s = 0;
      for (int k = 0; k < ns; ++k) s += quad.weights[k] * interpolate(f, x - t * quad.nodes[k]);
      best = std::max(best, std::abs(s));
    }
    out.values[i] = best;
  }
  return out;
}

ScalarField measure_maximal(const ScalarField& f, const DiscreteMeasure& mu,
                            const std::vector<double>& t_grid) {
  const GridSpec& g = f.grid;
  require(!mu.points.empty(), "measure_maximal: empty measure");
  require(!t_grid.empty(), "measure_maximal: empty t grid");
  const Eigen::Index m = g.size();
  const int na = static_cast<int>(mu.points.size());
  ScalarField out(g);
#pragma omp parallel for schedule(static)
  for (Eigen::Index i = 0; i < m; ++i) {
    Vec x = g.point(i);
    double best = 0;
    for (double t : t_grid) {
      double s = 0;
      for (int k = 0; k < na; ++k)
        s += mu.masses[k] * std::abs(interpolate(f, x + t * mu.points[k]));
      best = std::max(best, s);
    }
    out.values[i] = best;
  }
  return out;
}

double measure_growth_constant(const DiscreteMeasure& mu, int n, int center_samples,
                               int radius_samples) {
  require(!mu.points.empty(), "measure_growth_constant: empty measure");
  std::vector<Vec> centers = mu.points;
  centers.push_back(Vec::Zero());
  // thin the center list deterministically if oversized
  while (static_cast<int>(centers.size()) > center_samples) {
    std::vector<Vec> thin;
    for (size_t i = 0; i < centers.size(); i += 2) thin.push_back(centers[i]);
    centers.swap(thin);
  }
  double best = 0;
  for (const Vec& c : centers) {
    for (int k = 0; k < radius_samples; ++k) {
      double r = 4.0 * std::pow(2.0, -0.5 * k);  // log-spaced radii down from 4
      double mass = 0;
      for (size_t i = 0; i < mu.points.size(); ++i)
        if ((mu.points[i] - c).head(n).norm() <= r) mass += mu.masses[i];
      if (mass > 0) best = std::max(best, mass / std::pow(r, n - 1));
    }
  }
  return best;
}

}  // namespace rough

#include "rough/weights.hpp"

#include <cmath>

#include "rough/maximal.hpp"
#include "rough/potential.hpp"

namespace rough {

ScalarField make_power_weight(const GridSpec& g, double a) {
  ScalarField w(g);
  const Eigen::Index m = g.size();
  for (Eigen::Index i = 0; i < m; ++i)
    w.values[i] = std::pow(g.point(i).head(g.n).norm(), -a);
  return w;
}

static void check_weight(const ScalarField& w) {
  require((w.values > 0).all() && w.values.allFinite(),
          "weight constants: weight must be positive and finite");
}

WeightConstantReport a1_constant(const ScalarField& w, const CubeFamily& family) {
  check_weight(w);
  ScalarField mw = cube_maximal(w, MaximalGauge::mean(), family);
  Array ratio = mw.values / w.values;
  Eigen::Index arg = 0;
  double value = ratio.maxCoeff(&arg);
  WeightConstantReport rep;
  rep.value = value;
  rep.argmax_point = w.grid.point(arg);
  rep.scale_min = family.j_min;
  rep.scale_max = family.j_max;
  rep.cube_count = static_cast<long>(family.cubes.size());
  // witness: the winning centered cube at the argmax point
  const GridSpec& g = w.grid;
  BoxSums sums(g, w.values);
  auto idx = g.unflatten(arg);
  double best = -1;
  for (int j = family.j_min; j <= family.j_max; ++j) {
    IndexWindow win;
    win.dims = g.n;
    int half = j == 0 ? 0 : 1 << (j - 1);
    for (int d = 0; d < g.n; ++d) {
      win.lo[d] = std::max(0, idx[d] - half);
      win.hi[d] = std::min(g.cells, j == 0 ? idx[d] + 1 : idx[d] + half);
    }
    double mean = sums.window_sum(win) / static_cast<double>(win.count());
    if (mean > best) {
      best = mean;
      rep.witness.center = rep.argmax_point;
      rep.witness.side = g.spacing() * std::ldexp(1.0, j);
    }
  }
  return rep;
}

namespace {

template <typename PerCube>
WeightConstantReport sup_over_family(const CubeFamily& family, PerCube&& value_of) {
  WeightConstantReport rep;
  rep.scale_min = family.j_min;
  rep.scale_max = family.j_max;
  rep.cube_count = static_cast<long>(family.cubes.size());
  rep.value = 0;
  const long nc = static_cast<long>(family.cubes.size());
  std::vector<double> vals(nc);
#pragma omp parallel for schedule(dynamic, 16)
  for (long i = 0; i < nc; ++i) vals[i] = value_of(family.cubes[i]);
  for (long i = 0; i < nc; ++i)
    if (vals[i] > rep.value) {
      rep.value = vals[i];
      rep.witness = family.cubes[i];
    }
  return rep;
}

}  // namespace

WeightConstantReport ap_constant(const ScalarField& w, double p, const CubeFamily& family) {
  check_weight(w);
  require(p > 1 && !std::isinf(p), "ap_constant: requires 1 < p < inf");
  const double pc = p / (p - 1.0);
  BoxSums sw(w.grid, w.values);
  BoxSums sdual(w.grid, w.values.pow(1.0 - pc));
  return sup_over_family(family, [&](const Cube& q) {
    IndexWindow win = cube_window(w.grid, q);
    double k = static_cast<double>(win.count());
    if (k == 0) return 0.0;
    return (sw.window_sum(win) / k) * std::pow(sdual.window_sum(win) / k, p - 1.0);
  });
}

WeightConstantReport apq_constant(const ScalarField& w, double p, double q,
                                  const CubeFamily& family) {
  check_weight(w);
  require(p > 1 && q >= p, "apq_constant: requires 1 < p <= q");
  const double pc = p / (p - 1.0);
  BoxSums sq(w.grid, w.values.pow(q));
  BoxSums sdual(w.grid, w.values.pow(-pc));
  return sup_over_family(family, [&](const Cube& c) {
    IndexWindow win = cube_window(w.grid, c);
    double k = static_cast<double>(win.count());
    if (k == 0) return 0.0;
    return (sq.window_sum(win) / k) * std::pow(sdual.window_sum(win) / k, q / pc);
  });
}

WeightConstantReport ainf_constant(const ScalarField& w, const CubeFamily& family) {
  check_weight(w);
  const GridSpec& g = w.grid;
  BoxSums sums(g, w.values);
  const int N = g.cells;
  return sup_over_family(family, [&](const Cube& q) {
    IndexWindow win = cube_window(g, q);
    if (win.count() == 0) return 0.0;
    double wq = sums.window_sum(win);
    if (wq <= 0) return 0.0;
    // Int_Q M(1_Q w): inner maximal over centered windows clipped to Q
    double integral = 0;
    const int n = g.n;
    for (int i2 = (n >= 3 ? win.lo[2] : 0); i2 < (n >= 3 ? win.hi[2] : 1); ++i2)
      for (int i1 = (n >= 2 ? win.lo[1] : 0); i1 < (n >= 2 ? win.hi[1] : 1); ++i1)
        for (int i0 = win.lo[0]; i0 < win.hi[0]; ++i0) {
          int idx[3] = {i0, i1, i2};
          double best = 0;
          for (int j = family.j_min; j <= family.j_max; ++j) {
            IndexWindow sub;
            sub.dims = n;
            int half = j == 0 ? 0 : 1 << (j - 1);
            bool nonempty = true;
            for (int d = 0; d < n; ++d) {
              sub.lo[d] = std::max(win.lo[d], idx[d] - half);
              sub.hi[d] = std::min(win.hi[d], j == 0 ? idx[d] + 1 : idx[d] + half);
              if (sub.hi[d] <= sub.lo[d]) nonempty = false;
            }
            if (!nonempty) continue;
            best = std::max(best, sums.window_sum(sub) / static_cast<double>(sub.count()));
          }
          integral += best;
        }
    return integral / wq;  // cell volume cancels between the two sums
  });
}

WeightConstantReport a1n_constant(const ScalarField& w, const CubeFamily& family) {
  check_weight(w);
  double nc = w.grid.n / static_cast<double>(w.grid.n - 1);
  ScalarField wn = pow_field(w, nc);
  return a1_constant(wn, family);
}

bool refinement_trend_divergent(const std::vector<double>& series) {
  if (series.size() < 2) return false;
  for (size_t i = 1; i < series.size(); ++i)
    if (series[i] <= series[i - 1]) return false;
  return series.back() >= 1.2 * series.front();
}

std::pair<YoungFunction, YoungFunction> log_bump_pair(double p, double q, double delta) {
  require(p > 1 && q > 1 && delta > 0, "log_bump_pair: need p, q > 1 and delta > 0");
  double qc = q / (q - 1.0), pc = p / (p - 1.0);
  return {YoungFunction::power_log(q, q / qc + delta),
          YoungFunction::power_log(pc, pc / p + delta)};
}

std::pair<YoungFunction, YoungFunction> diagonal_log_pair(double p, double delta) {
  require(p > 1 && delta > 0, "diagonal_log_pair: need p > 1 and delta > 0");
  double pc = p / (p - 1.0);
  return {YoungFunction::power_log(p, 2 * p - 1 + delta),
          YoungFunction::power_log(pc, 2 * pc - 1 + delta)};
}

static const char* verdict_name(BpVerdict v) {
  switch (v) {
    case BpVerdict::Member: return "member";
    case BpVerdict::NonMember: return "nonmember";
    default: return "inconclusive";
  }
}

BumpCheckReport bump_check(const ScalarField& u, const ScalarField& v, double p, double q,
                           double alpha, const YoungFunction& phi_in, const YoungFunction& psi_in,
                           BumpMode mode, const CubeFamily& family, double delta) {
  check_weight(u);
  check_weight(v);
  require(p > 1 && q >= p, "bump_check: requires 1 < p <= q");
  if (mode == BumpMode::Separated) require(q > p, "bump_check: separated mode needs p < q");
  if (mode == BumpMode::DiagonalLog) require(q == p, "bump_check: diagonal mode needs p = q");
  const GridSpec& g = u.grid;
  require(v.grid.same_layout(g), "bump_check: weight grids differ");
  require(alpha >= 0 && alpha < g.n, "bump_check: alpha must lie in [0, n)");

  YoungFunction phi = phi_in, psi = psi_in;
  if (mode == BumpMode::LogBump) std::tie(phi, psi) = log_bump_pair(p, q, delta);
  if (mode == BumpMode::DiagonalLog) std::tie(phi, psi) = diagonal_log_pair(p, delta);

  const double pc = p / (p - 1.0), qc = q / (q - 1.0);
  BumpCheckReport rep;
  rep.phi_used = phi;
  rep.psi_used = psi;
  // B-class prerequisites per mode; inconclusive verdicts refuse the run
  if (mode == BumpMode::Separated) {
    rep.phi_class = bp_classify(associate(phi), qc, pc);
    rep.psi_class = bp_classify(associate(psi), p, q);
  } else {
    rep.phi_class = bp_classify(associate(phi), qc);
    rep.psi_class = bp_classify(associate(psi), p);
  }
  for (const BpReport* r : {&rep.phi_class, &rep.psi_class})
    require(r->verdict != BpVerdict::Inconclusive,
            std::string("bump_check: B-class verdict is inconclusive for an associate "
                        "Young function; refusing to evaluate (slope ") +
                std::to_string(r->slope) + ")");
  require(rep.phi_class.verdict == BpVerdict::Member,
          std::string("bump_check: associate of Phi fails its B-class (") +
              verdict_name(rep.phi_class.verdict) + ")");
  require(rep.psi_class.verdict == BpVerdict::Member,
          std::string("bump_check: associate of Psi fails its B-class (") +
              verdict_name(rep.psi_class.verdict) + ")");

  ScalarField uq = pow_field(u, 1.0 / q);
  ScalarField vmp = pow_field(v, -1.0 / p);
  ScalarField vdual = pow_field(v, 1.0 - pc);
  BoxSums su(g, u.values);
  BoxSums svdual(g, vdual.values);
  const double hn = g.cell_volume();
  const double scale_expo = alpha / g.n + 1.0 / q - 1.0 / p;
  const bool separated = mode == BumpMode::Separated || mode == BumpMode::DiagonalLog;

  const long nc = static_cast<long>(family.cubes.size());
  std::vector<double> first(nc, 0.0), second(nc, 0.0);
#pragma omp parallel for schedule(dynamic, 8)
  for (long i = 0; i < nc; ++i) {
    const Cube& cq = family.cubes[i];
    IndexWindow win = cube_window(g, cq);
    double k = static_cast<double>(win.count());
    if (k == 0) continue;
    double scale = std::pow(k * hn, scale_expo);
    if (separated) {
      first[i] = scale * orlicz_avg(uq, cq, phi) *
                 std::pow(svdual.window_sum(win) / k, 1.0 / pc);
      second[i] = scale * std::pow(su.window_sum(win) / k, 1.0 / q) * orlicz_avg(vmp, cq, psi);
    } else {
      first[i] = scale * orlicz_avg(uq, cq, phi) * orlicz_avg(vmp, cq, psi);
    }
  }
  rep.cube_count = nc;
  for (long i = 0; i < nc; ++i) {
    if (first[i] > rep.value_first) {
      rep.value_first = first[i];
      rep.witness = family.cubes[i];
    }
    rep.value_second = std::max(rep.value_second, second[i]);
  }
  rep.value = std::max(rep.value_first, rep.value_second);
  return rep;
}

CubeFamily sparse_dyadic_family(const GridSpec& g, int j_min, int j_max, int per_scale_cap) {
  require(per_scale_cap >= 1, "sparse_dyadic_family: cap must be positive");
  CubeFamily base = CubeFamily::dyadic(g, j_min, j_max);
  std::vector<std::vector<Cube>> by_scale(j_max + 1);
  const double h = g.spacing();
  for (const Cube& q : base.cubes) {
    int j = static_cast<int>(std::lround(std::log2(q.side / h)));
    if (j >= j_min && j <= j_max) by_scale[j].push_back(q);
  }
  std::vector<Cube> picked;
  for (int j = j_min; j <= j_max; ++j) {
    auto& list = by_scale[j];
    size_t stride = std::max<size_t>(1, list.size() / per_scale_cap);
    for (size_t i = 0; i < list.size(); i += stride) picked.push_back(list[i]);
  }
  CubeFamily fam = CubeFamily::from_cubes(g, std::move(picked));
  fam.j_min = j_min;
  fam.j_max = j_max;
  return fam;
}

TestingCheckReport testing_check(const ScalarField& u, const ScalarField& v, double p,
                                 double q, const CubeFamily& family) {
  check_weight(u);
  check_weight(v);
  require(p > 1 && q >= p && !std::isinf(q), "testing_check: requires 1 < p <= q < inf");
  const GridSpec& g = u.grid;
  require(v.grid.same_layout(g), "testing_check: weight grids differ");
  const double pc = p / (p - 1.0), qc = q / (q - 1.0);
  ScalarField sigma = pow_field(v, 1.0 - pc);
  const double hn = g.cell_volume();
  const int N = g.cells;

  // kernel table for I_1 restricted to in-grid offsets
  const double h = g.spacing();
  std::vector<double> ktab;
  {
    int ext = 2 * N + 1;
    size_t total = 1;
    for (int d = 0; d < g.n; ++d) total *= ext;
    ktab.resize(total);
    double singular = singular_cell_average(g.n, 1.0, h);
    const int e1 = g.n >= 2 ? ext : 1, e2 = g.n >= 3 ? ext : 1;
    for (int i2 = 0; i2 < e2; ++i2)
      for (int i1 = 0; i1 < e1; ++i1)
        for (int i0 = 0; i0 < ext; ++i0) {
          double z0 = (i0 - N) * h, z1 = g.n >= 2 ? (i1 - N) * h : 0,
                 z2 = g.n >= 3 ? (i2 - N) * h : 0;
          double rr = std::sqrt(z0 * z0 + z1 * z1 + z2 * z2);
          ktab[static_cast<size_t>(i0) + static_cast<size_t>(ext) * (g.n >= 2 ? i1 : 0) +
               static_cast<size_t>(ext) * e1 * (g.n >= 3 ? i2 : 0)] =
              rr == 0 ? singular : 1.0 / std::pow(rr, g.n - 1.0);
        }
  }
  auto kval = [&](int d0, int d1, int d2) {
    int ext = 2 * N + 1;
    size_t idx = static_cast<size_t>(d0 + N);
    if (g.n >= 2) idx += static_cast<size_t>(ext) * (d1 + N);
    if (g.n >= 3) idx += static_cast<size_t>(ext) * ext * (d2 + N);
    return ktab[idx];
  };

  TestingCheckReport rep;
  rep.cube_count = static_cast<long>(family.cubes.size());
  const long nc = rep.cube_count;
  std::vector<double> r1(nc, 0.0), r2(nc, 0.0);
  std::vector<char> skipped(nc, 0);

#pragma omp parallel for schedule(dynamic, 1)
  for (long ci = 0; ci < nc; ++ci) {
    const Cube& cq = family.cubes[ci];
    IndexWindow win = cube_window(g, cq);
    if (win.count() == 0) {
      skipped[ci] = 1;
      continue;
    }
    // collect cube cells once
    std::vector<Eigen::Index> cells;
    std::vector<std::array<int, 3>> multis;
    cells.reserve(static_cast<size_t>(win.count()));
    const int n = g.n;
    for (int i2 = (n >= 3 ? win.lo[2] : 0); i2 < (n >= 3 ? win.hi[2] : 1); ++i2)
      for (int i1 = (n >= 2 ? win.lo[1] : 0); i1 < (n >= 2 ? win.hi[1] : 1); ++i1)
        for (int i0 = win.lo[0]; i0 < win.hi[0]; ++i0) {
          std::array<int, 3> mi{i0, i1, i2};
          cells.push_back(g.flatten(mi));
          multis.push_back(mi);
        }
    double sig_sum = 0, u_sum = 0;
    for (Eigen::Index c : cells) {
      sig_sum += sigma.values[c];
      u_sum += u.values[c];
    }
    sig_sum *= hn;
    u_sum *= hn;
    if (sig_sum <= 0 || u_sum <= 0) {
      skipped[ci] = 1;
      continue;
    }
    double lhs1 = 0, lhs2 = 0;
    for (size_t a = 0; a < cells.size(); ++a) {
      double pot_sigma = 0, pot_u = 0;
      for (size_t b = 0; b < cells.size(); ++b) {
        double kv = kval(multis[a][0] - multis[b][0], multis[a][1] - multis[b][1],
                         multis[a][2] - multis[b][2]);
        pot_sigma += sigma.values[cells[b]] * kv;
        pot_u += u.values[cells[b]] * kv;
      }
      pot_sigma *= hn;
      pot_u *= hn;
      lhs1 += std::pow(pot_sigma, q) * u.values[cells[a]];
      lhs2 += std::pow(pot_u, pc) * sigma.values[cells[a]];
    }
    lhs1 = std::pow(lhs1 * hn, 1.0 / q);
    lhs2 = std::pow(lhs2 * hn, 1.0 / pc);
    r1[ci] = lhs1 / std::pow(sig_sum, 1.0 / p);
    r2[ci] = lhs2 / std::pow(u_sum, 1.0 / qc);
  }
  for (long ci = 0; ci < nc; ++ci) {
    rep.skipped += skipped[ci];
    if (r1[ci] > rep.ratio_first) {
      rep.ratio_first = r1[ci];
      rep.witness_first = family.cubes[ci];
    }
    if (r2[ci] > rep.ratio_second) {
      rep.ratio_second = r2[ci];
      rep.witness_second = family.cubes[ci];
    }
  }
  return rep;
}

}  // namespace rough

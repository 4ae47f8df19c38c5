#include "rough/singular.hpp"

#include <algorithm>
#include <cmath>

namespace rough {

SphereFunction::SphereFunction(SphereQuadrature q, Array v)
    : quad(std::move(q)), values(std::move(v)) {
  require(values.size() == static_cast<Eigen::Index>(quad.nodes.size()),
          "SphereFunction: value count does not match quadrature");
  require(values.allFinite(), "SphereFunction: values must be finite");
  double total_abs = (quad.weights * values.abs()).sum();
  mean_zero = std::abs((quad.weights * values).sum()) <= 1e-10 * std::max(total_abs, 1e-300);
}

double SphereFunction::mean() const { return (quad.weights * values).sum() / quad.total(); }

double sphere_lr_norm(const SphereFunction& omega, double r) {
  require(r > 0, "sphere_lr_norm: r must be positive");
  if (std::isinf(r)) return omega.values.abs().maxCoeff();
  return std::pow((omega.quad.weights * omega.values.abs().pow(r)).sum(), 1.0 / r);
}

double sphere_weak_norm(const SphereFunction& omega) {
  const int n = omega.dim();
  const Eigen::Index m = omega.values.size();
  std::vector<std::pair<double, double>> nodes(m);  // (|value|, weight)
  for (Eigen::Index i = 0; i < m; ++i)
    nodes[i] = {std::abs(omega.values[i]), omega.quad.weights[i]};
  std::sort(nodes.begin(), nodes.end(), [](auto& a, auto& b) { return a.first > b.first; });
  double cum = 0, best = 0;
  for (auto& [v, w] : nodes) {
    cum += w;
    if (v > 0) best = std::max(best, v * std::pow(cum, 1.0 / n));
  }
  return best;
}

SphereFunction project_mean_zero(const SphereFunction& omega) {
  SphereFunction out = omega;
  out.values = omega.values - omega.mean();
  out.mean_zero = true;
  return out;
}

std::pair<double, double> ball_weak_norm_identity(const SphereFunction& omega, int k) {
  const int n = omega.dim();
  const double radius = std::ldexp(1.0, k);
  const auto& quad = omega.quad;
  const int M = static_cast<int>(quad.nodes.size());

  // independent offset angular grid for the homogeneous extension
  std::vector<double> ext;
  if (n == 2) {
    const int Mp = 4 * M + 3;
    ext.reserve(Mp);
    for (int l = 0; l < Mp; ++l) {
      double phi = 2.0 * M_PI * (l + 0.37) / Mp;
      // linear interpolation on the equi-angular node circle
      double u = phi / (2.0 * M_PI / M) - 0.5;
      double fl = std::floor(u);
      int i0 = ((static_cast<int>(fl) % M) + M) % M;
      int i1 = (i0 + 1) % M;
      double w = u - fl;
      ext.push_back((1 - w) * omega.values[i0] + w * omega.values[i1]);
    }
  } else {
    // nearest-node resampling on a denser deterministic set
    const int Mp = 4 * M + 3;
    ext.reserve(Mp);
    for (int l = 0; l < Mp; ++l) {
      double z = -1.0 + 2.0 * (l + 0.5) / Mp;
      double phi = 2.0 * M_PI * std::fmod(0.618 * l + 0.37, 1.0);
      double s = std::sqrt(std::max(0.0, 1.0 - z * z));
      Vec y(s * std::cos(phi), s * std::sin(phi), z);
      int bestn = 0;
      double bestd = 1e300;
      for (int i = 0; i < M; ++i) {
        double d = (quad.nodes[i] - y).squaredNorm();
        if (d < bestd) {
          bestd = d;
          bestn = i;
        }
      }
      ext.push_back(omega.values[bestn]);
    }
  }

  // literal polar measure on B(0, 2^k): radial midpoints x uniform angles
  const int Kr = 64;
  double radial = 0;
  for (int i = 0; i < Kr; ++i) {
    double r = radius * (i + 0.5) / Kr;
    radial += std::pow(r, n - 1) * (radius / Kr);
  }
  const double dtheta = sphere_measure(n) / static_cast<double>(ext.size());
  std::vector<double> vals(ext.size());
  for (size_t i = 0; i < ext.size(); ++i) vals[i] = std::abs(ext[i]);
  std::sort(vals.begin(), vals.end(), std::greater<>());
  const double ball = radial * dtheta * static_cast<double>(ext.size());
  double lhs = 0, cum = 0;
  for (double v : vals) {
    cum += radial * dtheta;  // measure contribution of one angular sector
    if (v > 0) lhs = std::max(lhs, v * std::pow(cum / ball, 1.0 / n));
  }
  double rhs = std::pow(sphere_measure(n), -1.0 / n) * sphere_weak_norm(omega);
  return {lhs, rhs};
}

namespace {

struct RadialNode {
  double r, w;  // w = d(log r) weight
};

// Log-spaced radial nodes, 8 per octave, anchored at the global floor t0 so
// node placement is independent of the truncation: raising t past a region
// where f vanishes leaves the quadrature values untouched, and annulus sums
// reassemble truncations exactly.
std::vector<RadialNode> radial_nodes(double t, double r_max, double anchor) {
  std::vector<RadialNode> nodes;
  if (r_max <= t) return nodes;
  const double dl = std::log(2.0) / 8.0;
  long k0 = static_cast<long>(std::ceil(std::log(t / anchor) / dl - 1e-9));
  long k1 = static_cast<long>(std::ceil(std::log(r_max / anchor) / dl));
  nodes.reserve(k1 - k0);
  for (long k = k0; k < k1; ++k) {
    double lo = std::log(anchor) + k * dl;
    nodes.push_back({std::exp(lo + 0.5 * dl), dl});
  }
  return nodes;
}

// shared complex polar engine; scalar paths pass null imaginary parts
struct ComplexOmega {
  const SphereFunction* re = nullptr;
  const SphereFunction* im = nullptr;
};

inline void ring_sum(const ScalarField& fre, const ScalarField* fim, const ComplexOmega& om,
                     const Vec& x, double r, double& out_re, double& out_im) {
  const auto& quad = om.re->quad;
  const int ns = static_cast<int>(quad.nodes.size());
  double sre = 0, sim = 0;
  for (int s = 0; s < ns; ++s) {
    Vec y = x - r * quad.nodes[s];
    double vre = interpolate(fre, y);
    double vim = fim ? interpolate(*fim, y) : 0.0;
    if (vre == 0 && vim == 0) continue;
    double wre = quad.weights[s] * om.re->values[s];
    double wim = om.im ? quad.weights[s] * om.im->values[s] : 0.0;
    sre += wre * vre - wim * vim;
    sim += wre * vim + wim * vre;
  }
  out_re = sre;
  out_im = sim;
}

double field_reach(const ScalarField& f, const Vec& x) {
  const GridSpec& g = f.grid;
  double support = f.support_radius.value_or(std::sqrt(double(g.n)) * g.half_width);
  return x.head(g.n).norm() + support + g.spacing();
}

}  // namespace

ScalarField truncated_rough(const ScalarField& f, const SphereFunction& omega, double t) {
  const GridSpec& g = f.grid;
  require(omega.dim() == g.n, "truncated_rough: sphere dimension mismatch");
  require(t >= 0.5 * g.spacing() * (1 - 1e-12),
          "truncated_rough: truncation below the grid floor t = h/2");
  const Eigen::Index m = g.size();
  ScalarField out(g);
  ComplexOmega om{&omega, nullptr};
#pragma omp parallel for schedule(dynamic, 64)
  for (Eigen::Index i = 0; i < m; ++i) {
    Vec x = g.point(i);
    auto nodes = radial_nodes(t, field_reach(f, x), 0.5 * g.spacing());
    double acc = 0;
    for (const RadialNode& nd : nodes) {
      double re, imu;
      ring_sum(f, nullptr, om, x, nd.r, re, imu);
      acc += re * nd.w;
    }
    out.values[i] = acc;
  }
  return out;
}

std::vector<double> rough_annuli_at(const ScalarField& f, const SphereFunction& omega,
                                    const Vec& x, double t) {
  const GridSpec& g = f.grid;
  double reach = field_reach(f, x);
  std::vector<double> shells;
  ComplexOmega om{&omega, nullptr};
  const double anchor = 0.5 * g.spacing();
  double lo = t;
  while (lo < reach) {
    double hi = std::min(lo * std::sqrt(2.0), reach);
    double acc = 0;
    for (const RadialNode& nd : radial_nodes(lo, hi, anchor)) {
      double re, imu;
      ring_sum(f, nullptr, om, x, nd.r, re, imu);
      acc += re * nd.w;
    }
    shells.push_back(acc);
    lo = lo * std::sqrt(2.0);
  }
  (void)g;
  return shells;
}

ScalarField maximal_rough(const ScalarField& f, const SphereFunction& omega) {
  const GridSpec& g = f.grid;
  require(omega.dim() == g.n, "maximal_rough: sphere dimension mismatch");
  const Eigen::Index m = g.size();
  const double t0 = 0.5 * g.spacing();
  ScalarField out(g);
  ComplexOmega om{&omega, nullptr};
#pragma omp parallel for schedule(dynamic, 64)
  for (Eigen::Index i = 0; i < m; ++i) {
    Vec x = g.point(i);
    double reach = field_reach(f, x);
    // shell integrals on [t_j, t_{j+1}); suffix sums give every truncation
    std::vector<double> shells;
    double lo = t0;
    while (lo < reach) {
      double hi = std::min(lo * std::sqrt(2.0), reach);
      double acc = 0;
      for (const RadialNode& nd : radial_nodes(lo, hi, t0)) {
        double re, imu;
        ring_sum(f, nullptr, om, x, nd.r, re, imu);
        acc += re * nd.w;
      }
      shells.push_back(acc);
      lo *= std::sqrt(2.0);
    }
    double suffix = 0, best = 0;
    for (size_t j = shells.size(); j-- > 0;) {
      suffix += shells[j];
      best = std::max(best, std::abs(suffix));
    }
    out.values[i] = best;
  }
  return out;
}

ScalarField riesz_transform(const ScalarField& f, int j, RieszMode mode) {
  const GridSpec& g = f.grid;
  require(g.n >= 2, "riesz_transform: needs n >= 2");
  require(j >= 0 && j < g.n, "riesz_transform: bad component");
  SphereQuadrature quad = sphere_quadrature(g.n, g.n == 2 ? 64 : 512);
  Array vals(quad.nodes.size());
  for (size_t s = 0; s < quad.nodes.size(); ++s) vals[s] = quad.nodes[s][j];
  SphereFunction omega(quad, vals);
  if (mode == RieszMode::PrincipalValue) return truncated_rough(f, omega, 0.5 * g.spacing());

  // maximal truncations: reuse the suffix machinery with |.|
  ScalarField out = maximal_rough(f, omega);
  return out;
}

ComplexField beurling(const ComplexField& f, BeurlingMode mode) {
  const GridSpec& g = f.re.grid;
  require(g.n == 2, "beurling: defined for n = 2 only");
  const Eigen::Index m = g.size();

  if (mode == BeurlingMode::Cauchy) {
    // convolution with (1/pi) (z - zeta)^{-1}; odd kernel, zero singular cell
    ComplexField out(g);
    const int N = g.cells;
    const double h = g.spacing(), h2 = g.cell_volume();
    const int ext = 2 * N + 1;
    std::vector<double> kre(static_cast<size_t>(ext) * ext), kim(kre.size());
    for (int dy = -N; dy <= N; ++dy)
      for (int dx = -N; dx <= N; ++dx) {
        double zx = dx * h, zy = dy * h;
        double rr = zx * zx + zy * zy;
        size_t idx = static_cast<size_t>(dx + N) + static_cast<size_t>(ext) * (dy + N);
        if (rr == 0) {
          kre[idx] = kim[idx] = 0;
        } else {
          kre[idx] = zx / (M_PI * rr);
          kim[idx] = -zy / (M_PI * rr);
        }
      }
#pragma omp parallel for schedule(static)
    for (Eigen::Index i = 0; i < m; ++i) {
      auto ei = g.unflatten(i);
      double are = 0, aim = 0;
      for (int j1 = 0; j1 < N; ++j1) {
        int dy = ei[1] - j1;
        for (int j0 = 0; j0 < N; ++j0) {
          Eigen::Index src = j0 + static_cast<Eigen::Index>(N) * j1;
          double vre = f.re.values[src], vim = f.im.values[src];
          if (vre == 0 && vim == 0) continue;
          size_t idx = static_cast<size_t>(ei[0] - j0 + N) + static_cast<size_t>(ext) * (dy + N);
          are += kre[idx] * vre - kim[idx] * vim;
          aim += kre[idx] * vim + kim[idx] * vre;
        }
      }
      out.re.values[i] = are * h2;
      out.im.values[i] = aim * h2;
    }
    return out;
  }

  // S / SMax via the rough engine with Omega(theta) = -(1/pi) e^{-2 i theta}
  SphereQuadrature quad = sphere_quadrature(2, 64);
  Array ore(quad.nodes.size()), oim(quad.nodes.size());
  for (size_t s = 0; s < quad.nodes.size(); ++s) {
    double c = quad.nodes[s][0], si = quad.nodes[s][1];
    double c2 = c * c - si * si, s2 = 2 * c * si;  // cos/sin of 2 theta
    ore[s] = -c2 / M_PI;
    oim[s] = s2 / M_PI;
  }
  SphereFunction omre(quad, ore), omim(quad, oim);
  ComplexOmega om{&omre, &omim};
  ComplexField out(g);
  const double t0 = 0.5 * g.spacing();
#pragma omp parallel for schedule(dynamic, 64)
  for (Eigen::Index i = 0; i < m; ++i) {
    Vec x = g.point(i);
    double reach = std::max(field_reach(f.re, x), field_reach(f.im, x));
    if (mode == BeurlingMode::S) {
      double are = 0, aim = 0;
      for (const RadialNode& nd : radial_nodes(t0, reach, t0)) {
        double rre, rim;
        ring_sum(f.re, &f.im, om, x, nd.r, rre, rim);
        are += rre * nd.w;
        aim += rim * nd.w;
      }
      out.re.values[i] = are;
      out.im.values[i] = aim;
    } else {
      std::vector<std::pair<double, double>> shells;
      double lo = t0;
      while (lo < reach) {
        double hi = std::min(lo * std::sqrt(2.0), reach);
        double are = 0, aim = 0;
        for (const RadialNode& nd : radial_nodes(lo, hi, t0)) {
          double rre, rim;
          ring_sum(f.re, &f.im, om, x, nd.r, rre, rim);
          are += rre * nd.w;
          aim += rim * nd.w;
        }
        shells.emplace_back(are, aim);
        lo *= std::sqrt(2.0);
      }
      double sre = 0, sim = 0, best = 0;
      for (size_t j = shells.size(); j-- > 0;) {
        sre += shells[j].first;
        sim += shells[j].second;
        best = std::max(best, std::hypot(sre, sim));
      }
      out.re.values[i] = best;  // modulus of the maximal truncation
      out.im.values[i] = 0;
    }
  }
  return out;
}

ComplexField complex_derivative(const ComplexField& f) {
  VectorField du = gradient(f.re), dv = gradient(f.im);
  ComplexField out(f.re.grid);
  out.re.values = 0.5 * (du.comps[0] + dv.comps[1]);
  out.im.values = 0.5 * (dv.comps[0] - du.comps[1]);
  return out;
}

}  // namespace rough

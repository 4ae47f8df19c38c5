#include "rough/field.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace rough {

ScalarField make_field(const GridSpec& g, const std::function<double(const Vec&)>& fn) {
  ScalarField f(g);
  const Eigen::Index m = g.size();
  for (Eigen::Index i = 0; i < m; ++i) f.values[i] = fn(g.point(i));
  return f;
}

static double bump_value(double s2, double amplitude) {
  // s2 = |x-c|^2 / rho^2
  if (s2 >= 1.0) return 0.0;
  return amplitude * std::exp(1.0 - 1.0 / (1.0 - s2));
}

ScalarField make_bump(const GridSpec& g, const Vec& center, double radius, double amplitude) {
  require(radius > 0, "make_bump: radius must be positive");
  for (int d = 0; d < g.n; ++d) {
    double lo = center[d] - radius, hi = center[d] + radius;
    if (lo < -g.half_width || hi > g.half_width) {
      std::ostringstream os;
      os << "make_bump: support ball exceeds the domain box on axis " << d << ": ["
         << lo << ", " << hi << "] vs [" << -g.half_width << ", " << g.half_width << "]";
      fail(os.str());
    }
  }
  ScalarField f(g);
  const Eigen::Index m = g.size();
  const double inv_r2 = 1.0 / (radius * radius);
  for (Eigen::Index i = 0; i < m; ++i) {
    Vec x = g.point(i);
    double s2 = 0;
    for (int d = 0; d < g.n; ++d) {
      double t = x[d] - center[d];
      s2 += t * t;
    }
    f.values[i] = bump_value(s2 * inv_r2, amplitude);
  }
  double c = 0;
  for (int d = 0; d < g.n; ++d) c += center[d] * center[d];
  f.support_radius = std::sqrt(c) + radius;
  return f;
}

Vec bump_gradient(const Vec& x, const Vec& center, double radius, double amplitude, int n) {
  Vec g = Vec::Zero();
  double s2 = 0;
  for (int d = 0; d < n; ++d) {
    double t = x[d] - center[d];
    s2 += t * t;
  }
  s2 /= radius * radius;
  if (s2 >= 1.0) return g;
  double v = amplitude * std::exp(1.0 - 1.0 / (1.0 - s2));
  double u = 1.0 - s2;
  double factor = -v / (u * u) * 2.0 / (radius * radius);
  for (int d = 0; d < n; ++d) g[d] = factor * (x[d] - center[d]);
  return g;
}

VectorField gradient(const ScalarField& f) {
  const GridSpec& g = f.grid;
  VectorField out(g);
  const int N = g.cells;
  const double h = g.spacing();
  const Eigen::Index m = g.size();
  Eigen::Index stride = 1;
  for (int d = 0; d < g.n; ++d) {
    Array& comp = out.comps[d];
    for (Eigen::Index i = 0; i < m; ++i) {
      int id = static_cast<int>((i / stride) % N);
      double hi, lo, denom;
      if (id == 0) {
        hi = f.values[i + stride];
        lo = f.values[i];
        denom = h;
      } else if (id == N - 1) {
        hi = f.values[i];
        lo = f.values[i - stride];
        denom = h;
      } else {
        hi = f.values[i + stride];
        lo = f.values[i - stride];
        denom = 2 * h;
      }
      comp[i] = (hi - lo) / denom;
    }
    stride *= N;
  }
  return out;
}

ScalarField magnitude(const VectorField& v) {
  ScalarField out(v.grid);
  out.values = Array::Zero(v.grid.size());
  for (const Array& c : v.comps) out.values += c.square();
  out.values = out.values.sqrt();
  return out;
}

double lp_norm(const ScalarField& f, double p, const ScalarField* weight) {
  require(p > 0, "lp_norm: p must be positive");
  if (weight) {
    require(weight->grid.same_layout(f.grid), "lp_norm: weight grid mismatch");
    require((weight->values > 0).all(), "lp_norm: weight must be positive");
  }
  if (std::isinf(p)) return f.values.abs().maxCoeff();
  const double hn = f.grid.cell_volume();
  Array a = f.values.abs().pow(p);
  double s = weight ? (a * weight->values).sum() : a.sum();
  return std::pow(s * hn, 1.0 / p);
}

double interpolate(const ScalarField& f, const Vec& x) {
  const GridSpec& g = f.grid;
  const int N = g.cells;
  const double h = g.spacing();
  int base[3] = {0, 0, 0};
  double w1[3] = {0, 0, 0};
  for (int d = 0; d < g.n; ++d) {
    double u = (x[d] + g.half_width) / h - 0.5;
    double fl = std::floor(u);
    base[d] = static_cast<int>(fl);
    w1[d] = u - fl;
  }
  double acc = 0;
  const int corners = 1 << g.n;
  for (int c = 0; c < corners; ++c) {
    double w = 1.0;
    std::array<int, 3> idx{0, 0, 0};
    bool inside = true;
    for (int d = 0; d < g.n; ++d) {
      int bit = (c >> d) & 1;
      int i = base[d] + bit;
      w *= bit ? w1[d] : 1.0 - w1[d];
      if (i < 0 || i >= N) inside = false;
      idx[d] = i;
    }
    if (inside && w != 0.0) acc += w * f.values[g.flatten(idx)];
  }
  return acc;
}

Vec interpolate(const VectorField& v, const Vec& x) {
  Vec out = Vec::Zero();
  ScalarField tmp;
  tmp.grid = v.grid;
  for (int d = 0; d < v.grid.n; ++d) {
    // cheap view: reuse interpolation on each component
    ScalarField comp;
    comp.grid = v.grid;
    comp.values = v.comps[d];
    out[d] = interpolate(comp, x);
  }
  return out;
}

ScalarField abs_field(const ScalarField& f) {
  ScalarField out = f;
  out.values = f.values.abs();
  return out;
}

ScalarField pow_field(const ScalarField& f, double e) {
  ScalarField out = f;
  out.values = f.values.abs().pow(e);
  return out;
}

ScalarField scale_field(const ScalarField& f, double c) {
  ScalarField out = f;
  out.values = f.values * c;
  return out;
}

ScalarField resample(const ScalarField& f, const GridSpec& target) {
  ScalarField out(target);
  const Eigen::Index m = target.size();
  for (Eigen::Index i = 0; i < m; ++i) out.values[i] = interpolate(f, target.point(i));
  out.support_radius = f.support_radius;
  return out;
}

void write_grid_file(std::ostream& os, const ScalarField& f) {
  os << f.grid.n << ' ' << f.grid.cells << ' ' << std::setprecision(17) << f.grid.half_width
     << '\n';
  os << std::setprecision(17);
  for (Eigen::Index i = 0; i < f.values.size(); ++i) os << f.values[i] << '\n';
}

ScalarField read_grid_file(std::istream& is) {
  int n = 0, N = 0;
  double R = 0;
  require(static_cast<bool>(is >> n >> N >> R), "grid file: bad header, expected 'n N R'");
  GridSpec g(n, N, R);
  ScalarField f(g);
  for (Eigen::Index i = 0; i < g.size(); ++i)
    require(static_cast<bool>(is >> f.values[i]), "grid file: truncated value list");
  require(f.values.allFinite(), "grid file: values must be finite");
  return f;
}

void write_grid_file(const std::string& path, const ScalarField& f) {
  std::ofstream os(path);
  require(static_cast<bool>(os), "cannot open " + path + " for writing");
  write_grid_file(os, f);
}

ScalarField read_grid_file(const std::string& path) {
  std::ifstream is(path);
  require(static_cast<bool>(is), "cannot open " + path);
  return read_grid_file(is);
}

}  // namespace rough

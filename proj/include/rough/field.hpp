#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "rough/grid.hpp"

namespace rough {

/// Sampled real function on a GridSpec. Fields are immutable by convention:
/// every operation returns a fresh field.
struct ScalarField {
  GridSpec grid;
  Array values;  // size grid.size(), all finite
  std::optional<double> support_radius;  // |x| > support_radius  =>  value is 0

  ScalarField() = default;
  explicit ScalarField(const GridSpec& g) : grid(g), values(Array::Zero(g.size())) {}
  ScalarField(const GridSpec& g, Array v) : grid(g), values(std::move(v)) {
    require(values.size() == g.size(), "ScalarField: value count does not match grid");
  }
};

/// n component fields sharing one grid; houses gradients.
struct VectorField {
  GridSpec grid;
  std::vector<Array> comps;  // grid.n arrays

  VectorField() = default;
  explicit VectorField(const GridSpec& g) : grid(g), comps(g.n, Array::Zero(g.size())) {}
};

ScalarField make_field(const GridSpec& g, const std::function<double(const Vec&)>& fn);

/// Smooth compactly supported bump
///   f(x) = A exp(1 - 1/(1 - |x-c|^2/rho^2))   for |x-c| < rho, else 0.
/// Rejects bumps whose support ball leaves the domain box.
ScalarField make_bump(const GridSpec& g, const Vec& center, double radius, double amplitude);

/// Analytic gradient of the bump formula (test oracle and suite helper).
Vec bump_gradient(const Vec& x, const Vec& center, double radius, double amplitude, int n);

/// Central differences inside, one-sided at the box boundary.
VectorField gradient(const ScalarField& f);

ScalarField magnitude(const VectorField& v);

/// (sum |f|^p w h^n)^(1/p); w is a measure density (defaults to Lebesgue).
/// p = infinity returns max |f|.
double lp_norm(const ScalarField& f, double p, const ScalarField* weight = nullptr);

/// Multilinear interpolation; zero outside the grid box.
double interpolate(const ScalarField& f, const Vec& x);
Vec interpolate(const VectorField& v, const Vec& x);

ScalarField abs_field(const ScalarField& f);
ScalarField pow_field(const ScalarField& f, double e);  // |f|^e
ScalarField scale_field(const ScalarField& f, double c);

/// Resample f onto another grid (multilinear, zero extension). Used when a
/// sweep evaluates on an enlarged box.
ScalarField resample(const ScalarField& f, const GridSpec& target);

/// Text grid format: header "n N R", then N^n values row-major, one per line.
void write_grid_file(std::ostream& os, const ScalarField& f);
ScalarField read_grid_file(std::istream& is);
void write_grid_file(const std::string& path, const ScalarField& f);
ScalarField read_grid_file(const std::string& path);

}  // namespace rough

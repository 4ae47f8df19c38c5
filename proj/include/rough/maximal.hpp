#pragma once

#include "rough/lorentz.hpp"
#include "rough/sphere_function.hpp"

namespace rough {

struct DiscreteMeasure;  // potential.hpp

/// Gauge applied to |f| on each cube, optionally with the fractional
/// prefactor l(Q)^alpha.
struct MaximalGauge {
  enum class Kind { Mean, Power, Lorentz, Orlicz };
  Kind kind = Kind::Mean;
  double r = 1.0;
  LorentzIndex lorentz_index{};
  YoungFunction young{};
  double alpha = 0.0;

  static MaximalGauge mean(double alpha = 0.0);
  static MaximalGauge power(double r, double alpha = 0.0);
  static MaximalGauge lorentz(const LorentzIndex& idx, double alpha = 0.0);
  static MaximalGauge orlicz(const YoungFunction& phi, double alpha = 0.0);
};

/// Centered-dyadic maximal function: at each grid point the supremum over the
/// family's scales of l(Q)^alpha times the gauge average of |f| on the cube of
/// side l = h 2^j centered at the point (clipped to the grid).
/// This centered surrogate tracks the full supremum up to a dimensional factor
/// that every empirical-constant report absorbs.
ScalarField cube_maximal(const ScalarField& f, const MaximalGauge& gauge,
                         const CubeFamily& family);

/// k-fold composition of the mean maximal; k = 0 returns |f|.
ScalarField iterated_maximal(const ScalarField& f, int k, const CubeFamily& family);

/// sup_Q avg_Q |f - f_Q| over the same centered scales.
ScalarField sharp_maximal(const ScalarField& f, const CubeFamily& family);

/// Half-octave radius grid {t0 * 2^(j/2)} covering (t0, t_max].
std::vector<double> half_octave_radii(double t0, double t_max);

/// M_Omega f(x) = sup_t t^-n Int_{|y|<t} |Omega(y') f(x-y)| dy by polar
/// quadrature with prefix sums over the half-octave shells of t_grid.
ScalarField rough_maximal(const ScalarField& f, const SphereFunction& omega,
                          const std::vector<double>& t_grid);

/// Spherical maximal sup_t |Int f(x - t y') dsigma(y')| over t_grid.
ScalarField sphere_maximal(const ScalarField& f, const SphereQuadrature& quad,
                           const std::vector<double>& t_grid);

/// Measure maximal sup_t Int |f(x + t y)| dmu(y) over t_grid.
ScalarField measure_maximal(const ScalarField& f, const DiscreteMeasure& mu,
                            const std::vector<double>& t_grid);

/// Growth report sup over sampled centers of mu(B(x,r))/r^(n-1); the growth
/// hypothesis is reported, never enforced.
double measure_growth_constant(const DiscreteMeasure& mu, int n, int center_samples = 64,
                               int radius_samples = 24);

}  // namespace rough

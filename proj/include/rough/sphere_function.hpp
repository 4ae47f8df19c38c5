#pragma once

#include "rough/geometry.hpp"

namespace rough {

/// Degree-zero homogeneous kernel data: values of Omega at sphere quadrature
/// nodes. Norm caches refer to the full (unnormalized) surface measure.
struct SphereFunction {
  SphereQuadrature quad;
  Array values;
  bool mean_zero = false;

  SphereFunction() = default;
  SphereFunction(SphereQuadrature q, Array v);

  double mean() const;  // sigma-average
  int dim() const { return quad.n; }
};

/// ||Omega||_{L^r(S^{n-1})} = (Int |Omega|^r dsigma)^{1/r}.
double sphere_lr_norm(const SphereFunction& omega, double r);

/// ||Omega||_{L^{n,inf}(S^{n-1})} = sup_l l sigma{|Omega| > l}^{1/n}.
double sphere_weak_norm(const SphereFunction& omega);

/// Subtract the sigma-average; marks the result mean_zero.
SphereFunction project_mean_zero(const SphereFunction& omega);

}  // namespace rough

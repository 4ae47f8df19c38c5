#pragma once

#include <utility>

#include "rough/maximal.hpp"
#include "rough/sphere_function.hpp"

namespace rough {

/// Complex field as a pair of real fields (n = 2 Beurling/Cauchy path).
struct ComplexField {
  ScalarField re, im;
  ComplexField() = default;
  explicit ComplexField(const GridSpec& g) : re(g), im(g) {}
  ComplexField(ScalarField r, ScalarField i) : re(std::move(r)), im(std::move(i)) {
    require(re.grid.same_layout(im.grid), "ComplexField: component grid mismatch");
  }
};

/// Both sides of the homogeneous-extension identity
///   ||Omega||_{L^{n,inf}(B(0,2^k), normalized)} = c_n ||Omega||_{L^{n,inf}(S^{n-1})},
/// c_n = sigma(S^{n-1})^(-1/n). The left side is discretized on an independent
/// offset angular grid so the comparison is a genuine two-path check.
std::pair<double, double> ball_weak_norm_identity(const SphereFunction& omega, int k);

/// T^t_Omega f(x) = Int_{|y|>t} Omega(y') |y|^-n f(x-y) dy, polar quadrature
/// with log-spaced radial nodes (8 per octave) and the sphere nodes of Omega.
ScalarField truncated_rough(const ScalarField& f, const SphereFunction& omega, double t);

/// Contributions of the half-octave annuli [t 2^{j/2}, t 2^{(j+1)/2}) at one
/// point; their sum reassembles truncated_rough at x (test hook).
std::vector<double> rough_annuli_at(const ScalarField& f, const SphereFunction& omega,
                                    const Vec& x, double t);

/// T*_Omega f = sup_t |T^t_Omega f| over the half-octave t grid {h/2 * 2^(j/2)}.
/// Warns (via the returned flag of SphereFunction::mean_zero) but proceeds when
/// Omega is not mean zero.
ScalarField maximal_rough(const ScalarField& f, const SphereFunction& omega);

enum class RieszMode { PrincipalValue, Maximal };

/// Riesz transform R_j via the rough engine with Omega(y') = y'_j; pv mode
/// truncates at t = h/2, maximal mode is the sup over truncations.
ScalarField riesz_transform(const ScalarField& f, int j, RieszMode mode);

enum class BeurlingMode { S, SMax, Cauchy };

/// n = 2 only. S is the Ahlfors-Beurling transform (kernel -(1/pi) zeta^-2,
/// i.e. Omega(theta) = -(1/pi) e^{-2 i theta}), SMax its maximal truncation,
/// Cauchy the convolution with (1/pi)(z - zeta)^-1.
ComplexField beurling(const ComplexField& f, BeurlingMode mode);

/// Complex derivative (1/2)(d/dx - i d/dy) by central differences.
ComplexField complex_derivative(const ComplexField& f);

}  // namespace rough

#pragma once

#include <utility>

#include "rough/geometry.hpp"

namespace rough {

/// Finite list of point masses.
struct DiscreteMeasure {
  std::vector<Vec> points;
  Array masses;  // positive

  DiscreteMeasure() = default;
  DiscreteMeasure(std::vector<Vec> pts, Array m) : points(std::move(pts)), masses(std::move(m)) {
    require(points.size() == static_cast<size_t>(masses.size()),
            "DiscreteMeasure: point/mass count mismatch");
    require(!points.empty(), "DiscreteMeasure: empty measure");
    require((masses > 0).all(), "DiscreteMeasure: masses must be positive");
  }
  double total_mass() const { return masses.sum(); }
};

/// I_alpha f(x) = Int f(y) |x-y|^(alpha-n) dy by direct midpoint quadrature;
/// the zero-offset cell uses the cell average of the kernel instead of its
/// (infinite) midpoint value. When the evaluation grid is omitted the field's
/// own grid is used.
ScalarField riesz_potential(const ScalarField& f, double alpha);
ScalarField riesz_potential(const ScalarField& f, double alpha, const GridSpec& eval_grid);

/// Average of |z|^(alpha-n) over a single grid cell centered at the origin;
/// exact in n=1 and for (n=2, alpha=1), 16x-refined midpoint otherwise.
double singular_cell_average(int n, double alpha, double h);

/// I_alpha mu(x) = sum m_i |x-y_i|^(alpha-n), exact.
ScalarField riesz_potential_measure(const DiscreteMeasure& mu, double alpha,
                                    const GridSpec& grid);

/// (I_alpha mu)^r as a positive weight field.
ScalarField a1_power_weight(const DiscreteMeasure& mu, double alpha, double r,
                            const GridSpec& grid);

/// Both sides of the local Kolmogorov step in the A_1 power lemma:
///   lhs = (avg_Q I_alpha(1_{2Q} mu)^r)^{1/r},   rhs = inf_{x in Q} I_alpha mu(x).
/// r = 0 degenerates to lhs = 1. Powers at or beyond (n/alpha)' are still
/// evaluated so the harness can probe where the estimate breaks.
std::pair<double, double> kolmogorov_local_estimate(const DiscreteMeasure& mu, double alpha,
                                                    const Cube& q, double r,
                                                    const GridSpec& grid);

}  // namespace rough

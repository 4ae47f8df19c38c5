#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "rough/potential.hpp"
#include "rough/singular.hpp"
#include "rough/weights.hpp"

namespace rough {

/// Derived exponents; conjugacy is exact by construction.
struct ExponentSet {
  int n = 2;
  double p = 1.5;
  double q = 0;      // 0 = unused
  double alpha = 1.0;

  double p_conj() const { return p / (p - 1.0); }
  double n_conj() const { return n / static_cast<double>(n - 1); }
  double p_star() const {
    require(p < n, "ExponentSet: p* needs p < n");
    return n * p / (n - p);
  }
};

/// Deterministic generator (splitmix64); identical streams across platforms.
struct Rng {
  uint64_t state;
  explicit Rng(uint64_t seed) : state(seed) {}
  uint64_t next() {
    uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
};

struct BumpSpec {
  Vec center = Vec::Zero();
  double radius = 1.0;
  double amplitude = 1.0;
};

/// Harmonic coefficients of a random Omega (n = 2: trigonometric polynomial).
struct OmegaSpec {
  double a0 = 0;                   // constant part (dropped by projection)
  std::vector<double> cos_coeff;   // degree 1..k
  std::vector<double> sin_coeff;
};

/// Seeded test inputs; specs are physical so the same suite can be sampled
/// on any grid (refinement and domain sweeps).
struct Suite {
  GridSpec grid;
  uint64_t seed = 1;
  std::vector<BumpSpec> bump_specs;
  std::vector<OmegaSpec> omega_specs;
  std::vector<ScalarField> fields;
  std::vector<SphereFunction> omegas;      // mean-zero projections
  std::vector<SphereFunction> omegas_raw;  // with the constant part kept
};

Suite make_suite(const GridSpec& grid, int field_count, int omega_count, uint64_t seed,
                 int sphere_nodes = 64);
/// Resample the same physical specs on another grid.
Suite resample_suite(const Suite& s, const GridSpec& grid);

SphereFunction sample_omega(const OmegaSpec& spec, const SphereQuadrature& quad,
                            bool project);

struct SeriesPoint {
  double x;  // h, R or N depending on the sweep
  double c;
};

struct EmpiricalConstantReport {
  double c_emp = 0;
  Vec argmax = Vec::Zero();
  long masked_points = 0;
  std::vector<double> per_element;        // per suite element (field or Omega)
  std::vector<SeriesPoint> refinement;    // (h, c_emp)
  std::vector<SeriesPoint> domain;        // (R, c_emp)
  std::optional<double> growth_exponent;
  double runtime_ms = 0;

  double spread() const;  // max/min over per_element
};

/// max over masked grid points of lhs/rhs; the mask drops points with
/// rhs < theta * max(rhs). masked_points counts the dropped cells.
EmpiricalConstantReport empirical_constant(const ScalarField& lhs, const ScalarField& rhs,
                                           double theta = 1e-6);

struct InequalityCase {
  std::string id;
  double theta = 1e-6;
  ExponentSet exps;
  double r = 1.5;           // power for selfimp-1.6 / lemma-1.5
  double eps = 1.0;         // epsilon for neg-Mn'+eps and endpoint-43
  int k = 2;                // iteration count for iter-9
  bool mean_zero = true;    // Omega projection toggle (main-1.4)
  double weight_power = 0.5;  // power-weight exponent for weighted-norm cases
};

/// Case ids implemented by run_case.
const std::vector<std::string>& known_cases();

/// The measure of the lemma-1.5 cases: a unit mass at the origin plus two
/// off-center atoms inside the unit ball.
DiscreteMeasure lemma_measure();

EmpiricalConstantReport run_case(const InequalityCase& c, const Suite& suite);

/// Least-squares slope of log c vs log x.
double fit_growth_exponent(const std::vector<SeriesPoint>& series);

/// Domain-growth probe: rerun the case on domains of half-width R (same
/// physical suite specs), fit log c_emp vs log R. Needs >= 4 geometric radii.
/// fixed_spacing scales N with R (constant h) for bounded-case sweeps.
EmpiricalConstantReport divergence_probe(const InequalityCase& c, const std::vector<double>& radii,
                                         const Suite& base, bool fixed_spacing = false);

/// Refinement probe: rerun on N in `resolutions` at fixed R, fit log c_emp
/// vs log N. The mean-zero-disabled rough case diverges along this axis (the
/// truncation floor t = h/2 is what the continuum sup over t > 0 probes).
EmpiricalConstantReport refinement_probe(const InequalityCase& c,
                                         const std::vector<int>& resolutions, const Suite& base);

struct PoincareVariant {
  enum class Kind { OneOne, Classical, Lorentz } kind = Kind::OneOne;
  double p = 1, q = 1;  // classical variant exponents
  static PoincareVariant one_one() { return {}; }
  static PoincareVariant classical(double p, double q);
  static PoincareVariant lorentz() { return {Kind::Lorentz, 1, 1}; }
};

/// max over regions of the Poincare ratio for the variant; regions are balls.
double poincare_check(const ScalarField& f, const std::vector<Ball>& regions,
                      const PoincareVariant& variant);

std::vector<Ball> random_balls(const GridSpec& g, int count, uint64_t seed);

/// ||g||_{L^{q,inf}(u)}.
double weak_type_norm(const ScalarField& g, double q, const ScalarField* density = nullptr);

struct IdentityReport {
  double spherical_mean_residual = 0, spherical_mean_order = 0;
  double riesz_residual = 0, riesz_order = 0;
  double beurling_residual = 0;           // relative L2 of S - d(Cf)
  double ball_identity_max_dev = 0;       // max |lhs/rhs - 1| over random Omega
  double absorption_max_ratio = 0;        // lhs over the proof's bound, <= 1 expected
};

/// Residuals of the paper's identity chain on a bump field; orders measured
/// under h -> h/2.
IdentityReport identity_suite(const GridSpec& grid, int sphere_nodes = 64, uint64_t seed = 7);

struct SobolevRow {
  double weight_exponent = 0;  // a in |x|^-a
  std::string op;
  double raw_ratio = 0;        // ||w T f||_{p*} / ||w |grad f|||_p
  double normalized_ratio = 0; // raw / [w]_{A_{p,p*}}^{1/n'}
  double apq_constant = 0;
};

/// Ratio table for T in {identity, M, M^2, Tstar} along a power-weight family
/// approaching the A_{p,p*} boundary. Reports trends; asserts nothing sharp.
std::vector<SobolevRow> sobolev_suite(const Suite& suite, const std::vector<double>& exponents,
                                      double p);

}  // namespace rough

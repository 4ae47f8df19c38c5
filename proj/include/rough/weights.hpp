#pragma once

#include <optional>

#include "rough/lorentz.hpp"

namespace rough {

struct WeightConstantReport {
  double value = 1.0;
  Cube witness;
  Vec argmax_point = Vec::Zero();  // meaningful for A_1-type constants
  int scale_min = 0, scale_max = 0;
  long cube_count = 0;
  std::optional<bool> divergent;  // set by refinement_trend, not by the sweep itself
};

/// |x|^(-a) sampled at cell centers (centers never hit the origin).
ScalarField make_power_weight(const GridSpec& g, double a);

/// [w]_{A_1}: max over grid points of the centered-dyadic M w / w.
WeightConstantReport a1_constant(const ScalarField& w, const CubeFamily& family);

/// [w]_{A_p} = sup_Q (avg_Q w)(avg_Q w^{1-p'})^{p-1}, 1 < p < inf.
WeightConstantReport ap_constant(const ScalarField& w, double p, const CubeFamily& family);

/// [w]_{A_{p,q}} = sup_Q (avg_Q w^q)(avg_Q w^{-p'})^{q/p'}, q >= p > 1.
WeightConstantReport apq_constant(const ScalarField& w, double p, double q,
                                  const CubeFamily& family);

/// Fujii-Wilson [w]_{A_inf} = sup_Q w(Q)^{-1} Int_Q M(1_Q w), the inner
/// maximal restricted to subcubes of Q.
WeightConstantReport ainf_constant(const ScalarField& w, const CubeFamily& family);

/// [w]_{A_{1,n'}} = [w^{n'}]_{A_1}.
WeightConstantReport a1n_constant(const ScalarField& w, const CubeFamily& family);

/// Divergence flag from a refinement series (coarse -> fine constants):
/// strictly increasing with total growth >= 20 percent.
bool refinement_trend_divergent(const std::vector<double>& series);

enum class BumpMode { Joint, Separated, LogBump, DiagonalLog };

struct BumpCheckReport {
  double value = 0;        // sup over the family (max of both sups when separated)
  double value_first = 0;  // first term sup (separated modes)
  double value_second = 0; // second term sup
  Cube witness;
  BpReport phi_class, psi_class;
  YoungFunction phi_used, psi_used;
  long cube_count = 0;
  long skipped = 0;
};

/// Log-bump pairs: Phi(t) = t^q log(e+t)^{q/q'+delta}, Psi(t) = t^{p'} log(e+t)^{p'/p+delta}.
std::pair<YoungFunction, YoungFunction> log_bump_pair(double p, double q, double delta);
/// Diagonal pairs with the stated exponents 2p-1+delta and 2p'-1+delta.
std::pair<YoungFunction, YoungFunction> diagonal_log_pair(double p, double delta);

/// Two-weight bump condition sup over the family of
///   |Q|^{alpha/n + 1/q - 1/p} ||u^{1/q}||_{Phi(Q)} ||v^{-1/p}||_{Psi(Q)}   (joint)
/// or the separated two-term variant. Refuses to run when the required
/// B-class membership of the associates is inconclusive.
BumpCheckReport bump_check(const ScalarField& u, const ScalarField& v, double p, double q,
                           double alpha, const YoungFunction& phi, const YoungFunction& psi,
                           BumpMode mode, const CubeFamily& family, double delta = 0.5);

struct TestingCheckReport {
  double ratio_first = 0;   // I_1 tested on 1_Q v^{1-p'}
  double ratio_second = 0;  // dual test on 1_Q u
  Cube witness_first, witness_second;
  long cube_count = 0;
  long skipped = 0;
};

/// Sawyer testing conditions for I_1 on the given cube family.
TestingCheckReport testing_check(const ScalarField& u, const ScalarField& v, double p,
                                 double q, const CubeFamily& family);

/// Thinned dyadic family (at most per_scale_cap cubes per scale), for the
/// quadratically-priced testing conditions.
CubeFamily sparse_dyadic_family(const GridSpec& g, int j_min, int j_max, int per_scale_cap);

}  // namespace rough

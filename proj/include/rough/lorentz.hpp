#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "rough/geometry.hpp"

namespace rough {

/// Right-continuous step function lambda -> mu{|f| > lambda} built from
/// sorted samples. thresholds are strictly decreasing positive values;
/// cum_measure[i] is the measure of {|f| >= thresholds[i]}.
struct StepDistribution {
  std::vector<double> thresholds;
  std::vector<double> cum_measure;
  double total_measure = 0;

  double at(double t) const;      // mu{|f| > t}
  double max_value() const { return thresholds.empty() ? 0.0 : thresholds.front(); }
};

struct LorentzIndex {
  double p = 2.0;
  double q = 2.0;  // may be +infinity
  LorentzIndex() = default;
  LorentzIndex(double p_, double q_) : p(p_), q(q_) {
    require(p > 0 && q > 0, "LorentzIndex: p and q must be positive");
  }
};

StepDistribution distribution(const ScalarField& f, const ScalarField* density = nullptr);

/// Lorentz norm with the leading factor p:
///   ||f||_{p,q} = (p Int_0^inf t^q d(t)^{q/p} dt/t)^{1/q},  q < inf,
///   ||f||_{p,inf} = sup_t t d(t)^{1/p}.
/// Evaluated in closed form per step interval.
double lorentz_norm(const StepDistribution& d, const LorentzIndex& idx);
double lorentz_norm(const ScalarField& f, const LorentzIndex& idx,
                    const ScalarField* density = nullptr);

/// Same norm from raw |values| sorted descending with equal weights 1/count.
/// `count` may exceed the array length (trailing zero samples).
double lorentz_norm_sorted_desc(std::span<const double> values_desc, double count,
                                const LorentzIndex& idx);

/// Normalized Lorentz average ||f||_{p,q}(Q, dx/|Q|) over the cells of Q.
double lorentz_avg(const ScalarField& f, const Cube& q, const LorentzIndex& idx);

/// Both sides of the Lorentz Hoelder inequality
///   Int |fg| dmu  <=  C ||f||_{p,q} ||g||_{p',q'}.
std::pair<double, double> holder_lorentz(const ScalarField& f, const ScalarField& g,
                                         const LorentzIndex& idx,
                                         const ScalarField* density = nullptr);

/// Young function families used by the bump conditions:
///   power(p):        Phi(t) = t^p
///   power_log(p, a): Phi(t) = t^p log(e + t)^a
struct YoungFunction {
  enum class Family { Power, PowerLog };
  Family family = Family::Power;
  double p = 2.0;
  double a = 0.0;

  static YoungFunction power(double p);
  static YoungFunction power_log(double p, double a);

  double value(double t) const;
  double inverse(double y) const;
  std::string name() const;
};

/// Associate Young function with Phi^{-1}(t) PhiBar^{-1}(t) ~ t:
/// power(p) -> power(p'), power_log(p, a) -> power_log(p', -a p'/p).
YoungFunction associate(const YoungFunction& phi);

/// Luxemburg-style Orlicz average inf{ lambda > 0 : avg_Q Phi(|f|/lambda) <= 1 },
/// bisection on lambda, 1e-10 relative tolerance.
double orlicz_avg(const ScalarField& f, const Cube& q, const YoungFunction& phi);
double orlicz_avg_values(std::span<const double> abs_values, double count,
                         const YoungFunction& phi);

enum class BpVerdict { Member, NonMember, Inconclusive };

struct BpReport {
  BpVerdict verdict = BpVerdict::Inconclusive;
  double slope = 0;                       // fitted d log g / d log t on the tail
  std::optional<double> log_correction;   // secondary log-power exponent, if fitted
};

/// Tail-integrability test for Int_1^inf Phi(t)/t^p dt/t (B_p) or
/// Int_1^inf Phi(t)^{q/p}/t^q dt/t (B_{p,q} with q > 0 supplied).
BpReport bp_classify(const YoungFunction& phi, double p, std::optional<double> q = std::nullopt);

}  // namespace rough

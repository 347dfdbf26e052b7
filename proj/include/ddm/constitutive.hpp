#pragma once

#include <string>
#include <string_view>

#include "ddm/tensor.hpp"

namespace ddm {

/// sigma(eps) = lambda f(tr eps) I + mu eps + C : eps,  f(x) = c1 atan(c2 x)
struct NonlinearElasticParams
{
  double youngs = 70e3;
  double poisson = 0.3;
  double c1 = 3.0e-2;
  double c2 = 1.0e2;

  void validate() const;
};

SymTensor nlStress(const SymTensor& strain, const NonlinearElasticParams& p);
TangentMatrix nlTangent(const SymTensor& strain, const NonlinearElasticParams& p);

/// Associative von Mises plasticity with linear isotropic hardening.
struct J2Params
{
  double youngs = 200e9;
  double poisson = 0.3;
  double hardening = 200e9 / 20.0;
  double initialYield = 250e6;

  void validate() const;
};

struct PlasticState
{
  SymTensor plasticStrain;  // deviatoric
  double yieldStress = 0.0;
  double accumulated = 0.0;

  static PlasticState virgin(const J2Params& p) { return {SymTensor(), p.initialYield, 0.0}; }
};

struct ReturnMapResult
{
  SymTensor stress;
  TangentMatrix tangent;  // consistent algorithmic tangent
  PlasticState state;
  bool yielded = false;
};

/**
 * Radial return from the trial stress C:(eps - eps_p). Linear hardening
 * makes the plastic multiplier closed-form:
 *   dgamma = (q_trial - sigma_y) / (3G + H).
 */
ReturnMapResult j2ReturnMap(const SymTensor& totalStrain, const PlasticState& state, const J2Params& p);

/// History-free stress/tangent oracle used for dataset synthesis ("linear" or "nonlinear").
class ElasticOracle
{
 public:
  static ElasticOracle linear(double youngs, double poisson);
  static ElasticOracle nonlinear(const NonlinearElasticParams& p);
  /// Throws ParameterError for an unknown id.
  static ElasticOracle fromId(std::string_view id, const NonlinearElasticParams& p);

  SymTensor stress(const SymTensor& strain) const;
  TangentMatrix tangent(const SymTensor& strain) const;
  std::string_view id() const { return nonlinear_ ? "nonlinear" : "linear"; }
  double youngs() const { return params_.youngs; }
  const NonlinearElasticParams& params() const { return params_; }

 private:
  ElasticOracle(NonlinearElasticParams p, bool nonlinear);

  NonlinearElasticParams params_;
  bool nonlinear_;
  TangentMatrix elastic_;
};

}  // namespace ddm

#include "ddm/constitutive.hpp"

#include <cmath>

#include "ddm/errors.hpp"

namespace ddm {

void NonlinearElasticParams::validate() const
{
  lameParameters(youngs, poisson);
  if (!(c2 > 0.0)) throw ParameterError("nonlinear elasticity requires c2 > 0");
}

SymTensor nlStress(const SymTensor& strain, const NonlinearElasticParams& p)
{
  const auto [lambda, mu] = lameParameters(p.youngs, p.poisson);
  const double f = p.c1 * std::atan(p.c2 * strain.trace());
  const SymTensor linear = isotropicElasticityLame(p.youngs, p.poisson) * strain;
  return lambda * f * SymTensor::identity() + mu * strain + linear;
}

TangentMatrix nlTangent(const SymTensor& strain, const NonlinearElasticParams& p)
{
  const auto [lambda, mu] = lameParameters(p.youngs, p.poisson);
  const double x = p.c2 * strain.trace();
  const double df = p.c1 * p.c2 / (1.0 + x * x);
  Mat4 m = isotropicElasticityLame(p.youngs, p.poisson).matrix();
  m += lambda * df * identityOuterIdentity() + mu * Mat4::Identity();
  return TangentMatrix(m);
}

void J2Params::validate() const
{
  bulkShearModuli(youngs, poisson);
  if (!(hardening >= 0.0)) throw ParameterError("hardening modulus must be >= 0");
  if (!(initialYield > 0.0)) throw ParameterError("initial yield stress must be > 0");
}

ReturnMapResult j2ReturnMap(const SymTensor& totalStrain, const PlasticState& state, const J2Params& p)
{
  const TangentMatrix elastic = isotropicElasticityBulkShear(p.youngs, p.poisson);
  const double shear = bulkShearModuli(p.youngs, p.poisson).shear;

  const SymTensor trial = elastic * (totalStrain - state.plasticStrain);
  const SymTensor devTrial = deviator(trial);
  const double devNorm = devTrial.norm();
  const double qTrial = std::sqrt(1.5) * devNorm;

  // States left on the surface by a previous return count as elastic (roundoff).
  if (qTrial <= state.yieldStress * (1.0 + 1e-10)) return {trial, elastic, state, false};

  const double dgamma = (qTrial - state.yieldStress) / (3.0 * shear + p.hardening);
  const SymTensor flow = (1.0 / devNorm) * devTrial;

  ReturnMapResult out;
  out.yielded = true;
  out.stress = trial - (2.0 * shear * std::sqrt(1.5) * dgamma) * flow;
  out.state.plasticStrain = state.plasticStrain + (std::sqrt(1.5) * dgamma) * flow;
  out.state.yieldStress = state.yieldStress + p.hardening * dgamma;
  out.state.accumulated = state.accumulated + dgamma;

  const double g2 = 6.0 * shear * shear;
  const double a = g2 * dgamma / qTrial;
  const double b = g2 / (3.0 * shear + p.hardening);
  const Vec4& n = flow.mandel();
  out.tangent = TangentMatrix(Mat4(elastic.matrix() - a * deviatoricProjector() + (a - b) * (n * n.transpose())));
  return out;
}

ElasticOracle::ElasticOracle(NonlinearElasticParams p, bool nonlinear)
    : params_(p), nonlinear_(nonlinear), elastic_(isotropicElasticityLame(p.youngs, p.poisson))
{
  if (nonlinear_) params_.validate();
}

ElasticOracle ElasticOracle::linear(double youngs, double poisson)
{
  NonlinearElasticParams p;
  p.youngs = youngs;
  p.poisson = poisson;
  p.c1 = 0.0;
  return ElasticOracle(p, false);
}

ElasticOracle ElasticOracle::nonlinear(const NonlinearElasticParams& p) { return ElasticOracle(p, true); }

ElasticOracle ElasticOracle::fromId(std::string_view id, const NonlinearElasticParams& p)
{
  if (id == "linear") return linear(p.youngs, p.poisson);
  if (id == "nonlinear") return nonlinear(p);
  throw ParameterError("unknown material oracle '" + std::string(id) + "'");
}

SymTensor ElasticOracle::stress(const SymTensor& strain) const
{
  return nonlinear_ ? nlStress(strain, params_) : elastic_ * strain;
}

TangentMatrix ElasticOracle::tangent(const SymTensor& strain) const
{
  return nonlinear_ ? nlTangent(strain, params_) : elastic_;
}

}  // namespace ddm

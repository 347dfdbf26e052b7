#include "ddm/tensor.hpp"

#include "ddm/errors.hpp"

namespace ddm {

namespace {

// Voigt engineering-strain/stress to Mandel scaling: C_mandel = S C_voigt S.
const Vec4 kVoigtScale(1.0, 1.0, 1.0, kSqrt2);

void checkElasticParameters(double youngs, double poisson)
{
  if (!(youngs > 0.0)) throw ParameterError("Young's modulus must be positive");
  if (poisson == 0.5) throw ParameterError("Poisson ratio 0.5 is incompressible: Lame lambda is singular");
  if (!(poisson > -1.0 && poisson < 0.5)) throw ParameterError("Poisson ratio must lie in (-1, 0.5)");
}

}  // namespace

TangentMatrix TangentMatrix::fromVoigt(const Mat4& voigt)
{
  return TangentMatrix(Mat4(kVoigtScale.asDiagonal() * voigt * kVoigtScale.asDiagonal()));
}

Mat4 TangentMatrix::toVoigt() const
{
  const Vec4 inv = kVoigtScale.cwiseInverse();
  return inv.asDiagonal() * m_ * inv.asDiagonal();
}

bool TangentMatrix::isSymmetric(double relTol) const
{
  const double scale = maxAbs();
  return (m_ - m_.transpose()).cwiseAbs().maxCoeff() <= relTol * scale;
}

LameParameters lameParameters(double youngs, double poisson)
{
  checkElasticParameters(youngs, poisson);
  return {youngs * poisson / ((1.0 + poisson) * (1.0 - 2.0 * poisson)), youngs / (2.0 * (1.0 + poisson))};
}

BulkShearModuli bulkShearModuli(double youngs, double poisson)
{
  checkElasticParameters(youngs, poisson);
  return {youngs / (3.0 * (1.0 - 2.0 * poisson)), youngs / (2.0 * (1.0 + poisson))};
}

Mat4 identityOuterIdentity()
{
  Mat4 m = Mat4::Zero();
  m.topLeftCorner<3, 3>().setOnes();
  return m;
}

Mat4 deviatoricProjector() { return Mat4::Identity() - identityOuterIdentity() / 3.0; }

TangentMatrix isotropicElasticityLame(double youngs, double poisson)
{
  const auto [lambda, mu] = lameParameters(youngs, poisson);
  return TangentMatrix(Mat4(lambda * identityOuterIdentity() + 2.0 * mu * Mat4::Identity()));
}

TangentMatrix isotropicElasticityBulkShear(double youngs, double poisson)
{
  const auto [bulk, shear] = bulkShearModuli(youngs, poisson);
  return TangentMatrix(Mat4((bulk - 2.0 / 3.0 * shear) * identityOuterIdentity() + 2.0 * shear * Mat4::Identity()));
}

SymTensor deviator(const SymTensor& t)
{
  const double p = t.trace() / 3.0;
  return {t[0] - p, t[1] - p, t[2] - p, t[3]};
}

double vonMisesStress(const SymTensor& stress) { return std::sqrt(1.5) * deviator(stress).norm(); }

}  // namespace ddm

#pragma once

#include <array>
#include <cmath>

#include <Eigen/Core>

namespace ddm {

using Vec4 = Eigen::Matrix<double, 4, 1>;
using Mat4 = Eigen::Matrix<double, 4, 4>;

inline constexpr double kSqrt2 = 1.41421356237309504880;

/**
 * Symmetric second-order tensor in plane strain, stored in Mandel form
 * (xx, yy, zz, sqrt(2)*xy). The out-of-plane shear components are zero.
 *
 * The Euclidean norm of the four components equals the Frobenius norm of the
 * full 3x3 tensor, so phase-space distances need no shear weighting.
 */
class SymTensor
{
 public:
  SymTensor() : m_(Vec4::Zero()) {}
  SymTensor(double xx, double yy, double zz, double mandelXY) : m_(xx, yy, zz, mandelXY) {}
  explicit SymTensor(const Vec4& mandel) : m_(mandel) {}

  /// Engineering strain (xx, yy, zz, gamma_xy = 2 eps_xy).
  static SymTensor fromStrainVoigt(const std::array<double, 4>& v)
  {
    return {v[0], v[1], v[2], v[3] / kSqrt2};
  }
  /// Stress (xx, yy, zz, sigma_xy).
  static SymTensor fromStressVoigt(const std::array<double, 4>& v)
  {
    return {v[0], v[1], v[2], v[3] * kSqrt2};
  }
  std::array<double, 4> toStrainVoigt() const { return {m_[0], m_[1], m_[2], m_[3] * kSqrt2}; }
  std::array<double, 4> toStressVoigt() const { return {m_[0], m_[1], m_[2], m_[3] / kSqrt2}; }

  /// Tensor xy component (not the Mandel-scaled one).
  double xy() const { return m_[3] / kSqrt2; }

  const Vec4& mandel() const { return m_; }
  Vec4& mandel() { return m_; }
  double operator[](int i) const { return m_[i]; }
  double& operator[](int i) { return m_[i]; }

  double trace() const { return m_[0] + m_[1] + m_[2]; }
  double norm() const { return m_.norm(); }
  double squaredNorm() const { return m_.squaredNorm(); }
  double dot(const SymTensor& o) const { return m_.dot(o.m_); }

  SymTensor& operator+=(const SymTensor& o)
  {
    m_ += o.m_;
    return *this;
  }
  SymTensor& operator-=(const SymTensor& o)
  {
    m_ -= o.m_;
    return *this;
  }
  SymTensor& operator*=(double s)
  {
    m_ *= s;
    return *this;
  }
  friend SymTensor operator+(SymTensor a, const SymTensor& b) { return a += b; }
  friend SymTensor operator-(SymTensor a, const SymTensor& b) { return a -= b; }
  friend SymTensor operator*(double s, SymTensor a) { return a *= s; }
  friend SymTensor operator*(SymTensor a, double s) { return a *= s; }
  friend SymTensor operator-(const SymTensor& a) { return SymTensor(Vec4(-a.m_)); }
  friend bool operator==(const SymTensor& a, const SymTensor& b) { return a.m_ == b.m_; }

  static SymTensor identity() { return {1.0, 1.0, 1.0, 0.0}; }

 private:
  Vec4 m_;
};

/// Fourth-order tangent in the Mandel basis; maps strain increments to stress increments.
class TangentMatrix
{
 public:
  TangentMatrix() : m_(Mat4::Zero()) {}
  explicit TangentMatrix(const Mat4& m) : m_(m) {}

  /// Converts a matrix acting on engineering Voigt strain and returning Voigt stress.
  static TangentMatrix fromVoigt(const Mat4& voigt);
  Mat4 toVoigt() const;

  const Mat4& matrix() const { return m_; }
  Mat4& matrix() { return m_; }
  double operator()(int i, int j) const { return m_(i, j); }
  double& operator()(int i, int j) { return m_(i, j); }

  SymTensor operator*(const SymTensor& t) const { return SymTensor(Vec4(m_ * t.mandel())); }

  /// max |C_ij - C_ji| <= relTol * max |C_ij|
  bool isSymmetric(double relTol = 1e-12) const;
  TangentMatrix symmetrized() const { return TangentMatrix(Mat4(0.5 * (m_ + m_.transpose()))); }
  double maxAbs() const { return m_.cwiseAbs().maxCoeff(); }

  friend bool operator==(const TangentMatrix& a, const TangentMatrix& b) { return a.m_ == b.m_; }

 private:
  Mat4 m_;
};

struct LameParameters
{
  double lambda;
  double mu;
};

struct BulkShearModuli
{
  double bulk;
  double shear;
};

LameParameters lameParameters(double youngs, double poisson);
BulkShearModuli bulkShearModuli(double youngs, double poisson);

/// lambda I(x)I + 2 mu I_sym
TangentMatrix isotropicElasticityLame(double youngs, double poisson);
/// (kappa - 2G/3) I(x)I + 2G I_sym
TangentMatrix isotropicElasticityBulkShear(double youngs, double poisson);

/// I(x)I in Mandel form (ones on the normal block).
Mat4 identityOuterIdentity();
/// Deviatoric projector I_sym - I(x)I/3.
Mat4 deviatoricProjector();

SymTensor deviator(const SymTensor& t);
/// sqrt(3/2) |dev sigma|
double vonMisesStress(const SymTensor& stress);

}  // namespace ddm

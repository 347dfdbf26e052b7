#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ddm/constitutive.hpp"
#include "ddm/errors.hpp"
#include "support.hpp"

using namespace ddm;
using namespace ddm::testing;

namespace {

/// Direct evaluation of sigma = lambda c1 atan(c2 tr) I + mu eps + (lambda tr I + 2 mu eps).
SymTensor nlStressByHand(const SymTensor& e, const NonlinearElasticParams& p)
{
  const double lambda = p.youngs * p.poisson / ((1 + p.poisson) * (1 - 2 * p.poisson));
  const double mu = p.youngs / (2 * (1 + p.poisson));
  const double tr = e[0] + e[1] + e[2];
  const double vol = lambda * p.c1 * std::atan(p.c2 * tr) + lambda * tr;
  return {vol + 3 * mu * e[0], vol + 3 * mu * e[1], vol + 3 * mu * e[2], 3 * mu * e[3]};
}

Mat4 finiteDifference(auto stress, const SymTensor& e, double h)
{
  Mat4 out;
  for (int j = 0; j < 4; ++j) {
    SymTensor ep = e, em = e;
    ep[j] += h;
    em[j] -= h;
    const SymTensor d = (1.0 / (2 * h)) * (stress(ep) - stress(em));
    for (int i = 0; i < 4; ++i) out(i, j) = d[i];
  }
  return out;
}

}  // namespace

TEST_CASE("nonlinear law: zero strain, hand evaluation, saturation")
{
  const NonlinearElasticParams p;
  CHECK(nlStress(SymTensor(), p).norm() == 0.0);

  const SymTensor e(0.01, 0.0, 0.0, 0.0);
  const double lambda = 40384.615384615385, mu = 26923.076923076922;
  const double expected = lambda * 3e-2 * std::atan(1e2 * 0.01) + mu * 0.01 + (lambda + 2 * mu) * 0.01;
  CHECK(nlStress(e, p)[0] == doctest::Approx(expected).epsilon(1e-13));

  std::mt19937_64 rng(2);
  for (int i = 0; i < 100; ++i) {
    const SymTensor s = randomTensor(rng, 0.05);
    const SymTensor a = nlStress(s, p), b = nlStressByHand(s, p);
    for (int c = 0; c < 4; ++c) CHECK(a[c] == doctest::Approx(b[c]).epsilon(1e-12).scale(1e3));
  }

  // The atan term saturates at lambda c1 pi/2 per normal component.
  const SymTensor big(1e3, 0, 0, 0), bigger(1e3 + 1.0, 0, 0, 0);
  const double linearPart = (lambda + 3 * mu) * 1.0;
  CHECK(nlStress(bigger, p)[0] - nlStress(big, p)[0] == doctest::Approx(linearPart).epsilon(1e-6));
  const SymTensor lin = isotropicElasticityLame(p.youngs, p.poisson) * big;
  CHECK(nlStress(big, p)[1] - lin[1] == doctest::Approx(lambda * 3e-2 * std::numbers::pi / 2).epsilon(1e-4));
}

TEST_CASE("nonlinear tangent: structure, symmetry, asymptote")
{
  const NonlinearElasticParams p;
  const double lambda = 40384.615384615385, mu = 26923.076923076922;
  const TangentMatrix c0 = nlTangent(SymTensor(), p);
  CHECK(c0(0, 1) == doctest::Approx(lambda * (1 + 3e-2 * 1e2)).epsilon(1e-13));
  CHECK(c0(0, 0) == doctest::Approx(lambda * (1 + 3e-2 * 1e2) + 3 * mu).epsilon(1e-13));
  CHECK(c0(3, 3) == doctest::Approx(3 * mu).epsilon(1e-13));
  CHECK(c0.isSymmetric());

  const TangentMatrix cInf = nlTangent(SymTensor(1e6, 0, 0, 0), p);
  CHECK(cInf(0, 1) == doctest::Approx(lambda).epsilon(1e-9));
  CHECK(cInf(0, 0) == doctest::Approx(lambda + 3 * mu).epsilon(1e-9));
}

TEST_CASE("property: nonlinear tangent matches central differences at 100 random strains")
{
  const NonlinearElasticParams p;
  std::mt19937_64 rng(101);
  for (int i = 0; i < 100; ++i) {
    const SymTensor e = randomTensor(rng, 0.05);
    const Mat4 fd = finiteDifference([&](const SymTensor& x) { return nlStress(x, p); }, e, 1e-7);
    CHECK(maxRel(nlTangent(e, p).matrix(), fd) < 1e-5);
  }
}

TEST_CASE("parameter validation")
{
  NonlinearElasticParams p;
  p.c2 = 0.0;
  CHECK_THROWS_AS(p.validate(), ParameterError);
  J2Params j;
  j.hardening = -1.0;
  CHECK_THROWS_AS(j.validate(), ParameterError);
  j = J2Params{};
  j.initialYield = 0.0;
  CHECK_THROWS_AS(j.validate(), ParameterError);
  CHECK_NOTHROW(J2Params{}.validate());
  CHECK(J2Params{}.hardening == doctest::Approx(200e9 / 20));
}

TEST_CASE("J2 elastic branch")
{
  const J2Params p;
  const PlasticState s0 = PlasticState::virgin(p);
  const SymTensor e(1e-4, -2e-5, 0.0, 3e-5);
  const ReturnMapResult r = j2ReturnMap(e, s0, p);
  CHECK_FALSE(r.yielded);
  const SymTensor linear = isotropicElasticityLame(p.youngs, p.poisson) * e;
  for (int c = 0; c < 4; ++c) CHECK(r.stress[c] == doctest::Approx(linear[c]).epsilon(1e-14).scale(1.0));
  CHECK(r.state.yieldStress == s0.yieldStress);
  CHECK(r.state.accumulated == 0.0);
  CHECK(maxRel(r.tangent.matrix(), isotropicElasticityLame(p.youngs, p.poisson).matrix()) < 1e-15);
}

TEST_CASE("J2 monotone uniaxial strain: post-yield hardening slope equals H")
{
  const J2Params p;
  PlasticState s = PlasticState::virgin(p);
  std::vector<double> acc, com;
  for (int k = 1; k <= 200; ++k) {
    const ReturnMapResult r = j2ReturnMap(SymTensor(k * 5e-5, 0, 0, 0), s, p);
    s = r.state;
    if (r.yielded) {
      acc.push_back(s.accumulated);
      com.push_back(vonMisesStress(r.stress));
    }
  }
  REQUIRE(acc.size() > 100);
  // Least-squares slope of sigma_com against accumulated plastic strain.
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < acc.size(); ++i) {
    mx += acc[i] / acc.size();
    my += com[i] / acc.size();
  }
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < acc.size(); ++i) {
    sxy += (acc[i] - mx) * (com[i] - my);
    sxx += (acc[i] - mx) * (acc[i] - mx);
  }
  CHECK(sxy / sxx == doctest::Approx(p.hardening).epsilon(0.01));
}

TEST_CASE("J2 load then unload: elastic unloading slope and residual strain")
{
  const J2Params p;
  PlasticState s = PlasticState::virgin(p);
  double eps = 0.0;
  for (int k = 0; k < 100; ++k) {
    eps += 1e-4;
    s = j2ReturnMap(SymTensor(eps, 0, 0, 0), s, p).state;
  }
  REQUIRE(s.accumulated > 0.0);
  const ReturnMapResult a = j2ReturnMap(SymTensor(eps - 1e-4, 0, 0, 0), s, p);
  const ReturnMapResult b = j2ReturnMap(SymTensor(eps - 2e-4, 0, 0, 0), a.state, p);
  CHECK_FALSE(a.yielded);
  CHECK_FALSE(b.yielded);
  const double lambda = lameParameters(p.youngs, p.poisson).lambda, mu = lameParameters(p.youngs, p.poisson).mu;
  CHECK((a.stress[0] - b.stress[0]) / 1e-4 == doctest::Approx(lambda + 2 * mu).epsilon(1e-9));
  CHECK(s.plasticStrain.norm() > 1e-4);
  CHECK(std::abs(s.plasticStrain.trace()) < 1e-10);
}

TEST_CASE("property: J2 consistent tangent matches finite differences at 50 post-yield states")
{
  const J2Params p;
  std::mt19937_64 rng(55);
  int tested = 0;
  while (tested < 50) {
    // Random committed state from a random pre-strain, then a plastic increment.
    PlasticState s = PlasticState::virgin(p);
    const SymTensor pre = randomPlaneStrain(rng, 6e-3);
    s = j2ReturnMap(pre, s, p).state;
    const SymTensor e = pre + randomPlaneStrain(rng, 3e-3);
    const ReturnMapResult r = j2ReturnMap(e, s, p);
    if (!r.yielded) continue;
    const double h = 1e-9;
    bool allPlastic = true;
    const Mat4 fd = finiteDifference(
        [&](const SymTensor& x) {
          const ReturnMapResult q = j2ReturnMap(x, s, p);
          allPlastic = allPlastic && q.yielded;
          return q.stress;
        },
        e, h);
    if (!allPlastic) continue;
    CHECK(maxRel(r.tangent.matrix(), fd) < 1e-4);
    CHECK(r.tangent.isSymmetric(1e-12));
    ++tested;
  }
}

TEST_CASE("property: yield surface, hardening monotonicity, deviatoric plastic strain")
{
  const J2Params p;
  std::mt19937_64 rng(77);
  for (int path = 0; path < 50; ++path) {
    PlasticState s = PlasticState::virgin(p);
    SymTensor e;
    for (int k = 0; k < 60; ++k) {
      e += randomPlaneStrain(rng, 8e-4);
      const ReturnMapResult r = j2ReturnMap(e, s, p);
      CHECK(vonMisesStress(r.stress) <= r.state.yieldStress + 1e-6 * p.initialYield);
      CHECK(r.state.yieldStress >= s.yieldStress);
      CHECK(r.state.yieldStress >= p.initialYield);
      CHECK(std::abs(r.state.plasticStrain.trace()) <= 1e-10);
      s = r.state;
    }
  }
}

TEST_CASE("elastic oracle ids")
{
  const NonlinearElasticParams p;
  CHECK(ElasticOracle::fromId("linear", p).id() == "linear");
  CHECK(ElasticOracle::fromId("nonlinear", p).id() == "nonlinear");
  CHECK_THROWS_AS(ElasticOracle::fromId("plastic", p), ParameterError);
  const ElasticOracle lin = ElasticOracle::linear(70e3, 0.3);
  const SymTensor e(1e-3, 2e-3, 0, 1e-3);
  const SymTensor s = lin.stress(e);
  const SymTensor ref = isotropicElasticityLame(70e3, 0.3) * e;
  for (int c = 0; c < 4; ++c) CHECK(s[c] == doctest::Approx(ref[c]).epsilon(1e-14));
  const ElasticOracle nl = ElasticOracle::nonlinear(p);
  CHECK(nl.stress(e)[0] == doctest::Approx(nlStress(e, p)[0]).epsilon(1e-15));
}

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "ddm/bench.hpp"
#include "ddm/errors.hpp"
#include "ddm/fem.hpp"
#include "ddm/mesh.hpp"
#include "support.hpp"

using namespace ddm;

namespace {

double cornerArea(const Mesh& m)
{
  double a = 0.0;
  for (const auto& el : m.elements) {
    const Point2 &p0 = m.nodes[el[0]], &p1 = m.nodes[el[1]], &p2 = m.nodes[el[2]];
    a += 0.5 * ((p1.x() - p0.x()) * (p2.y() - p0.y()) - (p2.x() - p0.x()) * (p1.y() - p0.y()));
  }
  return a;
}

Vector fieldFrom(const FemModel& model, auto f)
{
  Vector u(static_cast<Eigen::Index>(model.numDofs()));
  for (std::size_t n = 0; n < model.mesh().numNodes(); ++n) {
    const Eigen::Vector2d v = f(model.mesh().nodes[n]);
    u[static_cast<Eigen::Index>(2 * n)] = v.x();
    u[static_cast<Eigen::Index>(2 * n + 1)] = v.y();
  }
  return u;
}

Eigen::Vector2d resultant(const Vector& f)
{
  Eigen::Vector2d r = Eigen::Vector2d::Zero();
  for (Eigen::Index i = 0; i < f.size(); i += 2) r += Eigen::Vector2d(f[i], f[i + 1]);
  return r;
}

}  // namespace

TEST_CASE("quarter annulus: one cell is two elements on a 3x3 grid")
{
  const Mesh m = generateQuarterAnnulus(1.0, 2.0, 1, 1);
  CHECK(m.numElements() == 2);
  CHECK(m.numNodes() == 9);
  for (const char* tag : {"inner", "outer", "xsym", "ysym"}) CHECK(m.hasEdgeGroup(tag));
  CHECK(m.edges("inner").size() == 1);
}

TEST_CASE("quarter annulus counts and tags")
{
  const Mesh m = generateQuarterAnnulus(1.0, 2.0, 5, 20);
  CHECK(m.numElements() == 200);
  CHECK(m.numNodes() == (2 * 5 + 1) * (2 * 20 + 1));
  CHECK(m.edges("inner").size() == 20);
  CHECK(m.edges("outer").size() == 20);
  CHECK(m.edges("xsym").size() == 5);
  CHECK(m.edges("ysym").size() == 5);
  for (const auto& e : m.edges("inner")) {
    const auto n = m.edgeNodes(e);
    CHECK(m.nodes[n[0]].norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(m.nodes[n[1]].norm() == doctest::Approx(1.0).epsilon(1e-12));
  }
  for (const auto& e : m.edges("xsym")) {
    for (std::size_t n : m.edgeNodes(e)) CHECK(std::abs(m.nodes[n].x()) < 1e-12);
  }
  CHECK_THROWS_AS(m.edges("nope"), ParameterError);
}

TEST_CASE("quarter annulus rejects invalid radii and counts")
{
  CHECK_THROWS_AS(generateQuarterAnnulus(2.0, 1.0, 1, 1), ParameterError);
  CHECK_THROWS_AS(generateQuarterAnnulus(0.0, 1.0, 1, 1), ParameterError);
  CHECK_THROWS_AS(generateQuarterAnnulus(1.0, 2.0, 0, 1), ParameterError);
  CHECK_THROWS_AS(generateQuarterAnnulus(1.0, 2.0, 1, 0), ParameterError);
}

TEST_CASE("generated annulus mid-side nodes sit at corner midpoints")
{
  const Mesh m = generateQuarterAnnulus(1.0, 2.0, 3, 7);
  for (const auto& el : m.elements) {
    for (int k = 0; k < 3; ++k) {
      const Point2 mid = 0.5 * (m.nodes[el[k]] + m.nodes[el[(k + 1) % 3]]);
      CHECK((m.nodes[el[3 + k]] - mid).norm() < 1e-9);
    }
  }
}

TEST_CASE("plate with hole: geometry, tags, area")
{
  const double l = 1.0, h = 0.2, r = 0.05;
  const Mesh m = generatePlateWithHole(l, h, r, 5);
  CHECK(m.numElements() == 400);
  for (const char* tag : {"clamp", "load", "top", "bottom", "hole"}) CHECK(m.hasEdgeGroup(tag));
  for (const auto& e : m.edges("clamp")) {
    for (std::size_t n : m.edgeNodes(e)) CHECK(std::abs(m.nodes[n].x()) < 1e-12);
  }
  for (const auto& e : m.edges("load")) {
    for (std::size_t n : m.edgeNodes(e)) CHECK(m.nodes[n].x() == doctest::Approx(l).epsilon(1e-12));
  }
  const Point2 centre(l / 2, h / 2);
  for (const auto& e : m.edges("hole")) {
    for (std::size_t n : m.edgeNodes(e)) CHECK((m.nodes[n] - centre).norm() == doctest::Approx(r).epsilon(1e-12));
  }

  const FemModel model = buildFemModel(m, {{"clamp", DofComponent::both, 0.0}});
  const double exact = l * h - std::numbers::pi * r * r;
  CHECK(std::abs(model.totalWeight() - exact) / exact < 1e-3);
  for (const auto& p : model.points()) CHECK(p.weight > 0.0);
}

TEST_CASE("plate with hole rejects bad geometry")
{
  CHECK_THROWS_AS(generatePlateWithHole(1.0, 0.2, 0.1, 5), ParameterError);
  CHECK_THROWS_AS(generatePlateWithHole(1.0, 0.2, 0.3, 5), ParameterError);
  CHECK_THROWS_AS(generatePlateWithHole(1.0, 0.2, 0.05, 0), ParameterError);
  CHECK_THROWS_WITH_AS(generatePlateWithHole(1.0, 0.2, 1e-5, 5), doctest::Contains("resolution"), ParameterError);
}

TEST_CASE("shape functions: Kronecker property and partition of unity")
{
  const std::array<std::array<double, 2>, 6> nodes{{{0, 0}, {1, 0}, {0, 1}, {0.5, 0}, {0.5, 0.5}, {0, 0.5}}};
  for (int i = 0; i < 6; ++i) {
    const Tri6Shape s = shapeTri6(nodes[i][0], nodes[i][1]);
    for (int j = 0; j < 6; ++j) CHECK(s.values[j] == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-15));
  }
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 200; ++k) {
    double xi = u(rng), eta = u(rng);
    if (xi + eta > 1.0) {
      xi = 1.0 - xi;
      eta = 1.0 - eta;
    }
    const Tri6Shape s = shapeTri6(xi, eta);
    double sum = 0.0;
    Eigen::Vector2d grad = Eigen::Vector2d::Zero();
    for (int j = 0; j < 6; ++j) {
      sum += s.values[j];
      grad += s.gradients[j];
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(grad.norm() < 1e-13);
  }
  const Tri6Shape c = shapeTri6(1.0 / 3.0, 1.0 / 3.0);
  double sum = 0.0;
  for (double v : c.values) sum += v;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("shape function gradients match central differences")
{
  const double h = 1e-6;
  for (auto [xi, eta] : {std::pair{0.2, 0.3}, std::pair{0.6, 0.1}, std::pair{0.1, 0.1}}) {
    const Tri6Shape s = shapeTri6(xi, eta);
    const Tri6Shape px = shapeTri6(xi + h, eta), mx = shapeTri6(xi - h, eta);
    const Tri6Shape py = shapeTri6(xi, eta + h), my = shapeTri6(xi, eta - h);
    for (int j = 0; j < 6; ++j) {
      CHECK(s.gradients[j].x() == doctest::Approx((px.values[j] - mx.values[j]) / (2 * h)).epsilon(1e-8));
      CHECK(s.gradients[j].y() == doctest::Approx((py.values[j] - my.values[j]) / (2 * h)).epsilon(1e-8));
    }
  }
}

TEST_CASE("Gauss rule integrates quadratics exactly")
{
  double w = 0.0, x = 0.0, xx = 0.0, xy = 0.0;
  for (const auto& q : triangleGaussRule()) {
    w += q.weight;
    x += q.weight * q.xi;
    xx += q.weight * q.xi * q.xi;
    xy += q.weight * q.xi * q.eta;
  }
  CHECK(w == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(x == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  CHECK(xx == doctest::Approx(1.0 / 12.0).epsilon(1e-15));
  CHECK(xy == doctest::Approx(1.0 / 24.0).epsilon(1e-15));
}

TEST_CASE("weights sum to the straight-edged annulus area")
{
  const Mesh m = generateQuarterAnnulus(1.0, 2.0, 4, 9);
  const double area = cornerArea(m);
  const FemModel model = buildFemModel(m, {});
  CHECK(std::abs(model.totalWeight() - area) / area < 1e-8);
  CHECK(model.numPoints() == 3 * m.numElements());
  // Chord polygon of the quarter annulus.
  const double chords = 9 * 0.5 * std::sin(std::numbers::pi / 2 / 9) * (4.0 - 1.0);
  CHECK(area == doctest::Approx(chords).epsilon(1e-12));
}

TEST_CASE("patch test: linear field reproduces a uniform strain")
{
  for (const Mesh& m : {generateQuarterAnnulus(1.0, 2.0, 3, 5), generatePlateWithHole(1.0, 0.2, 0.05, 2)}) {
    const FemModel model = buildFemModel(m, {});
    const double a = 1e-3, b = -2e-3, c = 5e-4;
    const Vector u = fieldFrom(model, [&](const Point2& p) { return Eigen::Vector2d(a * p.x() + c * p.y(), b * p.y() + c * p.x()); });
    for (std::size_t e = 0; e < model.numPoints(); ++e) {
      const SymTensor s = model.strain(e, u);
      CHECK(s[0] == doctest::Approx(a).epsilon(1e-10));
      CHECK(s[1] == doctest::Approx(b).epsilon(1e-10));
      CHECK(s[2] == 0.0);
      CHECK(s.xy() == doctest::Approx(c).epsilon(1e-10));
    }
  }
}

TEST_CASE("property: rigid body motions produce zero strain")
{
  const FemModel model = buildFemModel(generatePlateWithHole(1.0, 0.2, 0.05, 3), {});
  const Vector t = fieldFrom(model, [](const Point2&) { return Eigen::Vector2d(0.3, -0.7); });
  const Vector r = fieldFrom(model, [](const Point2& p) { return Eigen::Vector2d(-1e-6 * p.y(), 1e-6 * p.x()); });
  for (std::size_t e = 0; e < model.numPoints(); ++e) {
    CHECK(model.strain(e, t).norm() <= 1e-12 * 0.7);
    CHECK(model.strain(e, r).norm() <= 1e-12 * 1e-6 + 1e-18);
  }
}

TEST_CASE("property: internal force is the adjoint of the strain operator")
{
  const FemModel model = buildFemModel(generateQuarterAnnulus(1.0, 2.0, 3, 4), {});
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    Vector u(static_cast<Eigen::Index>(model.numDofs()));
    for (Eigen::Index i = 0; i < u.size(); ++i) u[i] = d(rng);
    std::vector<SymTensor> sigma;
    for (std::size_t e = 0; e < model.numPoints(); ++e) sigma.push_back(testing::randomTensor(rng, 1.0));
    double work = 0.0;
    for (std::size_t e = 0; e < model.numPoints(); ++e) work += model.point(e).weight * model.strain(e, u).dot(sigma[e]);
    const double viaForce = u.dot(model.internalForce(sigma));
    CHECK(std::abs(work - viaForce) <= 1e-12 * std::max(1.0, std::abs(work)) * 10);
  }
}

TEST_CASE("degenerate element raises a Jacobian error naming it")
{
  Mesh m = generateQuarterAnnulus(1.0, 2.0, 1, 1);
  std::swap(m.elements[1][1], m.elements[1][2]);  // clockwise corners
  try {
    buildFemModel(m, {});
    FAIL("expected JacobianError");
  } catch (const JacobianError& e) {
    CHECK(e.element() == 1);
  }
}

TEST_CASE("Dirichlet conditions and condensation")
{
  const Mesh m = generateQuarterAnnulus(1.0, 2.0, 2, 3);
  const FemModel model =
      buildFemModel(m, {{"xsym", DofComponent::x, 0.0}, {"ysym", DofComponent::y, 0.25}});
  // xsym has 2 edges with 5 distinct nodes, same for ysym.
  CHECK(model.dirichlet().size() == 10);
  CHECK(model.numFree() == model.numDofs() - 10);
  const Vector p = model.prescribedVector();
  CHECK(p.sum() == doctest::Approx(5 * 0.25));
  const Vector full = model.expand(Vector::Ones(static_cast<Eigen::Index>(model.numFree())));
  CHECK(model.restrictToFree(full).sum() == doctest::Approx(static_cast<double>(model.numFree())));
  CHECK_THROWS_AS(buildFemModel(m, {{"bogus", DofComponent::both, 0.0}}), ParameterError);
}

TEST_CASE("pressure and traction resultants")
{
  const double p = tubePressure(1.0, 2.0, 1.0);
  CHECK(p == doctest::Approx(2.0011e4).epsilon(1e-4));
  CHECK(p == doctest::Approx(5e4 / std::sqrt(3.0) * std::log(2.0)).epsilon(1e-15));

  const FemModel tube = buildFemModel(generateQuarterAnnulus(1.0, 2.0, 2, 8), {});
  const Eigen::Vector2d rInner = resultant(pressureLoad(tube, "inner", p));
  CHECK(rInner.x() == doctest::Approx(p * 1.0).epsilon(1e-12));
  CHECK(rInner.y() == doctest::Approx(p * 1.0).epsilon(1e-12));
  CHECK(pressureLoad(tube, "inner", 0.0).norm() == 0.0);
  CHECK_THROWS_AS(pressureLoad(tube, "nope", 1.0), ParameterError);

  const FemModel plate = buildFemModel(generatePlateWithHole(1.0, 0.2, 0.05, 2), {});
  const Eigen::Vector2d rLoad = resultant(tractionLoad(plate, "load", Eigen::Vector2d(0.0, -3.0)));
  CHECK(rLoad.x() == doctest::Approx(0.0));
  CHECK(rLoad.y() == doctest::Approx(-3.0 * 0.2).epsilon(1e-12));
  // Pressure on a flat edge: total = p L, directed into the body.
  const Eigen::Vector2d rTop = resultant(pressureLoad(plate, "top", 2.0));
  CHECK(rTop.y() == doctest::Approx(-2.0 * 1.0).epsilon(1e-12));
  CHECK(std::abs(rTop.x()) < 1e-12);
}

TEST_CASE("mesh text format round trip and errors")
{
  const Mesh m = generatePlateWithHole(1.0, 0.2, 0.05, 2);
  std::stringstream ss;
  writeMesh(m, ss);
  const Mesh back = parseMesh(ss);
  CHECK(back.nodes == m.nodes);
  CHECK(back.elements == m.elements);
  CHECK(back.edgeGroups == m.edgeGroups);

  std::istringstream sparse("# comment\nnode 10 0 0\nnode 20 1 0\nnode 30 0 1\nnode 40 0.5 0\nnode 50 0.5 0.5\n"
                            "node 60 0 0.5\ntri6 7 10 20 30 40 50 60\nedge left 7 2\n");
  const Mesh s = parseMesh(sparse);
  CHECK(s.numNodes() == 6);
  CHECK(s.elements[0] == std::array<std::size_t, 6>{0, 1, 2, 3, 4, 5});
  CHECK(s.edges("left").front() == EdgeRef{0, 2});

  std::istringstream bad("node 1 0 0\nnode 2 1 0\ntri6 1 1 2 3 4 5 6\n");
  try {
    parseMesh(bad, "bad.mesh");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
  std::istringstream junk("node 1 0 0\nquad 1 2 3 4\n");
  CHECK_THROWS_AS(parseMesh(junk), ParseError);
}

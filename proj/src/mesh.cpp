#include "ddm/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <unordered_map>
#include <utility>

#include "ddm/errors.hpp"

namespace ddm {

const std::vector<EdgeRef>& Mesh::edges(const std::string& tag) const
{
  const auto it = edgeGroups.find(tag);
  if (it == edgeGroups.end()) throw ParameterError("unknown edge tag '" + tag + "'");
  return it->second;
}

std::array<std::size_t, 3> Mesh::edgeNodes(const EdgeRef& e) const
{
  const auto& conn = elements.at(e.element);
  const int k = e.localEdge;
  return {conn[k], conn[(k + 1) % 3], conn[3 + k]};
}

namespace {

/**
 * Assembles a tri6 mesh from corner triangles. Corners are merged by
 * position; mid-side nodes are created once per unique edge.
 */
class TriMeshBuilder
{
 public:
  using MidsidePlacer = std::function<Point2(const Point2&, const Point2&)>;

  explicit TriMeshBuilder(double mergeTol) : tol_(mergeTol), cell_(mergeTol * 100.0) {}

  std::size_t corner(const Point2& p)
  {
    const auto cx = static_cast<long long>(std::floor(p.x() / cell_));
    const auto cy = static_cast<long long>(std::floor(p.y() / cell_));
    for (long long dx = -1; dx <= 1; ++dx) {
      for (long long dy = -1; dy <= 1; ++dy) {
        const auto it = grid_.find(key(cx + dx, cy + dy));
        if (it == grid_.end()) continue;
        for (std::size_t id : it->second) {
          if ((corners_[id] - p).norm() <= tol_) return id;
        }
      }
    }
    corners_.push_back(p);
    grid_[key(cx, cy)].push_back(corners_.size() - 1);
    return corners_.size() - 1;
  }

  void triangle(std::size_t a, std::size_t b, std::size_t c)
  {
    const Point2 ab = corners_[b] - corners_[a];
    const Point2 ac = corners_[c] - corners_[a];
    if (ab.x() * ac.y() - ab.y() * ac.x() < 0.0) std::swap(b, c);
    tris_.push_back({a, b, c});
  }

  /// Finalizes node numbering; corners first, then mid-side nodes in edge order.
  Mesh build(const MidsidePlacer& placeMidside) const
  {
    Mesh mesh;
    mesh.nodes = corners_;
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> midOf;
    for (const auto& t : tris_) {
      std::array<std::size_t, 6> conn{t[0], t[1], t[2], 0, 0, 0};
      for (int k = 0; k < 3; ++k) {
        const std::size_t a = t[k];
        const std::size_t b = t[(k + 1) % 3];
        const auto edgeKey = std::minmax(a, b);
        auto it = midOf.find(edgeKey);
        if (it == midOf.end()) {
          mesh.nodes.push_back(placeMidside(corners_[a], corners_[b]));
          it = midOf.emplace(edgeKey, mesh.nodes.size() - 1).first;
        }
        conn[3 + k] = it->second;
      }
      mesh.elements.push_back(conn);
    }
    return mesh;
  }

  /// Boundary edges (used by exactly one element) of the built mesh.
  static std::vector<EdgeRef> boundaryEdges(const Mesh& mesh)
  {
    std::map<std::pair<std::size_t, std::size_t>, std::vector<EdgeRef>> uses;
    for (std::size_t e = 0; e < mesh.elements.size(); ++e) {
      for (int k = 0; k < 3; ++k) {
        const auto n = mesh.edgeNodes({e, k});
        uses[std::minmax(n[0], n[1])].push_back({e, k});
      }
    }
    std::vector<EdgeRef> out;
    for (const auto& [_, refs] : uses) {
      if (refs.size() == 1) out.push_back(refs.front());
    }
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  static long long key(long long x, long long y) { return x * 73856093LL ^ y * 19349663LL; }

  double tol_;
  double cell_;
  std::vector<Point2> corners_;
  std::vector<std::array<std::size_t, 3>> tris_;
  std::unordered_map<long long, std::vector<std::size_t>> grid_;
};

Point2 straightMidside(const Point2& a, const Point2& b) { return 0.5 * (a + b); }

/// Splits a structured grid of corner points (i along s, j along t) into two triangles per cell.
void addStructuredBlock(TriMeshBuilder& builder, int ns, int nt,
                        const std::function<Point2(double, double)>& map)
{
  std::vector<std::size_t> ids(static_cast<std::size_t>((ns + 1) * (nt + 1)));
  for (int j = 0; j <= nt; ++j) {
    for (int i = 0; i <= ns; ++i) {
      ids[j * (ns + 1) + i] = builder.corner(map(static_cast<double>(i) / ns, static_cast<double>(j) / nt));
    }
  }
  for (int j = 0; j < nt; ++j) {
    for (int i = 0; i < ns; ++i) {
      const std::size_t a = ids[j * (ns + 1) + i];
      const std::size_t b = ids[j * (ns + 1) + i + 1];
      const std::size_t c = ids[(j + 1) * (ns + 1) + i + 1];
      const std::size_t d = ids[(j + 1) * (ns + 1) + i];
      builder.triangle(a, b, c);
      builder.triangle(a, c, d);
    }
  }
}

void tagEdges(Mesh& mesh, const std::vector<std::pair<std::string, std::function<bool(const Point2&)>>>& tags)
{
  for (const EdgeRef& e : TriMeshBuilder::boundaryEdges(mesh)) {
    const auto n = mesh.edgeNodes(e);
    for (const auto& [tag, onBoundary] : tags) {
      if (onBoundary(mesh.nodes[n[0]]) && onBoundary(mesh.nodes[n[1]])) {
        mesh.edgeGroups[tag].push_back(e);
      }
    }
  }
}

}  // namespace

Mesh generateQuarterAnnulus(double r1, double r2, int nRadial, int nCirc)
{
  if (!(r1 > 0.0 && r2 > r1)) throw ParameterError("quarter annulus requires 0 < r1 < r2");
  if (nRadial < 1 || nCirc < 1) throw ParameterError("quarter annulus requires nRadial, nCirc >= 1");

  const double tol = 1e-10 * r2;
  TriMeshBuilder builder(tol);
  addStructuredBlock(builder, nRadial, nCirc, [&](double s, double t) {
    const double r = r1 + s * (r2 - r1);
    const double theta = t * std::numbers::pi / 2.0;
    // Pin the symmetry lines exactly.
    const double x = t == 1.0 ? 0.0 : r * std::cos(theta);
    const double y = t == 0.0 ? 0.0 : r * std::sin(theta);
    return Point2(x, y);
  });
  Mesh mesh = builder.build(straightMidside);

  const auto onCircle = [tol](double radius) {
    return [radius, tol](const Point2& p) { return std::abs(p.norm() - radius) <= 1e3 * tol; };
  };
  tagEdges(mesh, {{"inner", onCircle(r1)},
                  {"outer", onCircle(r2)},
                  {"ysym", [](const Point2& p) { return p.y() == 0.0; }},
                  {"xsym", [](const Point2& p) { return p.x() == 0.0; }}});
  return mesh;
}

Mesh generatePlateWithHole(double length, double height, double radius, int refinement)
{
  if (!(length > 0.0 && height > 0.0)) throw ParameterError("plate dimensions must be positive");
  if (!(2.0 * radius < height)) throw ParameterError("hole diameter must be smaller than the plate height");
  if (length < height) throw ParameterError("plate length must be at least its height");
  if (refinement < 1) throw ParameterError("refinement must be >= 1");
  const double half = 0.5 * height;
  // Hole must be resolved by the cells around it.
  const double minRadius = 0.1 * half / refinement;
  if (!(radius >= minRadius)) {
    throw ParameterError("hole radius " + std::to_string(radius) + " is below the mesh resolution " +
                         std::to_string(minRadius));
  }

  const Point2 centre(0.5 * length, half);
  const double tol = 1e-10 * length;
  TriMeshBuilder builder(tol);
  const int n = refinement;

  // Four blocks between the hole and the surrounding square of side `height`.
  const double pi = std::numbers::pi;
  for (int q = 0; q < 4; ++q) {
    const double theta0 = -pi / 4.0 + q * pi / 2.0;
    const Point2 sq0 = centre + half * std::sqrt(2.0) * Point2(std::cos(theta0), std::sin(theta0));
    const double theta1 = theta0 + pi / 2.0;
    const Point2 sq1 = centre + half * std::sqrt(2.0) * Point2(std::cos(theta1), std::sin(theta1));
    addStructuredBlock(builder, n, n, [&](double s, double t) {
      const double theta = theta0 + s * pi / 2.0;
      const Point2 onHole = centre + radius * Point2(std::cos(theta), std::sin(theta));
      const Point2 onSquare = (1.0 - s) * sq0 + s * sq1;
      return Point2((1.0 - t) * onHole + t * onSquare);
    });
  }

  const double side = 0.5 * length - half;
  if (side > tol) {
    const int nx = std::max(1, static_cast<int>(std::lround(n * side / height)));
    addStructuredBlock(builder, nx, n, [&](double s, double t) { return Point2(s * side, t * height); });
    addStructuredBlock(builder, nx, n,
                       [&](double s, double t) { return Point2(0.5 * length + half + s * side, t * height); });
  }

  const auto onHole = [&](const Point2& p) { return std::abs((p - centre).norm() - radius) <= 1e3 * tol; };
  Mesh mesh = builder.build([&](const Point2& a, const Point2& b) -> Point2 {
    const Point2 mid = 0.5 * (a + b);
    if (onHole(a) && onHole(b)) return centre + radius * (mid - centre).normalized();
    return mid;
  });

  const double etol = 1e3 * tol;
  tagEdges(mesh, {{"clamp", [etol](const Point2& p) { return std::abs(p.x()) <= etol; }},
                  {"load", [&](const Point2& p) { return std::abs(p.x() - length) <= etol; }},
                  {"bottom", [etol](const Point2& p) { return std::abs(p.y()) <= etol; }},
                  {"top", [&](const Point2& p) { return std::abs(p.y() - height) <= etol; }},
                  {"hole", onHole}});
  return mesh;
}

}  // namespace ddm

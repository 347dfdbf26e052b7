#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace ddm {

using Point2 = Eigen::Vector2d;

/// Local edge k of a 6-node triangle runs corner k -> corner (k+1)%3 through mid-side node 3+k.
struct EdgeRef
{
  std::size_t element;
  int localEdge;

  friend bool operator==(const EdgeRef&, const EdgeRef&) = default;
  friend auto operator<=>(const EdgeRef&, const EdgeRef&) = default;
};

/**
 * Quadratic triangle mesh. Connectivity is (c0, c1, c2, m01, m12, m20) with
 * counter-clockwise corners.
 */
struct Mesh
{
  std::vector<Point2> nodes;
  std::vector<std::array<std::size_t, 6>> elements;
  std::map<std::string, std::vector<EdgeRef>> edgeGroups;

  /// Throws ParameterError for an unknown tag.
  const std::vector<EdgeRef>& edges(const std::string& tag) const;
  bool hasEdgeGroup(const std::string& tag) const { return edgeGroups.contains(tag); }

  /// Node ids (start corner, end corner, mid-side) of a local edge.
  std::array<std::size_t, 3> edgeNodes(const EdgeRef& e) const;

  std::size_t numNodes() const { return nodes.size(); }
  std::size_t numElements() const { return elements.size(); }
};

/**
 * Structured quarter annulus in the first quadrant, two triangles per polar
 * cell, straight-edged elements. Edge tags: "inner" (r = r1), "outer"
 * (r = r2), "ysym" (on y = 0) and "xsym" (on x = 0).
 */
Mesh generateQuarterAnnulus(double r1, double r2, int nRadial, int nCirc);

/**
 * Rectangle [0, length] x [0, height] with a centred circular hole, built
 * from transfinite blocks around the hole and two side rectangles. The
 * refinement is the number of cells along each quarter of the hole. Mid-side
 * nodes of hole edges lie on the circle.
 * Edge tags: "clamp" (x = 0), "load" (x = length), "top", "bottom", "hole".
 */
Mesh generatePlateWithHole(double length, double height, double radius, int refinement);

/// Plain-text mesh: `node <id> <x> <y>`, `tri6 <id> <n1..n6>`, `edge <tag> <elem> <localEdge>`, `#` comments.
Mesh parseMesh(std::istream& in, const std::string& sourceName = "<mesh>");
Mesh readMesh(const std::filesystem::path& path);
void writeMesh(const Mesh& mesh, std::ostream& out);
void writeMesh(const Mesh& mesh, const std::filesystem::path& path);

}  // namespace ddm

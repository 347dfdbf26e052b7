#include <fstream>
#include <iomanip>
#include <sstream>
#include <unordered_map>

#include "ddm/errors.hpp"
#include "ddm/mesh.hpp"

namespace ddm {

Mesh parseMesh(std::istream& in, const std::string& sourceName)
{
  Mesh mesh;
  std::unordered_map<long long, std::size_t> nodeIndex;
  std::unordered_map<long long, std::size_t> elementIndex;
  struct PendingEdge
  {
    std::string tag;
    long long element;
    int localEdge;
    std::size_t line;
  };
  std::vector<PendingEdge> pendingEdges;
  std::vector<std::pair<std::array<long long, 6>, std::size_t>> pendingElements;

  std::string line;
  std::size_t lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string keyword;
    if (!(ls >> keyword)) continue;
    if (keyword == "node") {
      long long id = 0;
      double x = 0.0;
      double y = 0.0;
      if (!(ls >> id >> x >> y)) throw ParseError(sourceName, lineNo, "expected `node <id> <x> <y>`");
      if (!nodeIndex.emplace(id, mesh.nodes.size()).second) {
        throw ParseError(sourceName, lineNo, "duplicate node id " + std::to_string(id));
      }
      mesh.nodes.emplace_back(x, y);
    } else if (keyword == "tri6") {
      long long id = 0;
      std::array<long long, 6> n{};
      if (!(ls >> id >> n[0] >> n[1] >> n[2] >> n[3] >> n[4] >> n[5])) {
        throw ParseError(sourceName, lineNo, "expected `tri6 <id> <n1..n6>`");
      }
      if (!elementIndex.emplace(id, pendingElements.size()).second) {
        throw ParseError(sourceName, lineNo, "duplicate element id " + std::to_string(id));
      }
      pendingElements.emplace_back(n, lineNo);
    } else if (keyword == "edge") {
      PendingEdge e{"", 0, 0, lineNo};
      if (!(ls >> e.tag >> e.element >> e.localEdge)) {
        throw ParseError(sourceName, lineNo, "expected `edge <tag> <elem> <localEdge>`");
      }
      if (e.localEdge < 0 || e.localEdge > 2) throw ParseError(sourceName, lineNo, "local edge must be 0, 1 or 2");
      pendingEdges.push_back(e);
    } else {
      throw ParseError(sourceName, lineNo, "unknown record '" + keyword + "'");
    }
    std::string trailing;
    if (ls >> trailing) throw ParseError(sourceName, lineNo, "trailing content '" + trailing + "'");
  }

  for (const auto& [ids, at] : pendingElements) {
    std::array<std::size_t, 6> conn{};
    for (int k = 0; k < 6; ++k) {
      const auto it = nodeIndex.find(ids[k]);
      if (it == nodeIndex.end()) throw ParseError(sourceName, at, "unknown node id " + std::to_string(ids[k]));
      conn[k] = it->second;
    }
    mesh.elements.push_back(conn);
  }
  for (const auto& e : pendingEdges) {
    const auto it = elementIndex.find(e.element);
    if (it == elementIndex.end()) {
      throw ParseError(sourceName, e.line, "unknown element id " + std::to_string(e.element));
    }
    mesh.edgeGroups[e.tag].push_back({it->second, e.localEdge});
  }
  return mesh;
}

Mesh readMesh(const std::filesystem::path& path)
{
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open mesh file " + path.string());
  return parseMesh(in, path.string());
}

void writeMesh(const Mesh& mesh, std::ostream& out)
{
  out << "# tri6 mesh: " << mesh.numNodes() << " nodes, " << mesh.numElements() << " elements\n";
  out << std::setprecision(17);
  for (std::size_t i = 0; i < mesh.nodes.size(); ++i) {
    out << "node " << i << ' ' << mesh.nodes[i].x() << ' ' << mesh.nodes[i].y() << '\n';
  }
  for (std::size_t e = 0; e < mesh.elements.size(); ++e) {
    out << "tri6 " << e;
    for (std::size_t n : mesh.elements[e]) out << ' ' << n;
    out << '\n';
  }
  for (const auto& [tag, refs] : mesh.edgeGroups) {
    for (const auto& r : refs) out << "edge " << tag << ' ' << r.element << ' ' << r.localEdge << '\n';
  }
}

void writeMesh(const Mesh& mesh, const std::filesystem::path& path)
{
  std::ofstream out(path);
  if (!out) throw ParameterError("cannot write mesh file " + path.string());
  writeMesh(mesh, out);
}

}  // namespace ddm

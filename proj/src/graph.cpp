#include "netsheaf/graph.hpp"

#include <algorithm>

#include "netsheaf/errors.hpp"

namespace netsheaf {

bool DirectedGraph::has_vertex(const std::string& v) const {
  return std::binary_search(vertices.begin(), vertices.end(), v);
}

bool DirectedGraph::has_edge(const std::string& from,
                             const std::string& to) const {
  return edges.count({from, to}) != 0;
}

DirectedGraph make_graph(
    std::vector<std::string> vertices,
    std::vector<std::pair<std::string, std::string>> edges) {
  DirectedGraph g;
  std::sort(vertices.begin(), vertices.end());
  vertices.erase(std::unique(vertices.begin(), vertices.end()),
                 vertices.end());
  g.vertices = std::move(vertices);
  for (auto& [a, b] : edges) {
    if (!g.has_vertex(a) || !g.has_vertex(b))
      throw UnknownVertex("edge references unknown vertex: " + a + " -> " + b);
    g.edges.emplace(std::move(a), std::move(b));
  }
  return g;
}

std::vector<std::string> neighborhood(const DirectedGraph& g,
                                      const std::string& v) {
  if (!g.has_vertex(v)) throw UnknownVertex("unknown vertex: " + v);
  if (!g.has_edge(v, v)) throw MissingSelfEdge("vertex lacks its self edge: " + v);
  std::vector<std::string> rest;
  for (const auto& [from, to] : g.edges)
    if (to == v && from != v) rest.push_back(from);
  std::sort(rest.begin(), rest.end());
  std::vector<std::string> out{v};
  out.insert(out.end(), rest.begin(), rest.end());
  return out;
}

}  // namespace netsheaf

// Directed graph over named vertices. Edges (w, v) mean "w feeds v"; every
// vertex is required to feed itself, which the face-poset and network-model
// layers both check.
#pragma once

#include <set>
#include <string>
#include <utility>
#include <vector>

namespace netsheaf {

struct DirectedGraph {
  std::vector<std::string> vertices;  // kept sorted and unique
  std::set<std::pair<std::string, std::string>> edges;  // (from, to)

  bool has_vertex(const std::string& v) const;
  bool has_edge(const std::string& from, const std::string& to) const;
};

DirectedGraph make_graph(std::vector<std::string> vertices,
                         std::vector<std::pair<std::string, std::string>> edges);

// In-neighborhood of v (vertices feeding v), in canonical order: v itself
// first, then the remaining members sorted by name. Throws UnknownVertex,
// and MissingSelfEdge if (v, v) is absent.
std::vector<std::string> neighborhood(const DirectedGraph& g,
                                      const std::string& v);

}  // namespace netsheaf

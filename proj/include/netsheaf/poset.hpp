// Finite partial orders over opaque string elements, stored with the full
// reflexive-transitive closure precomputed. The face poset of a network graph
// lives here too: one bottom element per vertex neighborhood, one top element
// per vertex, ordered by membership.
#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "netsheaf/graph.hpp"

namespace netsheaf {

class Poset {
 public:
  Poset() = default;

  // Builds from any generating relation; reflexivity and transitivity are
  // completed automatically. Throws CycleError if the completion would relate
  // two distinct elements both ways, UnknownElement on a dangling edge.
  Poset(std::vector<std::string> elements,
        const std::vector<std::pair<std::string, std::string>>& relations);

  std::size_t size() const { return names_.size(); }
  const std::vector<std::string>& elements() const { return names_; }
  const std::string& name(std::size_t i) const;
  std::size_t index_of(const std::string& element) const;  // UnknownElement
  bool contains(const std::string& element) const;

  bool leq(std::size_t a, std::size_t b) const;
  bool leq(const std::string& a, const std::string& b) const;

  // Full closure as index pairs (a, b) with a <= b, reflexive pairs included,
  // in ascending (a, b) order. This is the iteration order every pair sum in
  // the library uses.
  const std::vector<std::pair<std::size_t, std::size_t>>& pairs() const {
    return pairs_;
  }

  // Covering relations (transitive reduction), ascending order.
  const std::vector<std::pair<std::size_t, std::size_t>>& hasse() const {
    return hasse_;
  }

  // Elements y with x <= y, sorted by name.
  std::vector<std::string> up_set(const std::string& x) const;

 private:
  std::vector<std::string> names_;           // sorted
  std::map<std::string, std::size_t> index_;
  std::vector<char> leq_;                    // n*n closure matrix
  std::vector<std::pair<std::size_t, std::size_t>> pairs_;
  std::vector<std::pair<std::size_t, std::size_t>> hasse_;
};

// Reflexive-transitive closure of a relation, as sorted name pairs. Same
// validation rules as the Poset constructor.
std::set<std::pair<std::string, std::string>> closure(
    const std::vector<std::string>& elements,
    const std::vector<std::pair<std::string, std::string>>& relations);

enum class FaceKind { Neighborhood, Vertex };

struct FaceLabel {
  FaceKind kind;
  std::string vertex;
};

struct FacePoset {
  Poset poset;
  std::map<std::string, FaceLabel> labels;  // element name -> what it encodes
};

// Face partial order of a network graph: elements "U:<v>" (the in-neighborhood
// of v) and "v:<w>" (the vertex w), with U:<v> <= v:<w> exactly when w feeds v.
// Throws MissingSelfEdge when some vertex lacks its self edge.
FacePoset face_poset(const DirectedGraph& g);

// Canonical element names used by face posets and the encodings built on them.
std::string neighborhood_element(const std::string& v);
std::string vertex_element(const std::string& v);

// Monotone map between posets (total on the source elements).
struct OrderMap {
  std::map<std::string, std::string> map;  // source element -> target element
};

// True when every source relation a <= b lands on map(a) <= map(b). Throws
// UnknownElement if the map misses a source element or targets a stranger.
bool is_order_preserving(const Poset& source, const Poset& target,
                         const OrderMap& f);

}  // namespace netsheaf

// Discrete-time control problems on a directed network: per-vertex state and
// control spaces, local dynamics reading the in-neighborhood, nonnegative
// objectives, and a feasible set over each vertex's input tuple. The tuple
// layout everywhere is (control, own state, neighbor states in canonical
// order).
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "netsheaf/graph.hpp"
#include "netsheaf/space.hpp"

namespace netsheaf {

struct VertexModel {
  Space state_space;    // S_v
  Space control_space;  // C_v
  // R_v = C_v x S_v x S_w1 x ... in canonical neighbor order, carrying the
  // feasible set; assembled by make_tuple_space.
  Space tuple_space;
  StalkMap dynamics;           // tuple -> next own state
  StalkMap state_objective;    // own state -> nonnegative score
  StalkMap control_objective;  // tuple -> nonnegative score
};

struct NetworkProblem {
  DirectedGraph graph;
  std::map<std::string, VertexModel> vertices;
  int horizon = 1;
};

// Signature of R_v (control coords, then the neighborhood states with v
// first). Throws UnknownVertex / MissingSelfEdge via neighborhood().
Space tuple_signature(const DirectedGraph& g,
                      const std::map<std::string, Space>& state_spaces,
                      const Space& control_space, const std::string& v);

// Coordinate span of neighbor w's state inside v's tuple: [offset, offset+dim).
std::pair<std::size_t, std::size_t> tuple_state_span(
    const NetworkProblem& p, const std::string& v, const std::string& w);

// Builds the R_v tuple for v from a control point and per-vertex state points
// (canonical order). Throws MissingValue when a needed state is absent.
Point assemble_state(const NetworkProblem& p, const std::string& v,
                     const Point& control,
                     const std::map<std::string, Point>& states);

struct ValidationIssue {
  std::string vertex;      // empty for problem-wide issues
  std::string assumption;  // short tag, e.g. "invariance"
  std::string detail;
};

// Checks the modelling assumptions and reports violations instead of
// throwing: self edges, model/graph agreement, signatures, objective
// nonnegativity, dynamics invariance (image inside the feasible own-state
// values), feasible sets nonempty, horizon >= 1. Exhaustive over finite
// feasible sets, sampled otherwise. Empty result = valid.
std::vector<ValidationIssue> validate(const NetworkProblem& p,
                                      std::size_t samples = 64,
                                      std::uint64_t seed = 0xadd1ULL);

}  // namespace netsheaf

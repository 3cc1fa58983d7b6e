#include "netsheaf/netmodel.hpp"

#include <cmath>

#include "netsheaf/errors.hpp"

namespace netsheaf {

Space tuple_signature(const DirectedGraph& g,
                      const std::map<std::string, Space>& state_spaces,
                      const Space& control_space, const std::string& v) {
  std::vector<Space> factors{control_space};
  for (const auto& w : neighborhood(g, v)) {
    auto it = state_spaces.find(w);
    if (it == state_spaces.end())
      throw UnknownVertex("no state space for vertex " + w);
    factors.push_back(it->second);
  }
  return product(factors);
}

std::pair<std::size_t, std::size_t> tuple_state_span(
    const NetworkProblem& p, const std::string& v, const std::string& w) {
  auto itv = p.vertices.find(v);
  if (itv == p.vertices.end()) throw UnknownVertex("unknown vertex: " + v);
  std::size_t offset = itv->second.control_space.dim();
  for (const auto& u : neighborhood(p.graph, v)) {
    auto itu = p.vertices.find(u);
    if (itu == p.vertices.end()) throw UnknownVertex("unknown vertex: " + u);
    const std::size_t d = itu->second.state_space.dim();
    if (u == w) return {offset, offset + d};
    offset += d;
  }
  throw UnknownVertex(w + " is not in the neighborhood of " + v);
}

Point assemble_state(const NetworkProblem& p, const std::string& v,
                     const Point& control,
                     const std::map<std::string, Point>& states) {
  auto itv = p.vertices.find(v);
  if (itv == p.vertices.end()) throw UnknownVertex("unknown vertex: " + v);
  itv->second.control_space.require(control, "control for " + v);
  Point tuple = control;
  for (const auto& w : neighborhood(p.graph, v)) {
    auto it = states.find(w);
    if (it == states.end())
      throw MissingValue("assemble_state needs the state of " + w);
    p.vertices.at(w).state_space.require(it->second, "state of " + w);
    tuple.insert(tuple.end(), it->second.begin(), it->second.end());
  }
  return tuple;
}

namespace {

// Distance from a point to the nearest feasible own-state value, evaluated
// against an explicit list of tuple points.
double nearest_own_state(const NetworkProblem& p, const std::string& v,
                         const std::vector<Point>& feasible_tuples,
                         const Point& value) {
  auto [lo, hi] = tuple_state_span(p, v, v);
  double best = -1.0;
  for (const auto& t : feasible_tuples) {
    double acc = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
      const double d = t[i] - value[i - lo];
      acc += d * d;
    }
    acc = std::sqrt(acc);
    if (best < 0.0 || acc < best) best = acc;
  }
  return best;
}

}  // namespace

std::vector<ValidationIssue> validate(const NetworkProblem& p,
                                      std::size_t samples,
                                      std::uint64_t seed) {
  std::vector<ValidationIssue> issues;
  auto report = [&](std::string v, std::string what, std::string detail) {
    issues.push_back({std::move(v), std::move(what), std::move(detail)});
  };

  if (p.horizon < 1)
    report("", "horizon", "horizon must be at least 1, got " +
                              std::to_string(p.horizon));

  for (const auto& v : p.graph.vertices) {
    if (!p.graph.has_edge(v, v))
      report(v, "self-edge", "vertex lacks its self edge");
    if (!p.vertices.count(v)) report(v, "model", "vertex has no model");
  }
  for (const auto& [v, model] : p.vertices) {
    (void)model;
    if (!p.graph.has_vertex(v))
      report(v, "model", "model references a vertex not in the graph");
  }

  for (const auto& [v, model] : p.vertices) {
    if (!p.graph.has_vertex(v) || !p.graph.has_edge(v, v)) continue;

    std::map<std::string, Space> state_spaces;
    bool neighbors_ok = true;
    for (const auto& w : neighborhood(p.graph, v)) {
      auto it = p.vertices.find(w);
      if (it == p.vertices.end()) {
        neighbors_ok = false;
        break;
      }
      state_spaces[w] = it->second.state_space;
    }
    if (!neighbors_ok) continue;

    const Space expected =
        tuple_signature(p.graph, state_spaces, model.control_space, v);
    if (model.tuple_space.dim() != expected.dim())
      report(v, "signature",
             "tuple space has " + std::to_string(model.tuple_space.dim()) +
                 " coords, expected " + std::to_string(expected.dim()));
    if (model.dynamics.domain.dim() != expected.dim())
      report(v, "signature", "dynamics domain does not match the tuple space");
    if (model.dynamics.codomain.dim() != model.state_space.dim())
      report(v, "signature", "dynamics codomain does not match the state space");
    if (model.state_objective.domain.dim() != model.state_space.dim() ||
        model.state_objective.codomain.dim() != 1)
      report(v, "signature", "state objective is not state -> scalar");
    if (model.control_objective.domain.dim() != expected.dim() ||
        model.control_objective.codomain.dim() != 1)
      report(v, "signature", "control objective is not tuple -> scalar");
    if (!model.tuple_space.feasible)
      report(v, "feasible", "no feasible set on the tuple space");

    if (issues.size() > 64) return issues;  // hopeless, stop piling on
    if (!model.tuple_space.feasible) continue;

    std::vector<Point> tuples;
    bool exhaustive = false;
    if (model.tuple_space.feasible->finite()) {
      tuples = *model.tuple_space.feasible->points;
      exhaustive = true;
    } else {
      tuples = sample_points(model.tuple_space, samples, seed);
    }
    if (tuples.empty()) {
      report(v, "feasible", "feasible set is empty");
      continue;
    }

    for (const auto& t : tuples) {
      if (!model.tuple_space.matches(t)) {
        report(v, "feasible", "feasible tuple does not match the signature");
        break;
      }
    }

    for (const auto& t : tuples) {
      const double jc = model.control_objective(t)[0];
      if (jc < -1e-12) {
        report(v, "objective",
               "control objective is negative on a feasible tuple (" +
                   std::to_string(jc) + ")");
        break;
      }
      auto [lo, hi] = tuple_state_span(p, v, v);
      const Point own(t.begin() + static_cast<std::ptrdiff_t>(lo),
                      t.begin() + static_cast<std::ptrdiff_t>(hi));
      const double js = model.state_objective(own)[0];
      if (js < -1e-12) {
        report(v, "objective",
               "state objective is negative on a feasible state (" +
                   std::to_string(js) + ")");
        break;
      }
    }

    // Invariance: dynamics must land on own-state values that some feasible
    // tuple exhibits. Exact only against an explicit list; best effort when
    // sampled.
    if (exhaustive) {
      for (const auto& t : tuples) {
        const Point next = model.dynamics(t);
        const double gap = nearest_own_state(p, v, tuples, next);
        if (gap > 1e-9) {
          report(v, "invariance",
                 "dynamics leaves the feasible own-state values (gap " +
                     std::to_string(gap) + ")");
          break;
        }
      }
    } else {
      for (const auto& t : tuples) {
        const Point next = model.dynamics(t);
        const double gap = nearest_own_state(p, v, tuples, next);
        if (gap > 1e-6) {
          report(v, "invariance",
                 "dynamics strays from sampled feasible own-state values "
                 "(gap " +
                     std::to_string(gap) + ", sampled check)");
          break;
        }
      }
    }
  }
  return issues;
}

}  // namespace netsheaf

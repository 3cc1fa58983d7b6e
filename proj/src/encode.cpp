#include "netsheaf/encode.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "netsheaf/errors.hpp"

namespace netsheaf {

namespace {

void require_ready(const NetworkProblem& p) {
  if (p.horizon < 1)
    throw Error("encode: horizon must be at least 1, got " +
                std::to_string(p.horizon));
  for (const auto& v : p.graph.vertices) {
    if (!p.vertices.count(v))
      throw UnknownVertex("encode: vertex has no model: " + v);
    if (!p.graph.has_edge(v, v))
      throw MissingSelfEdge("encode: vertex lacks its self edge: " + v);
  }
}

// Projection of v's tuple space onto w's state block.
StalkMap own_state_projection(const NetworkProblem& p, const std::string& v,
                              const std::string& w) {
  auto [lo, hi] = tuple_state_span(p, v, w);
  std::vector<std::size_t> keep;
  for (std::size_t i = lo; i < hi; ++i) keep.push_back(i);
  return projection(p.vertices.at(v).tuple_space, keep);
}

Space vertex_state_stalk(const NetworkProblem& p, const std::string& w) {
  Space s = p.vertices.at(w).state_space;
  if (auto cands = state_candidates(p, w)) {
    FeasibleSet f;
    f.points = std::make_shared<const std::vector<Point>>(std::move(*cands));
    s.feasible = std::move(f);
  }
  return s;
}

Space score_stalk() { return Space::reals(1, 0.0, 2.0); }

StalkMap zero_score_map() {
  StalkMap m;
  m.domain = Space::trivial();
  m.codomain = Space::reals(1);
  m.fn = [](const Point&) { return Point{0.0}; };
  m.lipschitz = 0.0;  // constant map
  m.lipschitz_provenance = "exact";
  return m;
}

// Antichain sheaf: named elements, no relations beyond reflexive.
Sheaf antichain_sheaf(const std::vector<std::string>& elements,
                      const std::vector<Space>& stalks) {
  SheafBuilder b(Poset(elements, {}));
  // Poset sorts its elements; set stalks by name, not by position.
  for (std::size_t i = 0; i < elements.size(); ++i)
    b.set_stalk(elements[i], stalks[i]);
  return b.build();
}

}  // namespace

std::string step_name(int k, char layer, const std::string& object) {
  return "t" + std::to_string(k) + "/" + std::string(1, layer) + "/" + object;
}

std::optional<std::vector<Point>> state_candidates(const NetworkProblem& p,
                                                   const std::string& v) {
  const auto& model = p.vertices.at(v);
  if (!model.tuple_space.feasible || !model.tuple_space.feasible->finite())
    return std::nullopt;
  auto [lo, hi] = tuple_state_span(p, v, v);
  std::vector<Point> out;
  for (const auto& t : *model.tuple_space.feasible->points)
    out.emplace_back(t.begin() + static_cast<std::ptrdiff_t>(lo),
                     t.begin() + static_cast<std::ptrdiff_t>(hi));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Sheaf build_network_sheaf(const NetworkProblem& p) {
  require_ready(p);
  FacePoset fp = face_poset(p.graph);
  SheafBuilder b(fp.poset);
  for (const auto& v : p.graph.vertices) {
    b.set_stalk(neighborhood_element(v), p.vertices.at(v).tuple_space);
    b.set_stalk(vertex_element(v), vertex_state_stalk(p, v));
  }
  for (const auto& v : p.graph.vertices)
    for (const auto& w : neighborhood(p.graph, v))
      b.set_restriction(neighborhood_element(v), vertex_element(w),
                        own_state_projection(p, v, w));
  return b.build();
}

Sheaf build_scored_network_sheaf(const NetworkProblem& p) {
  require_ready(p);
  FacePoset fp = face_poset(p.graph);
  std::vector<std::string> elements = fp.poset.elements();
  std::vector<std::pair<std::string, std::string>> rel;
  for (const auto& [a, b] : fp.poset.hasse())
    rel.emplace_back(fp.poset.name(a), fp.poset.name(b));
  for (const auto& e : fp.poset.elements()) {
    elements.push_back("R/" + e);
    elements.push_back("Z/" + e);
    rel.emplace_back(e, "R/" + e);
    rel.emplace_back("Z/" + e, "R/" + e);
  }
  SheafBuilder b(Poset(elements, rel));
  for (const auto& v : p.graph.vertices) {
    b.set_stalk(neighborhood_element(v), p.vertices.at(v).tuple_space);
    b.set_stalk(vertex_element(v), vertex_state_stalk(p, v));
  }
  for (const auto& e : fp.poset.elements()) {
    b.set_stalk("R/" + e, score_stalk());
    b.set_stalk("Z/" + e, Space::trivial());
    b.set_restriction("Z/" + e, "R/" + e, zero_score_map());
  }
  for (const auto& v : p.graph.vertices) {
    const auto& model = p.vertices.at(v);
    for (const auto& w : neighborhood(p.graph, v))
      b.set_restriction(neighborhood_element(v), vertex_element(w),
                        own_state_projection(p, v, w));
    b.set_restriction(neighborhood_element(v), "R/" + neighborhood_element(v),
                      model.control_objective);
    // The vertex stalk may carry a feasible set the plain objective domain
    // lacks; the map itself is unchanged.
    StalkMap so = model.state_objective;
    so.domain = vertex_state_stalk(p, v);
    b.set_restriction(vertex_element(v), "R/" + vertex_element(v), so);
  }
  return b.build();
}

namespace {

// Shared core of the two rollout builders.
Sheaf build_rollout_impl(const NetworkProblem& p, bool with_scores) {
  require_ready(p);
  FacePoset fp = face_poset(p.graph);
  const int H = p.horizon;

  std::vector<std::string> elements;
  std::vector<std::pair<std::string, std::string>> rel;
  for (int k = 0; k < H; ++k) {
    for (const auto& e : fp.poset.elements())
      elements.push_back(step_name(k, 'N', e));
    for (const auto& [a, b] : fp.poset.hasse())
      rel.emplace_back(step_name(k, 'N', fp.poset.name(a)),
                       step_name(k, 'N', fp.poset.name(b)));
    if (with_scores) {
      for (const auto& e : fp.poset.elements()) {
        elements.push_back(step_name(k, 'R', e));
        elements.push_back(step_name(k, 'Z', e));
        rel.emplace_back(step_name(k, 'N', e), step_name(k, 'R', e));
        rel.emplace_back(step_name(k, 'Z', e), step_name(k, 'R', e));
      }
    }
  }
  for (int k = 0; k <= H; ++k)
    for (const auto& v : p.graph.vertices)
      elements.push_back(step_name(k, 'L', neighborhood_element(v)));
  for (int k = 0; k < H; ++k)
    for (const auto& v : p.graph.vertices) {
      const std::string nu = step_name(k, 'N', neighborhood_element(v));
      // Landing layer k reads step k's own state, layer k+1 its prediction.
      rel.emplace_back(nu, step_name(k, 'L', neighborhood_element(v)));
      rel.emplace_back(nu, step_name(k + 1, 'L', neighborhood_element(v)));
    }

  SheafBuilder b(Poset(elements, rel));
  for (int k = 0; k < H; ++k) {
    for (const auto& v : p.graph.vertices) {
      const auto& model = p.vertices.at(v);
      b.set_stalk(step_name(k, 'N', neighborhood_element(v)),
                  model.tuple_space);
      b.set_stalk(step_name(k, 'N', vertex_element(v)),
                  vertex_state_stalk(p, v));
      for (const auto& w : neighborhood(p.graph, v))
        b.set_restriction(step_name(k, 'N', neighborhood_element(v)),
                          step_name(k, 'N', vertex_element(w)),
                          own_state_projection(p, v, w));
    }
    if (with_scores) {
      for (const auto& e : fp.poset.elements()) {
        b.set_stalk(step_name(k, 'R', e), score_stalk());
        b.set_stalk(step_name(k, 'Z', e), Space::trivial());
        b.set_restriction(step_name(k, 'Z', e), step_name(k, 'R', e),
                          zero_score_map());
      }
      for (const auto& v : p.graph.vertices) {
        const auto& model = p.vertices.at(v);
        b.set_restriction(step_name(k, 'N', neighborhood_element(v)),
                          step_name(k, 'R', neighborhood_element(v)),
                          model.control_objective);
        StalkMap so = model.state_objective;
        so.domain = vertex_state_stalk(p, v);
        b.set_restriction(step_name(k, 'N', vertex_element(v)),
                          step_name(k, 'R', vertex_element(v)), so);
      }
    }
  }
  for (int k = 0; k <= H; ++k)
    for (const auto& v : p.graph.vertices)
      b.set_stalk(step_name(k, 'L', neighborhood_element(v)),
                  vertex_state_stalk(p, v));
  for (int k = 0; k < H; ++k)
    for (const auto& v : p.graph.vertices) {
      const std::string nu = step_name(k, 'N', neighborhood_element(v));
      b.set_restriction(nu, step_name(k, 'L', neighborhood_element(v)),
                        own_state_projection(p, v, v));
      b.set_restriction(nu, step_name(k + 1, 'L', neighborhood_element(v)),
                        p.vertices.at(v).dynamics);
    }
  return b.build();
}

}  // namespace

Sheaf build_rollout_sheaf(const NetworkProblem& p) {
  return build_rollout_impl(p, false);
}

Sheaf build_scored_rollout_sheaf(const NetworkProblem& p) {
  return build_rollout_impl(p, true);
}

EncodedProblem encode_problem(const NetworkProblem& p) {
  require_ready(p);
  EncodedProblem e;
  e.problem = p;
  e.horizon = p.horizon;
  e.network = std::make_shared<Sheaf>(build_network_sheaf(p));
  e.scored_network = std::make_shared<Sheaf>(build_scored_network_sheaf(p));
  e.rollout = std::make_shared<Sheaf>(build_rollout_sheaf(p));
  e.scored_rollout = std::make_shared<Sheaf>(build_scored_rollout_sheaf(p));

  std::vector<std::string> land_elements;
  std::vector<Space> land_stalks;
  std::vector<std::string> face_elements;
  std::vector<Space> score_stalks;
  std::vector<Space> pin_stalks;
  for (const auto& v : p.graph.vertices) {
    land_elements.push_back(neighborhood_element(v));
    land_stalks.push_back(vertex_state_stalk(p, v));
  }
  {
    FacePoset fp = face_poset(p.graph);
    for (const auto& el : fp.poset.elements()) {
      face_elements.push_back(el);
      score_stalks.push_back(score_stalk());
      pin_stalks.push_back(Space::trivial());
    }
  }
  e.state_layer =
      std::make_shared<Sheaf>(antichain_sheaf(land_elements, land_stalks));
  e.score_layer =
      std::make_shared<Sheaf>(antichain_sheaf(face_elements, score_stalks));
  e.pin_layer =
      std::make_shared<Sheaf>(antichain_sheaf(face_elements, pin_stalks));

  OrderMap land_base;
  std::map<std::string, StalkMap> extract_parts, advance_parts;
  for (const auto& v : p.graph.vertices) {
    land_base.map[neighborhood_element(v)] = neighborhood_element(v);
    extract_parts[neighborhood_element(v)] = own_state_projection(p, v, v);
    advance_parts[neighborhood_element(v)] = p.vertices.at(v).dynamics;
  }
  e.extract = make_morphism(e.network, e.state_layer, land_base, extract_parts);
  e.advance = make_morphism(e.network, e.state_layer, land_base, advance_parts);

  OrderMap face_base;
  std::map<std::string, StalkMap> score_parts, pin_parts;
  for (const auto& v : p.graph.vertices) {
    face_base.map[neighborhood_element(v)] = neighborhood_element(v);
    face_base.map[vertex_element(v)] = vertex_element(v);
    score_parts[neighborhood_element(v)] = p.vertices.at(v).control_objective;
    StalkMap so = p.vertices.at(v).state_objective;
    so.domain = vertex_state_stalk(p, v);
    score_parts[vertex_element(v)] = so;
    pin_parts[neighborhood_element(v)] = zero_score_map();
    pin_parts[vertex_element(v)] = zero_score_map();
  }
  e.score = make_morphism(e.network, e.score_layer, face_base, score_parts);
  e.pin = make_morphism(e.pin_layer, e.score_layer, face_base, pin_parts);
  return e;
}

std::vector<std::string> network_step_elements(const EncodedProblem& e,
                                               int k) {
  std::vector<std::string> out;
  for (const auto& el : e.network->base().elements())
    out.push_back(step_name(k, 'N', el));
  return out;
}

Assignment restrict_network_step(const EncodedProblem& e, const Assignment& a,
                                 int k) {
  const Sheaf& big = *e.scored_rollout;
  if (a.values.size() != big.base().size())
    throw SupportMismatch("restrict_network_step: assignment not sized for "
                          "the scored rollout");
  Assignment out = make_assignment(*e.network);
  for (const auto& el : e.network->base().elements()) {
    const std::size_t from = big.base().index_of(step_name(k, 'N', el));
    if (a.values[from])
      out.values[e.network->base().index_of(el)] = a.values[from];
  }
  return out;
}

Assignment extend_sections(const EncodedProblem& e,
                           const std::vector<Assignment>& per_step) {
  const int H = e.horizon;
  if (static_cast<int>(per_step.size()) != H)
    throw SupportMismatch("extend_sections: expected one assignment per step");
  const Sheaf& big = *e.scored_rollout;
  const NetworkProblem& p = e.problem;
  Assignment out = make_assignment(big);

  for (int k = 0; k < H; ++k) {
    const Assignment& sec = per_step[static_cast<std::size_t>(k)];
    if (sec.values.size() != e.network->base().size() || !sec.total())
      throw NotGlobal("extend_sections: step " + std::to_string(k) +
                      " is not a total network assignment");
    for (const auto& el : e.network->base().elements()) {
      const Point& val = *sec.values[e.network->base().index_of(el)];
      set_value(big, out, step_name(k, 'N', el), val);
    }
    for (const auto& v : p.graph.vertices) {
      const auto& model = p.vertices.at(v);
      const Point& tuple =
          *sec.values[e.network->base().index_of(neighborhood_element(v))];
      const Point& own =
          *sec.values[e.network->base().index_of(vertex_element(v))];
      set_value(big, out, step_name(k, 'R', neighborhood_element(v)),
                model.control_objective(tuple));
      set_value(big, out, step_name(k, 'R', vertex_element(v)),
                model.state_objective(own));
      set_value(big, out, step_name(k, 'Z', neighborhood_element(v)), Point{});
      set_value(big, out, step_name(k, 'Z', vertex_element(v)), Point{});
      if (k == 0)
        set_value(big, out, step_name(0, 'L', neighborhood_element(v)), own);
      if (k + 1 < H) {
        const Assignment& nxt = per_step[static_cast<std::size_t>(k) + 1];
        set_value(big, out, step_name(k + 1, 'L', neighborhood_element(v)),
                  *nxt.values[e.network->base().index_of(vertex_element(v))]);
      } else {
        set_value(big, out, step_name(H, 'L', neighborhood_element(v)),
                  model.dynamics(tuple));
      }
    }
  }
  return out;
}

double step_objective(const EncodedProblem& e, const Assignment& section) {
  if (section.values.size() != e.network->base().size() || !section.total())
    throw NotGlobal("step_objective needs a total network assignment");
  double sq = 0.0;
  for (const auto& v : e.problem.graph.vertices) {
    const auto& model = e.problem.vertices.at(v);
    const Point& tuple =
        *section.values[e.network->base().index_of(neighborhood_element(v))];
    const Point& own =
        *section.values[e.network->base().index_of(vertex_element(v))];
    const double jc = model.control_objective(tuple)[0];
    const double js = model.state_objective(own)[0];
    sq += jc * jc + js * js;
  }
  return std::sqrt(sq);
}

std::optional<std::vector<Assignment>> enumerate_network_sections(
    const EncodedProblem& e, std::size_t limit) {
  const NetworkProblem& p = e.problem;
  const auto& verts = p.graph.vertices;
  std::vector<const std::vector<Point>*> choices;
  for (const auto& v : verts) {
    const auto& space = p.vertices.at(v).tuple_space;
    if (!space.feasible || !space.feasible->finite()) return std::nullopt;
    choices.push_back(space.feasible->points.get());
  }

  std::vector<Assignment> out;
  std::map<std::string, Point> pinned;      // vertex -> state forced so far
  std::vector<std::size_t> picks(verts.size(), 0);

  // Depth-first over per-neighborhood tuple choices; a choice pins the state
  // of every vertex it reads, and later choices must agree exactly. Every
  // vertex belongs to its own neighborhood, so at a leaf all states are
  // pinned.
  std::function<bool(std::size_t)> walk = [&](std::size_t level) -> bool {
    if (level == verts.size()) {
      Assignment sec = make_assignment(*e.network);
      for (std::size_t i = 0; i < verts.size(); ++i) {
        set_value(*e.network, sec, vertex_element(verts[i]),
                  pinned.at(verts[i]));
        set_value(*e.network, sec, neighborhood_element(verts[i]),
                  (*choices[i])[picks[i]]);
      }
      out.push_back(std::move(sec));
      return out.size() <= limit;
    }
    const std::string& v = verts[level];
    const auto& tuples = *choices[level];
    for (std::size_t pick = 0; pick < tuples.size(); ++pick) {
      const Point& x = tuples[pick];
      std::vector<std::string> added;
      bool ok = true;
      for (const auto& w : neighborhood(p.graph, v)) {
        auto [lo, hi] = tuple_state_span(p, v, w);
        Point sw(x.begin() + static_cast<std::ptrdiff_t>(lo),
                 x.begin() + static_cast<std::ptrdiff_t>(hi));
        auto it = pinned.find(w);
        if (it == pinned.end()) {
          pinned.emplace(w, std::move(sw));
          added.push_back(w);
        } else if (it->second != sw) {
          ok = false;
          break;
        }
      }
      if (ok) {
        picks[level] = pick;
        if (!walk(level + 1)) return false;
      }
      for (const auto& w : added) pinned.erase(w);
    }
    return true;
  };

  if (!walk(0)) return std::nullopt;  // exceeded limit
  return out;
}

}  // namespace netsheaf

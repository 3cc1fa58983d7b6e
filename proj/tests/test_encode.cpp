#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "netsheaf/encode.hpp"
#include "netsheaf/errors.hpp"
#include "netsheaf/netmodel.hpp"

using namespace netsheaf;

namespace {

// One vertex, binary control, own state in {1, 2, 3}, dynamics keep the
// state, objectives |s - 2| and c / 2.
NetworkProblem hold_state() {
  NetworkProblem p;
  p.graph = make_graph({"u"}, {{"u", "u"}});
  p.horizon = 2;

  VertexModel m;
  m.state_space = Space::reals(1, 0.0, 4.0);
  m.control_space = Space::reals(1, 0.0, 1.0);
  std::map<std::string, Space> states;
  states["u"] = m.state_space;
  m.tuple_space = tuple_signature(p.graph, states, m.control_space, "u");

  auto pts = std::make_shared<std::vector<Point>>();
  for (double c : {0.0, 1.0})
    for (double s : {1.0, 2.0, 3.0}) pts->push_back({c, s});
  std::sort(pts->begin(), pts->end());
  FeasibleSet f;
  f.points = std::move(pts);
  m.tuple_space.feasible = std::move(f);

  Matrix w(1, 2);
  w.at(0, 1) = 1.0;  // next own state = current own state
  m.dynamics = affine_map(m.tuple_space, m.state_space, w, {0.0});
  m.state_objective = scalar_map(
      m.state_space, [](const Point& s) { return std::abs(s[0] - 2.0); }, 1.0,
      "exact");
  m.control_objective = scalar_map(
      m.tuple_space, [](const Point& t) { return 0.5 * t[0]; }, 0.5, "exact");
  p.vertices.emplace("u", std::move(m));
  return p;
}

Assignment network_section(const EncodedProblem& e, double c, double s) {
  Assignment a = make_assignment(*e.network);
  set_value(*e.network, a, neighborhood_element("u"), {c, s});
  set_value(*e.network, a, vertex_element("u"), {s});
  return a;
}

}  // namespace

TEST_CASE("layer sizes of the unrolled sheaves") {
  EncodedProblem e = encode_problem(hold_state());
  CHECK(e.network->base().size() == 2);
  CHECK(e.scored_network->base().size() == 6);
  // 2 steps x 2 network elements + 3 landing layers x 1 element
  CHECK(e.rollout->base().size() == 7);
  // plus a score and a pin element per step and face element
  CHECK(e.scored_rollout->base().size() == 15);
  CHECK(e.horizon == 2);
}

TEST_CASE("network sections are exactly the feasible labelings") {
  EncodedProblem e = encode_problem(hold_state());
  auto sections = enumerate_network_sections(e);
  REQUIRE(sections.has_value());
  CHECK(sections->size() == 6);
  for (const auto& s : *sections) {
    CHECK(is_global_section(*e.network, s));
    const Point& t = get_value(*e.network, s, neighborhood_element("u"));
    const Point& own = get_value(*e.network, s, vertex_element("u"));
    CHECK(t[1] == own[0]);
  }
}

TEST_CASE("state candidates are the deduplicated own-state values") {
  NetworkProblem p = hold_state();
  auto cands = state_candidates(p, "u");
  REQUIRE(cands.has_value());
  REQUIRE(cands->size() == 3);
  CHECK((*cands)[0][0] == 1.0);
  CHECK((*cands)[2][0] == 3.0);
}

TEST_CASE("step objective combines both objectives in quadrature") {
  EncodedProblem e = encode_problem(hold_state());
  Assignment s = network_section(e, 1.0, 3.0);
  // state term |3-2| = 1, control term 0.5
  CHECK(step_objective(e, s) == doctest::Approx(std::sqrt(1.25)));
}

TEST_CASE("extension of dynamics-following sections scores in closed form") {
  EncodedProblem e = encode_problem(hold_state());
  // dynamics hold the state, so both steps must sit on the same own state
  std::vector<Assignment> steps = {network_section(e, 1.0, 2.0),
                                   network_section(e, 0.0, 2.0)};
  Assignment ext = extend_sections(e, steps);
  CHECK(ext.total());
  const double j0 = step_objective(e, steps[0]);
  const double j1 = step_objective(e, steps[1]);
  CHECK(j0 == doctest::Approx(0.5));
  CHECK(j1 == doctest::Approx(0.0));
  const double want = std::sqrt(j0 * j0 + j1 * j1);
  CHECK(consistency_radius(*e.scored_rollout, ext) ==
        doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("extensions of sections that fight the dynamics cost extra") {
  EncodedProblem e = encode_problem(hold_state());
  // jump from state 2 to state 3 even though the dynamics hold the state
  std::vector<Assignment> steps = {network_section(e, 0.0, 2.0),
                                   network_section(e, 0.0, 3.0)};
  Assignment ext = extend_sections(e, steps);
  // scores contribute |3-2|^2 and the broken landing hand-off another
  // |3-2|^2, so the radius is sqrt(2), not the bare objective 1
  CHECK(consistency_radius(*e.scored_rollout, ext) ==
        doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("restrict_network_step inverts the extension per step") {
  EncodedProblem e = encode_problem(hold_state());
  std::vector<Assignment> steps = {network_section(e, 1.0, 1.0),
                                   network_section(e, 0.0, 1.0)};
  Assignment ext = extend_sections(e, steps);
  for (int k = 0; k < 2; ++k) {
    Assignment back = restrict_network_step(e, ext, k);
    CHECK(assignment_distance(*e.network, back, steps[k]) ==
          doctest::Approx(0.0));
  }
}

TEST_CASE("prototype morphisms commute with their intent") {
  EncodedProblem e = encode_problem(hold_state());
  Assignment s = network_section(e, 1.0, 3.0);
  Assignment st = apply_morphism(e.extract, s);
  CHECK(get_value(*e.state_layer, st, neighborhood_element("u"))[0] == 3.0);
  Assignment nx = apply_morphism(e.advance, s);
  CHECK(get_value(*e.state_layer, nx, neighborhood_element("u"))[0] == 3.0);
  Assignment sc = apply_morphism(e.score, s);
  CHECK(get_value(*e.score_layer, sc, vertex_element("u"))[0] ==
        doctest::Approx(1.0));
  CHECK(get_value(*e.score_layer, sc, neighborhood_element("u"))[0] ==
        doctest::Approx(0.5));
}

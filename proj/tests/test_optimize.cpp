#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "netsheaf/encode.hpp"
#include "netsheaf/errors.hpp"
#include "netsheaf/optimize.hpp"

using namespace netsheaf;

namespace {

// One vertex, binary control, own state in {1, 2, 3}, dynamics keep the
// state. A zero-cost labeling exists (state 2, control off at every step).
NetworkProblem hold_state(int horizon) {
  NetworkProblem p;
  p.graph = make_graph({"u"}, {{"u", "u"}});
  p.horizon = horizon;

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
  w.at(0, 1) = 1.0;
  m.dynamics = affine_map(m.tuple_space, m.state_space, w, {0.0});
  m.state_objective = scalar_map(
      m.state_space, [](const Point& s) { return std::abs(s[0] - 2.0); }, 1.0,
      "exact");
  m.control_objective = scalar_map(
      m.tuple_space, [](const Point& t) { return 0.5 * t[0]; }, 0.5, "exact");
  p.vertices.emplace("u", std::move(m));
  return p;
}

}  // namespace

TEST_CASE("constrained solve finds the zero-cost labeling exhaustively") {
  EncodedProblem e = encode_problem(hold_state(2));
  SolveRequest req;
  req.seed = 5;
  SolveResult r = solve_constrained(e, req);
  CHECK(r.exhaustive);
  CHECK(r.converged);
  CHECK(r.objective == doctest::Approx(0.0));
  // 6 sections per step, two steps: the full scan costs 36 evaluations
  CHECK(r.evaluations == 36);
  CHECK(r.step_radii.size() == 2);
  for (double x : r.step_radii) CHECK(x == doctest::Approx(0.0));
  CHECK(is_global_section(*e.scored_rollout, r.assignment));
}

TEST_CASE("solves are deterministic in the seed") {
  EncodedProblem e = encode_problem(hold_state(2));
  SolveRequest req;
  req.seed = 42;
  req.budget = 4000;
  SolveResult a = solve_relaxed(e, req);
  SolveResult b = solve_relaxed(e, req);
  CHECK(a.objective == b.objective);
  CHECK(a.evaluations == b.evaluations);
  CHECK(assignment_distance(*e.scored_rollout, a.assignment, b.assignment) ==
        0.0);
}

TEST_CASE("relaxed never loses to constrained") {
  EncodedProblem e = encode_problem(hold_state(2));
  SolveRequest req;
  req.seed = 9;
  req.budget = 20000;
  SolveResult c = solve_constrained(e, req);
  SolveResult r = solve_relaxed(e, req);
  CHECK(r.objective <= c.objective + 1e-12);

  GapReport gap = relaxation_gap(e, c, r);
  CHECK(gap.relaxed_no_worse);
  CHECK(gap.chain_ok);
  CHECK(gap.rows.size() == 2);
  for (const auto& row : gap.rows)
    CHECK(row.radius_relaxed <= 2.0 * row.distance_step + 1e-9);
}

TEST_CASE("a starved budget reports non-convergence") {
  EncodedProblem e = encode_problem(hold_state(2));
  SolveRequest req;
  req.seed = 3;
  req.budget = 1;
  req.exhaustive_limit = 0;  // force the local search path
  SolveResult r = solve_constrained(e, req);
  CHECK(!r.converged);
  CHECK(r.evaluations <= 2);
}

TEST_CASE("warm starts are never made worse") {
  EncodedProblem e = encode_problem(hold_state(2));
  SolveRequest base;
  base.seed = 11;
  SolveResult best = solve_constrained(e, base);

  SolveRequest req;
  req.seed = 11;
  req.budget = 50;  // far too small to rediscover anything
  req.warm_starts.push_back(best.assignment);
  SolveResult r = solve_relaxed(e, req);
  CHECK(r.objective <= best.objective + 1e-12);
}

TEST_CASE("per-step certificates appear when a reference is supplied") {
  EncodedProblem e = encode_problem(hold_state(2));
  SolveRequest req;
  req.seed = 2;
  SolveResult c = solve_constrained(e, req);

  SolveRequest rel;
  rel.seed = 2;
  rel.budget = 20000;
  rel.reference = c.assignment;
  SolveResult r = solve_relaxed(e, rel);
  REQUIRE(r.certificate.size() == 2);
  for (const auto& cert : r.certificate) {
    CHECK(cert.bound_ok);
    CHECK(cert.radius <= 2.0 * cert.distance + 1e-9);
  }
}

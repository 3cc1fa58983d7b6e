#include <doctest.h>

#include <cmath>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "netsheaf/affine.hpp"
#include "netsheaf/boolrelax.hpp"
#include "netsheaf/errors.hpp"
#include "netsheaf/problemfile.hpp"

using namespace netsheaf;

namespace {

// Two vertices, b feeds a; purely affine, so the scheme reproduces the
// dynamics exactly.
AffineInstance small_affine() {
  AffineInstance inst;
  DirectedGraph g =
      make_graph({"a", "b"}, {{"a", "a"}, {"b", "b"}, {"b", "a"}});
  NominalStates ns;
  ns["a"] = {0.0, 2.0, 1.5, 0.0, 1.0};
  ns["b"] = {0.0, 2.0, 0.5, 0.0, 1.0};
  AffineDynamics dyn;
  dyn.order = g.vertices;
  dyn.a = Matrix(2, 2);
  dyn.a.at(1, 0) = 1.0;  // a copies b's state
  dyn.b_diag = {0.0, 2.0};  // b follows its control
  dyn.h = {0.0, 0.0};
  inst.problem = make_affine_problem(g, ns, dyn, 1);
  inst.nominals = std::move(ns);
  inst.dynamics = std::move(dyn);
  return inst;
}

// One vertex whose true dynamics clamp to [0, 10] while the affine
// reference passes the state through unchanged.
const char* kClampedFile = R"json({
  "schema_version": 1,
  "graph": {"vertices": ["f"], "edges": [["f", "f"]]},
  "horizon": 1,
  "vertices": {
    "f": {
      "controls": [0, 100],
      "feasible_states": [0, 10, 100],
      "nominal": {"failed": 0, "operational": 100, "threshold": 50},
      "dynamics": {
        "form": "saturating-affine",
        "state_coeffs": {"f": 1},
        "control": 0,
        "offset": 0,
        "clamp": [0, 10]
      },
      "state_objective": {"form": "abs", "target": 100, "scale": 100},
      "control_objective": {"form": "zero"}
    }
  },
  "solver": {"mode": "constrained", "seed": 1}
})json";

}  // namespace

TEST_CASE("affine schemes have an identically zero error budget") {
  AffineInstance inst = small_affine();
  CHECK(validate(inst.problem).empty());
  ThresholdingScheme ts =
      build_boolean_scheme(inst.problem, inst.nominals, inst.dynamics);
  validate_scheme(inst.problem, ts);

  for (const auto& v : inst.problem.graph.vertices) {
    SupValue w1 = omega1(inst.problem, ts, v);
    SupValue w2 = omega2(inst.problem, ts, v);
    CHECK(w1.value == 0.0);  // exact: same arithmetic on both paths
    CHECK(w2.value == 0.0);  // exact lifts invert the quantizers
    CHECK(w1.provenance == "exhaustive");
    auto [lhs, rhs] = thresholding_error_bound(inst.problem, ts, v);
    CHECK(lhs == 0.0);
    CHECK(rhs == 0.0);
  }

  EncodedProblem e = encode_problem(inst.problem);
  ErrorBudget budget = compute_error_budget(e, ts);
  CHECK(budget.eps == 0.0);
  CHECK(budget.rows.size() == 2);
  // network face poset: 4 elements, 3 strict pairs, 7 with reflexive ones
  CHECK(budget.structure == doctest::Approx(std::sqrt(7.0)));
}

TEST_CASE("clamped dynamics produce the hand-computed budget") {
  LoadedProblem lp = parse_problem(kClampedFile);
  REQUIRE(lp.nominals.has_value());
  REQUIRE(lp.dynamics.has_value());
  CHECK(!lp.exact_affine);

  // the affine reference disagrees with the clamped dynamics at state 100
  BooleanSchemeOptions strict;
  CHECK_THROWS_AS(
      build_boolean_scheme(lp.problem, *lp.nominals, *lp.dynamics, strict),
      InconsistentDynamics);

  BooleanSchemeOptions opt;
  opt.require_consistent_dynamics = false;
  ThresholdingScheme ts =
      build_boolean_scheme(lp.problem, *lp.nominals, *lp.dynamics, opt);
  validate_scheme(lp.problem, ts);

  // f_tilde keeps the Boolean state, but thresholded true dynamics are 0
  SupValue w1 = omega1(lp.problem, ts, "f");
  CHECK(w1.value == doctest::Approx(1.0));
  // round trip loses state 10 (lifts to 0)
  SupValue w2 = omega2(lp.problem, ts, "f");
  CHECK(w2.value == doctest::Approx(10.0));
  CHECK(sigma_norm(lp.problem, ts, "f").value ==
        doctest::Approx(std::sqrt(2.0)));
  CHECK(tau_f_norm(lp.problem, ts, "f").value == doctest::Approx(0.0));

  auto [lhs, rhs] = thresholding_error_bound(lp.problem, ts, "f");
  CHECK(rhs == doctest::Approx(std::sqrt(2.0)));  // 1 * |sigma| + 10 * 0
  CHECK(lhs == doctest::Approx(1.0));
  CHECK(lhs <= rhs + 1e-12);

  EncodedProblem e = encode_problem(lp.problem);
  ErrorBudget budget = compute_error_budget(e, ts);
  CHECK(budget.eps == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("boolean problem round trip and bound chain") {
  AffineInstance inst = small_affine();
  ThresholdingScheme ts =
      build_boolean_scheme(inst.problem, inst.nominals, inst.dynamics);
  EncodedProblem e = encode_problem(inst.problem);
  ThresholdedSheaves th = build_thresholded_sheaves(e, ts);

  // same shape on both sides
  CHECK(th.boolean.scored_rollout->base().size() ==
        e.scored_rollout->base().size());
  CHECK(validate(th.boolean.problem).empty());

  ErrorBudget budget = compute_error_budget(e, ts);
  CHECK(budget.eps == 0.0);

  // a Boolean assignment and a reference section through the true dynamics
  auto sections = enumerate_network_sections(th.boolean);
  REQUIRE(sections.has_value());
  REQUIRE(!sections->empty());
  std::vector<Assignment> bool_steps(static_cast<std::size_t>(e.horizon),
                                     sections->front());
  Assignment r = extend_sections(th.boolean, bool_steps);

  auto orig_sections = enumerate_network_sections(e);
  REQUIRE(orig_sections.has_value());
  std::vector<Assignment> orig_steps(static_cast<std::size_t>(e.horizon),
                                     orig_sections->front());
  Assignment s = extend_sections(e, orig_steps);

  auto chain = bound_chain(e, th, budget, r, s);
  REQUIRE(chain.size() == static_cast<std::size_t>(e.horizon));
  for (const auto& row : chain) {
    CHECK(row.lhs <= row.mid + 1e-9);
    CHECK(row.mid <= row.rhs + 1e-9);
  }

  // lifting a Boolean assignment lands on original stalks
  Assignment lifted = lift_assignment(e, th, r);
  CHECK(lifted.total());
  consistency_radius(*e.scored_rollout, lifted);  // must not throw
}

TEST_CASE("quantize and lift morphisms respect the declared defects") {
  AffineInstance inst = small_affine();
  ThresholdingScheme ts =
      build_boolean_scheme(inst.problem, inst.nominals, inst.dynamics);
  EncodedProblem e = encode_problem(inst.problem);
  ThresholdedSheaves th = build_thresholded_sheaves(e, ts);

  auto sections = enumerate_network_sections(e);
  REQUIRE(sections.has_value());
  for (const auto& sec : *sections) {
    Assignment q = apply_morphism(th.quantize, sec);
    // sections quantize to sections when the scheme is exact
    CHECK(is_global_section(*th.boolean.network, q));
    Assignment back = apply_morphism(th.lift, q);
    CHECK(assignment_distance(*e.network, back, sec) ==
          doctest::Approx(0.0));
  }
}

TEST_CASE("scheme validation rejects mismatched vertex packages") {
  AffineInstance inst = small_affine();
  ThresholdingScheme ts =
      build_boolean_scheme(inst.problem, inst.nominals, inst.dynamics);
  ThresholdingScheme missing = ts;
  missing.vertices.erase("b");
  CHECK_THROWS_AS(validate_scheme(inst.problem, missing), SchemeInvalid);

  ThresholdingScheme wrong = ts;
  wrong.vertices.at("a").tau =
      scalar_map(inst.problem.vertices.at("a").state_space,
                 [](const Point& s) { return 0.5 * s[0]; }, 0.5, "exact");
  CHECK_THROWS_AS(validate_scheme(inst.problem, wrong), SchemeInvalid);
}

// Encodes a network control problem as sheaves whose assignments carry
// candidate controls, states, predictions, and scores, and whose consistency
// radius is the optimization objective.
//
// Per-step prototypes (base = the graph's face poset, or an antichain):
//   network        stalks F_v over neighborhoods and state values over
//                  vertices, restrictions project tuples onto states; its
//                  global sections are exactly the feasible labelings
//   state_layer    bare state stalks over the neighborhoods, no relations
//   score_layer    one real score stalk per face element, no relations
//   pin_layer      zero-dimensional stalks used to pin scores toward 0
//   scored_network network with a score and a pin element attached per face
//                  element (score edges evaluate the objectives)
//
// Time-unrolled sheaves over horizon H:
//   rollout        H copies of network chained through H+1 state layers; the
//                  k-th landing layer is tied to step k by own-state
//                  projection and to step k-1 by the dynamics
//   scored_rollout rollout plus the per-step score/pin layers; minimizing its
//                  consistency radius is the control problem
//
// Element names: "t<k>/N/U:v", "t<k>/N/v:w", "t<k>/L/U:v", "t<k>/R/<elt>",
// "t<k>/Z/<elt>", where the single-step prototypes use the bare suffixes.
#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "netsheaf/netmodel.hpp"
#include "netsheaf/sheaf.hpp"

namespace netsheaf {

struct EncodedProblem {
  NetworkProblem problem;
  std::shared_ptr<const Sheaf> network;
  std::shared_ptr<const Sheaf> state_layer;
  std::shared_ptr<const Sheaf> score_layer;
  std::shared_ptr<const Sheaf> pin_layer;
  std::shared_ptr<const Sheaf> scored_network;
  std::shared_ptr<const Sheaf> rollout;
  std::shared_ptr<const Sheaf> scored_rollout;

  SheafMorphism extract;  // network -> state_layer, own-state projection
  SheafMorphism advance;  // network -> state_layer, dynamics step
  SheafMorphism score;    // network -> score_layer, objective evaluation
  SheafMorphism pin;      // pin_layer -> score_layer, constant zero

  int horizon = 1;
};

// Individual prototype builders (also reachable through encode_problem).
Sheaf build_network_sheaf(const NetworkProblem& p);
Sheaf build_scored_network_sheaf(const NetworkProblem& p);
Sheaf build_rollout_sheaf(const NetworkProblem& p);
Sheaf build_scored_rollout_sheaf(const NetworkProblem& p);

// Builds everything above plus the four prototype morphisms.
EncodedProblem encode_problem(const NetworkProblem& p);

// "t<k>/<layer>/<object>"
std::string step_name(int k, char layer, const std::string& object);

// Own-state values a vertex can take under its feasible tuples (deduplicated,
// sorted), when the feasible set is finite.
std::optional<std::vector<Point>> state_candidates(const NetworkProblem& p,
                                                   const std::string& v);

// Names of step k's network-layer elements inside the rollout sheaves.
std::vector<std::string> network_step_elements(const EncodedProblem& e, int k);

// Copies step k's network-layer values out of an assignment on the
// scored_rollout (or rollout) sheaf into an assignment on the network
// prototype. Missing values stay missing.
Assignment restrict_network_step(const EncodedProblem& e, const Assignment& a,
                                 int k);

// Canonical extension of per-step network assignments to the scored_rollout:
// score values are the objective images, pin values are the empty tuple,
// landing layer k < H carries step k's own-state projections, and the
// trailing layer carries the dynamics image of the last step. For per-step
// sections that follow the dynamics this is a global section of the rollout
// part, and the consistency radius of the result is sqrt(sum of squared
// per-step objective norms).
Assignment extend_sections(const EncodedProblem& e,
                           const std::vector<Assignment>& per_step);

// sqrt(sum_v state_objective^2 + control_objective^2) evaluated on a total
// network-prototype assignment.
double step_objective(const EncodedProblem& e, const Assignment& section);

// All global sections of the network prototype (exact agreement), or nullopt
// when some feasible set is not finite or more than `limit` sections exist.
std::optional<std::vector<Assignment>> enumerate_network_sections(
    const EncodedProblem& e, std::size_t limit = 1u << 20);

}  // namespace netsheaf

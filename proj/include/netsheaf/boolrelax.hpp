// Boolean discretization of a network control problem: per-vertex
// thresholding maps into Boolean spaces, lifts back, Boolean dynamics, and
// the error budget that bounds how far the discretized problem can drift
// from the original one.
//
// The discretized problem is a NetworkProblem in its own right (Boolean
// spaces, lifted objectives), so every encoder and solver in the library
// applies to it unchanged.
#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "netsheaf/encode.hpp"

namespace netsheaf {

// One vertex's discretization package.
struct VertexScheme {
  Space state_b;    // Boolean counterpart of the state space
  Space control_b;  // Boolean counterpart of the control space
  Space tuple_b;    // Boolean tuple space, carries the Boolean feasible set
  StalkMap tau;          // state -> Boolean state (thresholding)
  StalkMap chi;          // control -> Boolean control (quantization)
  StalkMap gamma;        // Boolean tuple -> tuple (lift)
  StalkMap gamma_state;  // Boolean state -> state (lift)
  StalkMap f_tilde;      // Boolean tuple -> Boolean next own state
};

struct ThresholdingScheme {
  std::map<std::string, VertexScheme> vertices;
};

// Componentwise quantization of v's input tuple: chi_v on the control block,
// tau_w on each neighborhood state block in canonical order.
StalkMap build_sigma(const NetworkProblem& p, const ThresholdingScheme& ts,
                     const std::string& v);

// Throws SchemeInvalid when a vertex entry is missing, dimensions or
// signatures are off, the Boolean feasible set is absent or not finite,
// quantization or lifting breaks feasibility, thresholding outputs are not
// Boolean, or gamma disagrees with gamma_state on the own-state block.
void validate_scheme(const NetworkProblem& p, const ThresholdingScheme& ts);

struct SupValue {
  double value = 0.0;
  std::string provenance;  // "exhaustive" over finite sets, else "estimated"
};

// sup over Boolean feasible tuples of |f_tilde(b) - tau(f(gamma(b)))|:
// the gap between the Boolean dynamics and the thresholded true dynamics.
SupValue omega1(const NetworkProblem& p, const ThresholdingScheme& ts,
                const std::string& v);

// sup over feasible tuples of |gamma(sigma(r)) - r|: the loss from a
// quantize-then-lift round trip.
SupValue omega2(const NetworkProblem& p, const ThresholdingScheme& ts,
                const std::string& v);

// sup over feasible tuples of |sigma(r)| and of |tau(f(r))|.
SupValue sigma_norm(const NetworkProblem& p, const ThresholdingScheme& ts,
                    const std::string& v);
SupValue tau_f_norm(const NetworkProblem& p, const ThresholdingScheme& ts,
                    const std::string& v);

// (sup over feasible tuples of |f_tilde(sigma(r)) - tau(f(r))|,
//  omega1 * |sigma| + omega2 * |tau o f|). The right side is the per-vertex
// error budget; for the schemes this library builds (exact lifts, so the
// round trip is lossless) the left side never exceeds it. Returned as a pair
// so callers can inspect both sides.
std::pair<double, double> thresholding_error_bound(const NetworkProblem& p,
                                                   const ThresholdingScheme& ts,
                                                   const std::string& v);

struct VertexBudget {
  std::string vertex;
  double omega1 = 0.0;
  double omega2 = 0.0;
  double sigma_norm = 0.0;
  double tau_f_norm = 0.0;
  double eps = 0.0;  // omega1 * sigma_norm + omega2 * tau_f_norm
  std::string provenance;
};

struct ErrorBudget {
  std::vector<VertexBudget> rows;  // one per vertex, vertex order
  double eps = 0.0;                // max over the rows
  // Largest Lipschitz bound over all lifts, dynamics, and objective maps.
  double lipschitz = 0.0;
  std::string lipschitz_provenance;
  // sqrt(number of related pairs, reflexive included, in the network base).
  double structure = 0.0;
};

ErrorBudget compute_error_budget(const EncodedProblem& e,
                                 const ThresholdingScheme& ts);

// The discretized problem plus the four translation morphisms.
struct ThresholdedSheaves {
  EncodedProblem boolean;  // fully encoded Boolean problem; same base posets
                           // and element names as the original encoding
  SheafMorphism quantize;         // network -> Boolean network (sigma, tau)
  SheafMorphism lift;             // Boolean network -> network (gamma)
  SheafMorphism quantize_states;  // state layer -> Boolean state layer (tau)
  SheafMorphism quantize_full;    // scored rollout -> Boolean scored rollout
};

// Validates the scheme, encodes the Boolean problem, and builds the
// morphisms. The stored defect bounds are measured exhaustively over the
// finite feasible sets.
ThresholdedSheaves build_thresholded_sheaves(const EncodedProblem& e,
                                             const ThresholdingScheme& ts);

// The Boolean problem as a NetworkProblem: Boolean spaces, f_tilde dynamics,
// objectives composed with the lifts.
NetworkProblem boolean_problem(const NetworkProblem& p,
                               const ThresholdingScheme& ts);

// Elementwise lift of a total Boolean scored-rollout assignment back to the
// original scored rollout: gamma on tuple stalks, gamma_state on state
// stalks, identity on score and pin stalks.
Assignment lift_assignment(const EncodedProblem& e,
                           const ThresholdedSheaves& th, const Assignment& r);

struct StepBound {
  int step = 0;
  double lhs = 0.0;  // Boolean-side network consistency radius
  double mid = 0.0;  // K * radius of the lifted assignment + C * eps
  double rhs = 0.0;  // 2K * distance from the reference section + C * eps
};

// Per-step discretization-error chain for an assignment r on the Boolean
// scored rollout against an assignment s on the original scored rollout that
// restricts to a network section on every step (NotASection otherwise).
// lhs <= mid <= rhs holds whenever the budget's Lipschitz bound dominates
// the lift and restriction maps on the values visited.
std::vector<StepBound> bound_chain(const EncodedProblem& e,
                                     const ThresholdedSheaves& th,
                                     const ErrorBudget& budget,
                                     const Assignment& r, const Assignment& s,
                                     const ExecPolicy& exec = {});

}  // namespace netsheaf

// Solvers that minimize the consistency radius of the scored rollout.
//
// Constrained mode searches the feasible labelings: per-step global sections
// of the network prototype, canonically extended (scores and landing layers
// propagated), so the objective it reports is the control objective plus any
// dynamics mismatch between consecutive sections. Exhaustive and globally
// optimal over that parameterization when the candidate space fits under the
// configured limit; otherwise a seeded multi-start local search (documented
// heuristic).
//
// Relaxed mode descends over every stalk coordinate of the scored rollout
// with no constraints: boolean coordinates by flips, real coordinates by an
// expanding finite-difference line search with a shrinking base step.
// Warm starts are never made worse: the result is at least as good as the
// best start supplied.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "netsheaf/encode.hpp"

namespace netsheaf {

enum class SolveMode { Constrained, Relaxed };

struct SolveRequest {
  std::uint64_t seed = 1;
  std::size_t budget = 200000;          // candidate / probe evaluations
  double tolerance = 1e-6;              // continuous step floor
  std::size_t exhaustive_limit = 4096;  // max candidates for the full scan
  int starts = 8;                       // multi-start count
  std::vector<Assignment> warm_starts;  // scored-rollout assignments
  // When set, the per-step certificate compares against this assignment
  // (it must restrict to a global section on every step's network part).
  std::optional<Assignment> reference;
  ExecPolicy exec;
};

struct StepCertificate {
  int step = 0;
  double radius = 0.0;    // local network consistency radius of the solution
  double distance = 0.0;  // distance to the reference on the same elements
  bool bound_ok = false;  // radius <= 2 * distance + 1e-9
};

struct SolveResult {
  Assignment assignment;  // total on the scored rollout
  double objective = 0.0; // consistency radius, recomputed in fixed order
  bool converged = false; // false when the budget ran out first
  bool exhaustive = false;
  std::size_t evaluations = 0;
  std::vector<double> step_radii;            // per-step network consistency
  std::vector<StepCertificate> certificate;  // empty without a reference
  std::vector<std::string> trace;
};

SolveResult solve_constrained(const EncodedProblem& e, const SolveRequest& req);
SolveResult solve_relaxed(const EncodedProblem& e, const SolveRequest& req);

struct GapRow {
  int step = 0;
  double radius_relaxed = 0.0;  // local consistency of the relaxed solution
  double distance_step = 0.0;   // constrained vs relaxed on this step
  bool section_bound_ok = false;  // radius_relaxed <= 2 * distance_step + 1e-9
};

struct GapReport {
  double objective_constrained = 0.0;
  double objective_relaxed = 0.0;
  double distance_total = 0.0;  // over the whole scored rollout
  std::vector<GapRow> rows;
  bool relaxed_no_worse = false;  // objective_relaxed <= constrained + 1e-9
  bool chain_ok = false;          // every row bound holds and step distances
                                  // stay under the total distance
};

// Per-step certificate table comparing the two solutions.
GapReport relaxation_gap(const EncodedProblem& e, const SolveResult& constrained,
                         const SolveResult& relaxed,
                         const ExecPolicy& exec = {});

}  // namespace netsheaf

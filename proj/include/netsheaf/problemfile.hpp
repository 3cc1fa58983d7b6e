// Problem files: a versioned JSON schema describing the graph, per-vertex
// dynamics and objectives, optional nominal levels for the Boolean scheme,
// and solver defaults. See README.md for the field-by-field description.
#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "netsheaf/affine.hpp"
#include "netsheaf/netmodel.hpp"

namespace netsheaf {

struct SolverSettings {
  std::string mode = "constrained";  // constrained | relaxed | both
  std::uint64_t seed = 1;
  std::size_t budget = 200000;
  double tolerance = 1e-6;
};

struct LoadedProblem {
  NetworkProblem problem;
  // Present when every vertex carries a nominal block; enables boolify.
  std::optional<NominalStates> nominals;
  // The affine part of the dynamics (the thresholding scheme discretizes
  // against this even when the file's dynamics clamp).
  std::optional<AffineDynamics> dynamics;
  // True when every vertex uses the plain affine form, so the scheme's
  // round trip reproduces the dynamics exactly.
  bool exact_affine = true;
  SolverSettings solver;
};

// Parses the JSON text. Throws ParseError on malformed input, unknown
// fields of the wrong shape, unresolved cross-references, or coefficients
// that do not respect the edge sparsity. Structural problems that parse
// fine (a missing self-edge, say) surface later through the model types.
LoadedProblem parse_problem(const std::string& text);

// Reads the file and parses it. ParseError when the file cannot be read.
LoadedProblem load_problem(const std::string& path);

}  // namespace netsheaf

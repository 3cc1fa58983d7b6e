// Report drivers behind the CLI subcommands. Each returns the exit code
// plus the same content twice: aligned text tables for the terminal and a
// structured document for --output. Both renderings are byte-stable for
// identical inputs and settings.
#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace netsheaf {

struct RunOptions {
  std::optional<std::string> mode;  // constrained | relaxed | both
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> budget;
  std::optional<double> tolerance;
  int threads = 1;
  // Recompute every reported number and bound flag through independent
  // library calls; any mismatch or failed flag turns the exit code to 1.
  bool verify = false;
};

struct RunResult {
  int exit_code = 0;
  std::string text;
  std::string json;
};

// Parse + model checks. Exit 0 iff the validation report is empty.
RunResult run_validate(const std::string& path, const RunOptions& opt);

// Consistency-radius minimization in the requested mode(s); "both" adds the
// constrained/relaxed gap certificate. Exit 3 when a budget ran out first
// (the partial result is still reported).
RunResult run_solve(const std::string& path, const RunOptions& opt);

// Thresholding scheme, per-vertex error budget, and the discretization
// bound chain for a solved assignment pair. Needs the nominal blocks.
RunResult run_boolify(const std::string& path, const RunOptions& opt);

// Everything above in one document.
RunResult run_report(const std::string& path, const RunOptions& opt);

}  // namespace netsheaf

#include <cstdio>
#include <fstream>
#include <string>

#include <CLI11.hpp>

#include "netsheaf/errors.hpp"
#include "netsheaf/report.hpp"

namespace {

struct Args {
  std::string command;
  std::string problem;
  std::string output;
  netsheaf::RunOptions options;
};

void add_common(CLI::App* sub, Args& args) {
  sub->add_option("problem", args.problem, "problem file (JSON, schema 1)")
      ->required();
  sub->add_option("--mode", args.options.mode,
                  "solver mode: constrained, relaxed, or both")
      ->check(CLI::IsMember({"constrained", "relaxed", "both"}));
  sub->add_option("--seed", args.options.seed, "solver seed");
  sub->add_option("--budget", args.options.budget,
                  "evaluation budget for the solvers");
  sub->add_option("--tolerance", args.options.tolerance,
                  "continuous descent step floor");
  sub->add_option("--threads", args.options.threads,
                  "thread cap for the reduction kernels (default 1)");
  sub->add_option("--output", args.output,
                  "also write the report as structured JSON to this path");
  sub->add_flag("--verify", args.options.verify,
                "recompute every reported number and assert the bound flags");
}

int dispatch(const Args& args) {
  netsheaf::RunResult result;
  if (args.command == "validate")
    result = netsheaf::run_validate(args.problem, args.options);
  else if (args.command == "solve")
    result = netsheaf::run_solve(args.problem, args.options);
  else if (args.command == "boolify")
    result = netsheaf::run_boolify(args.problem, args.options);
  else
    result = netsheaf::run_report(args.problem, args.options);
  std::fputs(result.text.c_str(), stdout);
  if (!args.output.empty()) {
    std::ofstream out(args.output, std::ios::binary);
    if (!out) {
      std::fprintf(stderr, "error: cannot write %s\n", args.output.c_str());
      return 1;
    }
    out << result.json;
  }
  return result.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "netsheaf: encode network control problems as sheaves, minimize the "
      "consistency radius, and bound Boolean discretization error"};
  app.require_subcommand(1);
  Args args;
  add_common(app.add_subcommand(
                 "validate", "parse the problem and check model assumptions"),
             args);
  add_common(app.add_subcommand(
                 "solve", "minimize the consistency radius of the encoding"),
             args);
  add_common(
      app.add_subcommand(
          "boolify",
          "build the Boolean thresholding, its error budget, and the "
          "discretization bound chain"),
      args);
  add_common(app.add_subcommand("report", "run everything in one document"),
             args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  args.command = app.get_subcommands().front()->get_name();

  try {
    return dispatch(args);
  } catch (const netsheaf::ParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}

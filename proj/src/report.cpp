#include "netsheaf/report.hpp"

#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "netsheaf/boolrelax.hpp"
#include "netsheaf/encode.hpp"
#include "netsheaf/errors.hpp"
#include "netsheaf/netmodel.hpp"
#include "netsheaf/optimize.hpp"
#include "netsheaf/problemfile.hpp"

namespace netsheaf {
namespace {

using nlohmann::json;

constexpr double kSlack = 1e-9;

std::string fmt_num(double x) {
  if (x == 0.0) x = 0.0;  // drops the sign of -0
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

double jnum(double x) { return x == 0.0 ? 0.0 : x; }

std::string yesno(bool b) { return b ? "yes" : "no"; }
std::string passfail(bool b) { return b ? "pass" : "FAIL"; }

std::string render_table(const std::vector<std::string>& head,
                         const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width(head.size());
  for (std::size_t i = 0; i < head.size(); ++i) width[i] = head[i].size();
  for (const auto& row : rows)
    for (std::size_t i = 0; i < row.size(); ++i)
      width[i] = std::max(width[i], row[i].size());
  std::ostringstream out;
  auto line = [&](const std::vector<std::string>& cells) {
    out << " ";
    for (std::size_t i = 0; i < cells.size(); ++i) {
      out << " " << cells[i];
      if (i + 1 < cells.size())
        out << std::string(width[i] - cells[i].size(), ' ');
    }
    out << "\n";
  };
  line(head);
  for (const auto& row : rows) line(row);
  return out.str();
}

struct Settings {
  std::string mode;
  std::uint64_t seed = 1;
  std::size_t budget = 200000;
  double tolerance = 1e-6;
  int threads = 1;
};

Settings merge(const LoadedProblem& lp, const RunOptions& opt,
               const std::string& fallback_mode) {
  Settings s;
  s.mode = opt.mode.value_or(fallback_mode.empty() ? lp.solver.mode
                                                   : fallback_mode);
  if (s.mode != "constrained" && s.mode != "relaxed" && s.mode != "both")
    throw ParseError("unknown mode '" + s.mode +
                     "' (use constrained, relaxed, or both)");
  s.seed = opt.seed.value_or(lp.solver.seed);
  s.budget = opt.budget.value_or(lp.solver.budget);
  s.tolerance = opt.tolerance.value_or(lp.solver.tolerance);
  s.threads = opt.threads < 1 ? 1 : opt.threads;
  return s;
}

json settings_json(const Settings& s) {
  json j;
  j["mode"] = s.mode;
  j["seed"] = s.seed;
  j["budget"] = s.budget;
  j["tolerance"] = jnum(s.tolerance);
  j["threads"] = s.threads;
  return j;
}

std::string settings_line(const Settings& s) {
  std::ostringstream out;
  out << "settings: mode=" << s.mode << " seed=" << s.seed
      << " budget=" << s.budget << " tolerance=" << fmt_num(s.tolerance)
      << " threads=" << s.threads << "\n";
  return out.str();
}

SolveRequest make_request(const Settings& s) {
  SolveRequest req;
  req.seed = s.seed;
  req.budget = s.budget;
  req.tolerance = s.tolerance;
  req.exec.threads = s.threads;
  req.exec.deterministic = true;
  return req;
}

struct Doc {
  json j;
  std::string text;
  int exit_code = 0;
  bool all_pass = true;
};

Doc build_validate(const LoadedProblem& lp) {
  Doc d;
  const NetworkProblem& p = lp.problem;
  auto issues = validate(p);
  std::size_t edge_count = p.graph.edges.size();
  std::ostringstream out;
  out << "problem: " << p.graph.vertices.size() << " vertices, " << edge_count
      << " edges, horizon " << p.horizon << "\n";
  d.j["vertices"] = p.graph.vertices.size();
  d.j["edges"] = edge_count;
  d.j["horizon"] = p.horizon;
  d.j["issues"] = json::array();
  if (issues.empty()) {
    out << "validation: ok\n";
    d.j["ok"] = true;
  } else {
    out << "validation: " << issues.size() << " issue"
        << (issues.size() == 1 ? "" : "s") << "\n";
    std::vector<std::vector<std::string>> rows;
    for (const auto& i : issues) {
      rows.push_back({i.vertex.empty() ? "-" : i.vertex, i.assumption,
                      i.detail});
      json ji;
      ji["vertex"] = i.vertex;
      ji["assumption"] = i.assumption;
      ji["detail"] = i.detail;
      d.j["issues"].push_back(ji);
    }
    out << render_table({"vertex", "assumption", "detail"}, rows);
    d.j["ok"] = false;
    d.exit_code = 1;
  }
  d.text = out.str();
  return d;
}

json solve_result_json(const SolveResult& r) {
  json j;
  j["objective"] = jnum(r.objective);
  j["converged"] = r.converged;
  j["exhaustive"] = r.exhaustive;
  j["evaluations"] = r.evaluations;
  j["step_radii"] = json::array();
  for (double x : r.step_radii) j["step_radii"].push_back(jnum(x));
  j["trace"] = r.trace;
  return j;
}

std::string solve_result_text(const std::string& mode, const SolveResult& r) {
  std::ostringstream out;
  out << "solve (" << mode << ")\n";
  out << "  objective: " << fmt_num(r.objective) << "\n";
  out << "  converged: " << yesno(r.converged)
      << "  exhaustive: " << yesno(r.exhaustive)
      << "  evaluations: " << r.evaluations << "\n";
  std::vector<std::vector<std::string>> rows;
  for (std::size_t k = 0; k < r.step_radii.size(); ++k)
    rows.push_back({std::to_string(k), fmt_num(r.step_radii[k])});
  out << render_table({"step", "radius"}, rows);
  return out.str();
}

Doc build_solve(const EncodedProblem& e, const Settings& s) {
  Doc d;
  SolveRequest req = make_request(s);
  std::ostringstream out;
  std::optional<SolveResult> constrained, relaxed;
  if (s.mode == "constrained" || s.mode == "both") {
    constrained = solve_constrained(e, req);
    d.j["constrained"] = solve_result_json(*constrained);
    out << solve_result_text("constrained", *constrained);
    if (!constrained->converged) d.exit_code = 3;
  }
  if (s.mode == "relaxed" || s.mode == "both") {
    relaxed = solve_relaxed(e, req);
    d.j["relaxed"] = solve_result_json(*relaxed);
    if (out.tellp() > 0) out << "\n";
    out << solve_result_text("relaxed", *relaxed);
    if (!relaxed->converged) d.exit_code = 3;
  }
  if (constrained && relaxed) {
    GapReport gap = relaxation_gap(e, *constrained, *relaxed, req.exec);
    json jg;
    jg["objective_constrained"] = jnum(gap.objective_constrained);
    jg["objective_relaxed"] = jnum(gap.objective_relaxed);
    jg["distance_total"] = jnum(gap.distance_total);
    jg["relaxed_no_worse"] = gap.relaxed_no_worse;
    jg["chain_ok"] = gap.chain_ok;
    jg["rows"] = json::array();
    out << "\nrelaxation gap\n";
    out << "  objective constrained: " << fmt_num(gap.objective_constrained)
        << "\n";
    out << "  objective relaxed: " << fmt_num(gap.objective_relaxed) << "\n";
    out << "  distance total: " << fmt_num(gap.distance_total) << "\n";
    std::vector<std::vector<std::string>> rows;
    for (const auto& row : gap.rows) {
      rows.push_back({std::to_string(row.step), fmt_num(row.radius_relaxed),
                      fmt_num(row.distance_step),
                      passfail(row.section_bound_ok)});
      json jr;
      jr["step"] = row.step;
      jr["radius_relaxed"] = jnum(row.radius_relaxed);
      jr["distance_step"] = jnum(row.distance_step);
      jr["section_bound_ok"] = row.section_bound_ok;
      jg["rows"].push_back(jr);
      if (!row.section_bound_ok) d.all_pass = false;
    }
    out << render_table({"step", "radius(relaxed)", "distance", "bound"},
                        rows);
    out << "  relaxed no worse: " << passfail(gap.relaxed_no_worse) << "\n";
    out << "  chain: " << passfail(gap.chain_ok) << "\n";
    if (!gap.relaxed_no_worse || !gap.chain_ok) d.all_pass = false;
    d.j["gap"] = jg;
  }
  d.text = out.str();
  return d;
}

Doc build_boolify(const LoadedProblem& lp, const EncodedProblem& e,
                  const Settings& s) {
  Doc d;
  if (!lp.nominals)
    throw SchemeInvalid(
        "thresholding needs a nominal block on every vertex");
  BooleanSchemeOptions bso;
  bso.require_consistent_dynamics = lp.exact_affine;
  bso.tolerance = 1e-9;
  ThresholdingScheme ts =
      build_boolean_scheme(lp.problem, *lp.nominals, *lp.dynamics, bso);
  ThresholdedSheaves th = build_thresholded_sheaves(e, ts);
  ErrorBudget budget = compute_error_budget(e, ts);

  std::ostringstream out;
  out << "thresholding error budget\n";
  std::vector<std::vector<std::string>> rows;
  d.j["budget"]["rows"] = json::array();
  for (const auto& row : budget.rows) {
    auto [lhs, rhs] = thresholding_error_bound(lp.problem, ts, row.vertex);
    const bool ok = lhs <= rhs + kSlack;
    rows.push_back({row.vertex, fmt_num(row.omega1), fmt_num(row.omega2),
                    fmt_num(row.sigma_norm), fmt_num(row.tau_f_norm),
                    fmt_num(row.eps), fmt_num(lhs), passfail(ok),
                    row.provenance});
    json jr;
    jr["vertex"] = row.vertex;
    jr["omega1"] = jnum(row.omega1);
    jr["omega2"] = jnum(row.omega2);
    jr["sigma_norm"] = jnum(row.sigma_norm);
    jr["tau_f_norm"] = jnum(row.tau_f_norm);
    jr["eps"] = jnum(row.eps);
    jr["round_trip_lhs"] = jnum(lhs);
    jr["round_trip_ok"] = ok;
    jr["provenance"] = row.provenance;
    d.j["budget"]["rows"].push_back(jr);
    if (!ok) d.all_pass = false;
  }
  out << render_table({"vertex", "omega1", "omega2", "sigma", "tau.f", "eps",
                       "lhs", "bound", "provenance"},
                      rows);
  out << "  eps: " << fmt_num(budget.eps) << "  lipschitz: "
      << fmt_num(budget.lipschitz) << " (" << budget.lipschitz_provenance
      << ")  structure: " << fmt_num(budget.structure) << "\n";
  d.j["budget"]["eps"] = jnum(budget.eps);
  d.j["budget"]["lipschitz"] = jnum(budget.lipschitz);
  d.j["budget"]["lipschitz_provenance"] = budget.lipschitz_provenance;
  d.j["budget"]["structure"] = jnum(budget.structure);

  SolveRequest req = make_request(s);
  SolveResult original = solve_constrained(e, req);
  SolveResult boolean = solve_constrained(th.boolean, req);
  if (!original.converged || !boolean.converged) d.exit_code = 3;
  d.j["objective_original"] = jnum(original.objective);
  d.j["objective_boolean"] = jnum(boolean.objective);
  out << "\nsolved pair\n";
  out << "  objective original: " << fmt_num(original.objective) << "\n";
  out << "  objective boolean: " << fmt_num(boolean.objective) << "\n";

  std::vector<StepBound> chain = bound_chain(
      e, th, budget, boolean.assignment, original.assignment, req.exec);
  out << "\ndiscretization bound chain\n";
  std::vector<std::vector<std::string>> crows;
  d.j["chain"] = json::array();
  for (const auto& b : chain) {
    const bool ok1 = b.lhs <= b.mid + kSlack;
    const bool ok2 = b.mid <= b.rhs + kSlack;
    crows.push_back({std::to_string(b.step), fmt_num(b.lhs), fmt_num(b.mid),
                     fmt_num(b.rhs), passfail(ok1), passfail(ok2)});
    json jb;
    jb["step"] = b.step;
    jb["lhs"] = jnum(b.lhs);
    jb["mid"] = jnum(b.mid);
    jb["rhs"] = jnum(b.rhs);
    jb["lhs_le_mid"] = ok1;
    jb["mid_le_rhs"] = ok2;
    d.j["chain"].push_back(jb);
    if (!ok1 || !ok2) d.all_pass = false;
  }
  out << render_table({"step", "lhs", "mid", "rhs", "lhs<=mid", "mid<=rhs"},
                      crows);
  d.text = out.str();
  return d;
}

std::string finish_json(json& root) { return root.dump(2) + "\n"; }

void apply_verify(Doc& first, const Doc& second, bool requested,
                  std::ostringstream& text, json& root) {
  if (!requested) return;
  const bool stable = first.j.dump() == second.j.dump();
  const bool ok = stable && first.all_pass;
  root["verify"]["stable"] = stable;
  root["verify"]["all_pass"] = first.all_pass;
  root["verify"]["ok"] = ok;
  text << "\nverify: "
       << (ok ? "ok (recomputed, all bounds hold)"
              : (stable ? "FAILED (a bound check failed)"
                        : "FAILED (recomputation disagrees)"))
       << "\n";
  if (!ok) first.exit_code = 1;
}

}  // namespace

RunResult run_validate(const std::string& path, const RunOptions& opt) {
  (void)opt;
  LoadedProblem lp = load_problem(path);
  Doc d = build_validate(lp);
  json root;
  root["schema_version"] = 1;
  root["command"] = "validate";
  root["problem"] = path;
  root["validation"] = d.j;
  RunResult r;
  r.exit_code = d.exit_code;
  std::ostringstream out;
  out << d.text;
  r.text = out.str();
  r.json = finish_json(root);
  return r;
}

RunResult run_solve(const std::string& path, const RunOptions& opt) {
  LoadedProblem lp = load_problem(path);
  Doc v = build_validate(lp);
  json root;
  root["schema_version"] = 1;
  root["command"] = "solve";
  root["problem"] = path;
  root["validation"] = v.j;
  std::ostringstream out;
  out << v.text;
  RunResult r;
  if (v.exit_code != 0) {
    r.exit_code = 1;
    r.text = out.str();
    r.json = finish_json(root);
    return r;
  }
  Settings s = merge(lp, opt, "");
  root["settings"] = settings_json(s);
  out << settings_line(s) << "\n";
  EncodedProblem e = encode_problem(lp.problem);
  Doc d = build_solve(e, s);
  out << d.text;
  root["solve"] = d.j;
  if (opt.verify) {
    Doc again = build_solve(e, s);
    apply_verify(d, again, true, out, root);
  }
  r.exit_code = d.exit_code;
  r.text = out.str();
  r.json = finish_json(root);
  return r;
}

RunResult run_boolify(const std::string& path, const RunOptions& opt) {
  LoadedProblem lp = load_problem(path);
  Doc v = build_validate(lp);
  json root;
  root["schema_version"] = 1;
  root["command"] = "boolify";
  root["problem"] = path;
  root["validation"] = v.j;
  std::ostringstream out;
  out << v.text;
  RunResult r;
  if (v.exit_code != 0) {
    r.exit_code = 1;
    r.text = out.str();
    r.json = finish_json(root);
    return r;
  }
  Settings s = merge(lp, opt, "constrained");
  root["settings"] = settings_json(s);
  out << settings_line(s) << "\n";
  EncodedProblem e = encode_problem(lp.problem);
  Doc d = build_boolify(lp, e, s);
  out << d.text;
  root["thresholding"] = d.j;
  if (opt.verify) {
    Doc again = build_boolify(lp, e, s);
    apply_verify(d, again, true, out, root);
  }
  r.exit_code = d.exit_code;
  r.text = out.str();
  r.json = finish_json(root);
  return r;
}

RunResult run_report(const std::string& path, const RunOptions& opt) {
  LoadedProblem lp = load_problem(path);
  Doc v = build_validate(lp);
  json root;
  root["schema_version"] = 1;
  root["command"] = "report";
  root["problem"] = path;
  root["validation"] = v.j;
  std::ostringstream out;
  out << v.text;
  RunResult r;
  if (v.exit_code != 0) {
    r.exit_code = 1;
    r.text = out.str();
    r.json = finish_json(root);
    return r;
  }
  Settings s = merge(lp, opt, "both");
  root["settings"] = settings_json(s);
  out << settings_line(s);
  EncodedProblem e = encode_problem(lp.problem);
  out << "elements: network " << e.network->base().size()
      << ", scored network " << e.scored_network->base().size()
      << ", scored rollout " << e.scored_rollout->base().size() << "\n\n";
  root["elements"]["network"] = e.network->base().size();
  root["elements"]["scored_network"] = e.scored_network->base().size();
  root["elements"]["scored_rollout"] = e.scored_rollout->base().size();

  Doc d = build_solve(e, s);
  out << d.text;
  root["solve"] = d.j;
  int exit_code = d.exit_code;
  bool all_pass = d.all_pass;

  if (lp.nominals) {
    Settings bs = s;
    bs.mode = "constrained";
    Doc b = build_boolify(lp, e, bs);
    out << "\n" << b.text;
    root["thresholding"] = b.j;
    exit_code = std::max(exit_code, b.exit_code);
    all_pass = all_pass && b.all_pass;
  } else {
    out << "\nthresholding: skipped (no nominal blocks)\n";
    root["thresholding"] = nullptr;
  }

  if (opt.verify) {
    Doc d2 = build_solve(e, s);
    bool stable = d.j.dump() == d2.j.dump();
    if (lp.nominals) {
      Settings bs = s;
      bs.mode = "constrained";
      Doc b2 = build_boolify(lp, e, bs);
      stable = stable && root["thresholding"].dump() == b2.j.dump();
      all_pass = all_pass && b2.all_pass;
    }
    const bool ok = stable && all_pass;
    root["verify"]["stable"] = stable;
    root["verify"]["all_pass"] = all_pass;
    root["verify"]["ok"] = ok;
    out << "\nverify: "
        << (ok ? "ok (recomputed, all bounds hold)"
               : (stable ? "FAILED (a bound check failed)"
                         : "FAILED (recomputation disagrees)"))
        << "\n";
    if (!ok) exit_code = 1;
  }

  r.exit_code = exit_code;
  r.text = out.str();
  r.json = finish_json(root);
  return r;
}

}  // namespace netsheaf

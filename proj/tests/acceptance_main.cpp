// Acceptance gate for the complete build. Ten independent checks, one
// [PASS]/[FAIL] line each, nonzero exit when anything fails:
//
//    1  network-sheaf sections match the feasible labelings, exactly
//    2  scored consistency radius equals the root-sum-square objective
//    3  section bound holds across the bundled sheaves
//    4  morphism bound holds through all translation maps
//    5  per-vertex thresholding error stays inside its budget
//    6  discretization bound chain holds on the bundled instances
//    7  affine discretizations have identically zero error
//    8  vectorized and componentwise Boolean dynamics agree bit for bit
//    9  solvers match brute force; relaxation never loses
//   10  reports are byte-identical across reruns
//
// Usage: acceptance --cli <solver binary> --problems <dir> --workdir <dir>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "netsheaf/affine.hpp"
#include "netsheaf/boolrelax.hpp"
#include "netsheaf/encode.hpp"
#include "netsheaf/errors.hpp"
#include "netsheaf/optimize.hpp"
#include "netsheaf/problemfile.hpp"

using namespace netsheaf;

namespace {

struct CheckFailed {
  std::string what;
};

#define REQUIRE(cond, detail)                                   \
  do {                                                          \
    if (!(cond)) throw CheckFailed{std::string("") + (detail)}; \
  } while (0)

std::string fmt(double x) {
  char b[40];
  std::snprintf(b, sizeof b, "%.17g", x);
  return b;
}

// ------------------------------------------------------------------
// fixtures

struct Bundle {
  std::string name;
  LoadedProblem lp;
  EncodedProblem enc;
  std::optional<ThresholdingScheme> scheme;
  std::optional<ThresholdedSheaves> sheaves;
  std::optional<ErrorBudget> budget;
};

std::vector<Bundle> load_bundles(const std::string& problems_dir) {
  std::vector<Bundle> out;
  for (const char* file :
       {"lighting.json", "pick_state.json", "stuck_fixture.json"}) {
    Bundle b;
    b.name = file;
    b.lp = load_problem(problems_dir + "/" + file);
    b.enc = encode_problem(b.lp.problem);
    if (b.lp.nominals && b.lp.dynamics) {
      BooleanSchemeOptions opt;
      opt.require_consistent_dynamics = b.lp.exact_affine;
      opt.tolerance = 1e-9;
      b.scheme = build_boolean_scheme(b.lp.problem, *b.lp.nominals,
                                      *b.lp.dynamics, opt);
      b.sheaves = build_thresholded_sheaves(b.enc, *b.scheme);
      b.budget = compute_error_budget(b.enc, *b.scheme);
    }
    out.push_back(std::move(b));
  }
  return out;
}

// ------------------------------------------------------------------
// random draws, always from the finite feasible data

const Point& pick(const std::vector<Point>& pts, Rng& rng) {
  return pts[rng() % pts.size()];
}

const std::vector<Point>& feasible_tuples(const NetworkProblem& p,
                                          const std::string& v) {
  const auto& f = p.vertices.at(v).tuple_space.feasible;
  REQUIRE(f && f->finite(), "vertex " + v + " has no finite feasible set");
  return *f->points;
}

std::map<std::string, std::vector<Point>> all_state_candidates(
    const NetworkProblem& p) {
  std::map<std::string, std::vector<Point>> out;
  for (const auto& v : p.graph.vertices) {
    auto c = state_candidates(p, v);
    REQUIRE(c.has_value(), "vertex " + v + " has no enumerable states");
    out.emplace(v, std::move(*c));
  }
  return out;
}

// Total assignment on the network prototype: a random feasible tuple per
// neighborhood, a random candidate state per vertex, no consistency implied.
Assignment random_network_assignment(
    const EncodedProblem& e,
    const std::map<std::string, std::vector<Point>>& states, Rng& rng) {
  Assignment a = make_assignment(*e.network);
  for (const auto& v : e.problem.graph.vertices) {
    set_value(*e.network, a, neighborhood_element(v),
              pick(feasible_tuples(e.problem, v), rng));
    set_value(*e.network, a, vertex_element(v), pick(states.at(v), rng));
  }
  return a;
}

// Total assignment on the scored rollout. Element names follow the
// "t<k>/<layer>/<object>" convention; objects carry their vertex after a
// two-character prefix.
Assignment random_scored_rollout_assignment(
    const EncodedProblem& e,
    const std::map<std::string, std::vector<Point>>& states, Rng& rng) {
  const Sheaf& s = *e.scored_rollout;
  Assignment a = make_assignment(s);
  std::uniform_real_distribution<double> score(0.0, 2.0);
  for (const auto& name : s.base().elements()) {
    const auto p1 = name.find('/');
    const auto p2 = name.find('/', p1 + 1);
    REQUIRE(p1 != std::string::npos && p2 != std::string::npos,
            "unexpected element name " + name);
    const char layer = name[p1 + 1];
    const std::string object = name.substr(p2 + 1);
    const std::string vertex = object.substr(2);
    switch (layer) {
      case 'N':
        if (object[0] == 'U')
          set_value(s, a, name, pick(feasible_tuples(e.problem, vertex), rng));
        else
          set_value(s, a, name, pick(states.at(vertex), rng));
        break;
      case 'L':
        set_value(s, a, name, pick(states.at(vertex), rng));
        break;
      case 'R':
        set_value(s, a, name, {score(rng)});
        break;
      case 'Z':
        set_value(s, a, name, Point{});
        break;
      default:
        REQUIRE(false, "unexpected layer in element " + name);
    }
  }
  return a;
}

std::string point_key(const Point& p) {
  std::string out;
  for (double x : p) {
    out += fmt(x);
    out += ',';
  }
  out += ';';
  return out;
}

// ------------------------------------------------------------------
// criterion 1: sections of the network sheaf vs feasible labelings

// Independent enumeration: walk the full product of per-vertex feasible
// tuples and keep the combinations whose shared state blocks agree.
std::set<std::string> enumerate_labeling_keys(const NetworkProblem& p) {
  const auto& verts = p.graph.vertices;
  const std::size_t n = verts.size();
  std::vector<const std::vector<Point>*> tuples(n);
  for (std::size_t i = 0; i < n; ++i)
    tuples[i] = &feasible_tuples(p, verts[i]);

  std::map<std::string, std::size_t> vid;
  for (std::size_t i = 0; i < n; ++i) vid[verts[i]] = i;

  // per vertex: the own-state span and, per neighbor, (neighbor id, span)
  std::vector<std::pair<std::size_t, std::size_t>> own(n);
  std::vector<std::vector<std::pair<std::size_t,
                                    std::pair<std::size_t, std::size_t>>>>
      nbrs(n);
  for (std::size_t i = 0; i < n; ++i) {
    own[i] = tuple_state_span(p, verts[i], verts[i]);
    for (const auto& w : neighborhood(p.graph, verts[i]))
      nbrs[i].push_back({vid.at(w), tuple_state_span(p, verts[i], w)});
  }

  std::set<std::string> keys;
  std::vector<std::size_t> idx(n, 0);
  while (true) {
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i) {
      const Point& ti = (*tuples[i])[idx[i]];
      for (const auto& [j, span] : nbrs[i]) {
        const Point& tj = (*tuples[j])[idx[j]];
        const auto [jlo, jhi] = own[j];
        for (std::size_t k = 0; k < span.second - span.first; ++k) {
          if (ti[span.first + k] != tj[jlo + k]) {
            ok = false;
            break;
          }
        }
        if (!ok) break;
        (void)jhi;
      }
    }
    if (ok) {
      std::string key;
      for (std::size_t i = 0; i < n; ++i) key += point_key((*tuples[i])[idx[i]]);
      keys.insert(std::move(key));
    }
    std::size_t d = 0;
    while (d < n && ++idx[d] == tuples[d]->size()) idx[d++] = 0;
    if (d == n) break;
  }
  return keys;
}

std::string section_key(const EncodedProblem& e, const Assignment& s) {
  std::string key;
  for (const auto& v : e.problem.graph.vertices)
    key += point_key(get_value(*e.network, s, neighborhood_element(v)));
  return key;
}

void criterion_sections_match_labelings() {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    AffineInstance inst = random_affine_instance(
        seed, {.max_vertices = 4, .horizon = 1, .edge_density = 0.5});
    EncodedProblem e = encode_problem(inst.problem);

    std::set<std::string> labelings = enumerate_labeling_keys(inst.problem);
    auto sections = enumerate_network_sections(e);
    REQUIRE(sections.has_value(), "section enumeration refused instance " +
                                      std::to_string(seed));

    std::set<std::string> section_keys;
    for (const auto& s : *sections) {
      REQUIRE(is_global_section(*e.network, s),
              "enumerated non-section on instance " + std::to_string(seed));
      section_keys.insert(section_key(e, s));
    }
    REQUIRE(section_keys.size() == sections->size(),
            "duplicate sections on instance " + std::to_string(seed));
    REQUIRE(section_keys == labelings,
            "sections and labelings differ on instance " +
                std::to_string(seed) + " (" +
                std::to_string(sections->size()) + " vs " +
                std::to_string(labelings.size()) + ")");
  }
}

// ------------------------------------------------------------------
// criterion 2: consistency radius of a canonically scored section

void criterion_scored_radius_closed_form() {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    AffineInstance inst = random_affine_instance(
        seed, {.max_vertices = 4, .horizon = 1, .edge_density = 0.5});
    EncodedProblem e = encode_problem(inst.problem);
    auto sections = enumerate_network_sections(e);
    REQUIRE(sections.has_value() && !sections->empty(),
            "no sections on instance " + std::to_string(seed));

    Rng rng(0x5c07e5 + seed);
    const Sheaf& m = *e.scored_network;
    for (int trial = 0; trial < 100; ++trial) {
      const Assignment& sec = (*sections)[rng() % sections->size()];

      // canonical extension built by hand, scores = objective images
      Assignment a = make_assignment(m);
      double j2 = 0.0;
      for (const auto& v : inst.problem.graph.vertices) {
        const VertexModel& vm = inst.problem.vertices.at(v);
        const Point& tuple = get_value(*e.network, sec, neighborhood_element(v));
        const Point& ownv = get_value(*e.network, sec, vertex_element(v));
        const double jc = vm.control_objective(tuple)[0];
        const double js = vm.state_objective(ownv)[0];
        set_value(m, a, neighborhood_element(v), tuple);
        set_value(m, a, vertex_element(v), ownv);
        set_value(m, a, "R/" + neighborhood_element(v), {jc});
        set_value(m, a, "R/" + vertex_element(v), {js});
        set_value(m, a, "Z/" + neighborhood_element(v), Point{});
        set_value(m, a, "Z/" + vertex_element(v), Point{});
        j2 += jc * jc + js * js;
      }
      const double radius = consistency_radius(m, a);
      const double closed = std::sqrt(j2);
      REQUIRE(std::abs(radius - closed) <= 1e-12,
              "radius " + fmt(radius) + " vs closed form " + fmt(closed) +
                  " on instance " + std::to_string(seed));
    }
  }
}

// ------------------------------------------------------------------
// criterion 3: section bound on the bundled sheaves

double restriction_bound(const Sheaf& s) {
  double best = 0.0;
  for (const auto& [x, y] : s.strict_pairs()) {
    LipschitzInfo info = lipschitz_info(s.restriction(x, y), 64, 0xb012dULL);
    best = std::max(best, info.value);
  }
  return best;
}

void criterion_section_bound(const std::vector<Bundle>& bundles) {
  std::size_t checked = 0;
  auto run_sheaf = [&](const EncodedProblem& enc, const std::string& label) {
    auto sections = enumerate_network_sections(enc);
    REQUIRE(sections.has_value() && !sections->empty(),
            "no sections for " + label);
    const double K = restriction_bound(*enc.network);
    auto states = all_state_candidates(enc.problem);
    Rng rng(0x5ec7 + checked);
    for (int trial = 0; trial < 200; ++trial) {
      const Assignment& sec = (*sections)[rng() % sections->size()];
      Assignment a = random_network_assignment(enc, states, rng);
      auto [lhs, rhs] = section_bound_check(*enc.network, sec, a, K);
      REQUIRE(lhs <= rhs + 1e-9, label + ": " + fmt(lhs) + " > " + fmt(rhs));
      ++checked;
    }
  };
  for (const auto& b : bundles) {
    run_sheaf(b.enc, b.name);
    if (b.sheaves) run_sheaf(b.sheaves->boolean, b.name + " (boolean)");
  }
  REQUIRE(checked >= 1000,
          "only " + std::to_string(checked) + " pairs checked");
}

// ------------------------------------------------------------------
// criterion 4: morphism bound through every translation map

void criterion_morphism_bound(const std::vector<Bundle>& bundles) {
  std::size_t checked = 0;
  auto run_morphism = [&](const SheafMorphism& m,
                          const std::function<Assignment(Rng&)>& draw,
                          const std::string& label) {
    const double K = component_lipschitz_bound(m).value;
    const double eps = m.defect_bound;
    Rng rng(0xb0b + checked);
    for (int trial = 0; trial < 34; ++trial) {
      Assignment a = draw(rng);
      auto [lhs, rhs] = morphism_bound_check(m, a, K, eps);
      REQUIRE(lhs <= rhs + 1e-9, label + ": " + fmt(lhs) + " > " + fmt(rhs));
      ++checked;
    }
  };

  for (const auto& b : bundles) {
    auto states = all_state_candidates(b.lp.problem);
    auto net_draw = [&](Rng& rng) {
      return random_network_assignment(b.enc, states, rng);
    };
    run_morphism(b.enc.extract, net_draw, b.name + " state projection");
    run_morphism(b.enc.advance, net_draw, b.name + " dynamics step");
    run_morphism(b.enc.score, net_draw, b.name + " objective scorer");

    if (b.sheaves) {
      auto bool_states = all_state_candidates(b.sheaves->boolean.problem);
      auto bool_draw = [&](Rng& rng) {
        return random_network_assignment(b.sheaves->boolean, bool_states, rng);
      };
      auto rollout_draw = [&](Rng& rng) {
        return random_scored_rollout_assignment(b.enc, states, rng);
      };
      run_morphism(b.sheaves->quantize, net_draw, b.name + " quantizer");
      run_morphism(b.sheaves->lift, bool_draw, b.name + " lift");
      run_morphism(b.sheaves->quantize_full, rollout_draw,
                   b.name + " full quantizer");
    }
  }
  REQUIRE(checked >= 500,
          "only " + std::to_string(checked) + " assignments checked");
}

// ------------------------------------------------------------------
// criterion 5: per-vertex thresholding error under its budget

void criterion_thresholding_error(const std::vector<Bundle>& bundles) {
  std::size_t schemes = 0;
  for (const auto& b : bundles) {
    if (!b.scheme) continue;
    ++schemes;
    for (const auto& v : b.lp.problem.graph.vertices) {
      const auto& feas = feasible_tuples(b.lp.problem, v);
      REQUIRE(feas.size() <= 65536,
              b.name + "/" + v + ": feasible set too large to enumerate");
      REQUIRE(omega1(b.lp.problem, *b.scheme, v).provenance == "exhaustive",
              b.name + "/" + v + ": dynamics gap was not scanned exhaustively");
      auto [lhs, eps_v] = thresholding_error_bound(b.lp.problem, *b.scheme, v);
      REQUIRE(lhs <= eps_v + 1e-12,
              b.name + "/" + v + ": " + fmt(lhs) + " > " + fmt(eps_v));
    }
  }
  REQUIRE(schemes >= 2, "fewer than two bundled schemes were available");
}

// ------------------------------------------------------------------
// criterion 6: discretization chain on random assignment pairs

void criterion_bound_chain(const std::vector<Bundle>& bundles) {
  std::size_t schemes = 0;
  for (const auto& b : bundles) {
    if (!b.sheaves) continue;
    ++schemes;
    auto states = all_state_candidates(b.lp.problem);
    auto bool_states = all_state_candidates(b.sheaves->boolean.problem);
    auto sections = enumerate_network_sections(b.enc);
    REQUIRE(sections.has_value() && !sections->empty(),
            b.name + ": no sections to extend");

    Rng rng(0xc6a1 + schemes);
    for (int trial = 0; trial < 100; ++trial) {
      Assignment r =
          random_scored_rollout_assignment(b.sheaves->boolean, bool_states, rng);
      std::vector<Assignment> per_step;
      for (int k = 0; k < b.enc.horizon; ++k)
        per_step.push_back((*sections)[rng() % sections->size()]);
      Assignment s = extend_sections(b.enc, per_step);

      auto rows = bound_chain(b.enc, *b.sheaves, *b.budget, r, s);
      REQUIRE(rows.size() == static_cast<std::size_t>(b.enc.horizon),
              b.name + ": wrong number of chain rows");
      for (const auto& row : rows) {
        REQUIRE(row.lhs <= row.mid + 1e-9,
                b.name + " step " + std::to_string(row.step) + ": lhs " +
                    fmt(row.lhs) + " > mid " + fmt(row.mid));
        REQUIRE(row.mid <= row.rhs + 1e-9,
                b.name + " step " + std::to_string(row.step) + ": mid " +
                    fmt(row.mid) + " > rhs " + fmt(row.rhs));
      }
    }
  }
  REQUIRE(schemes >= 2, "fewer than two bundled schemes were available");
}

// ------------------------------------------------------------------
// criterion 7: affine discretizations have zero error

void criterion_affine_zero_error() {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    AffineInstance inst = random_affine_instance(
        seed, {.max_vertices = 5, .horizon = 1, .edge_density = 0.5});
    ThresholdingScheme ts =
        build_boolean_scheme(inst.problem, inst.nominals, inst.dynamics);
    for (const auto& v : inst.problem.graph.vertices) {
      SupValue w1 = omega1(inst.problem, ts, v);
      SupValue w2 = omega2(inst.problem, ts, v);
      const double eps_v = w1.value * sigma_norm(inst.problem, ts, v).value +
                           w2.value * tau_f_norm(inst.problem, ts, v).value;
      REQUIRE(eps_v <= 1e-12, "instance " + std::to_string(seed) + "/" + v +
                                  ": eps " + fmt(eps_v));
      auto [lhs, rhs] = thresholding_error_bound(inst.problem, ts, v);
      REQUIRE(lhs == 0.0, "instance " + std::to_string(seed) + "/" + v +
                              ": lhs " + fmt(lhs) + " is not exactly zero");
      (void)rhs;
    }
  }
}

// ------------------------------------------------------------------
// criterion 8: vectorized vs componentwise Boolean dynamics

void criterion_vectorized_agreement() {
  for (std::uint64_t seed = 31; seed <= 36; ++seed) {
    AffineInstance inst = random_affine_instance(
        seed, {.max_vertices = 4, .horizon = 1, .edge_density = 0.6});
    ThresholdingScheme ts =
        build_boolean_scheme(inst.problem, inst.nominals, inst.dynamics);
    VectorizedBooleanDynamics vd =
        vectorize(inst.problem.graph, inst.dynamics, inst.nominals);
    StalkMap whole = vectorized_boolean_dynamics(vd);

    const std::size_t n = vd.order.size();
    for (std::size_t mask = 0; mask < (std::size_t{1} << (2 * n)); ++mask) {
      Point packed(2 * n);
      for (std::size_t i = 0; i < 2 * n; ++i)
        packed[i] = (mask >> i) & 1 ? 1.0 : 0.0;
      const Point img = whole(packed);

      for (std::size_t vi = 0; vi < n; ++vi) {
        const std::string& v = vd.order[vi];
        std::vector<std::string> nbrs = neighborhood(inst.problem.graph, v);
        Point tup(1 + nbrs.size());
        tup[0] = packed[n + dyn_index(inst.dynamics, v)];
        for (std::size_t k = 0; k < nbrs.size(); ++k)
          tup[1 + k] = packed[dyn_index(inst.dynamics, nbrs[k])];
        const Point own = ts.vertices.at(v).f_tilde(tup);
        REQUIRE(img[vi] == own[0],
                "instance " + std::to_string(seed) + "/" + v + " at mask " +
                    std::to_string(mask) + ": " + fmt(img[vi]) + " vs " +
                    fmt(own[0]));
      }
    }
  }
}

// ------------------------------------------------------------------
// criterion 9: solver vs brute force, relaxation never loses

struct BruteResult {
  double objective = 0.0;
  std::size_t combos = 0;
};

std::optional<BruteResult> brute_force_min(const EncodedProblem& e,
                                           std::size_t cap) {
  auto secs = enumerate_network_sections(e);
  if (!secs || secs->empty()) return std::nullopt;
  const std::size_t S = secs->size();
  const int H = e.horizon;
  std::size_t combos = 1;
  for (int k = 0; k < H; ++k) {
    combos *= S;
    if (combos > cap) return std::nullopt;
  }
  std::vector<std::size_t> idx(static_cast<std::size_t>(H), 0);
  double best = std::numeric_limits<double>::infinity();
  while (true) {
    std::vector<Assignment> per_step;
    per_step.reserve(idx.size());
    for (std::size_t k : idx) per_step.push_back((*secs)[k]);
    const double radius =
        consistency_radius(*e.scored_rollout, extend_sections(e, per_step));
    if (radius < best) best = radius;
    std::size_t d = 0;
    while (d < idx.size() && ++idx[d] == S) idx[d++] = 0;
    if (d == idx.size()) break;
  }
  return BruteResult{best, combos};
}

void criterion_solver_oracles(const std::vector<Bundle>& bundles) {
  std::size_t matched = 0;
  auto check_exhaustive = [&](const EncodedProblem& e,
                              const std::string& label) {
    auto brute = brute_force_min(e, 4096);
    if (!brute) return;
    SolveRequest req;
    req.seed = 17;
    SolveResult r = solve_constrained(e, req);
    REQUIRE(r.exhaustive, label + ": solver skipped the full scan");
    REQUIRE(r.objective == brute->objective,
            label + ": solver " + fmt(r.objective) + " vs brute force " +
                fmt(brute->objective) + " over " +
                std::to_string(brute->combos) + " candidates");
    ++matched;
  };

  for (const auto& b : bundles) check_exhaustive(b.enc, b.name);
  for (std::uint64_t seed = 101; seed <= 112; ++seed) {
    AffineInstance inst = random_affine_instance(
        seed, {.max_vertices = 3, .horizon = 2, .edge_density = 0.5});
    check_exhaustive(encode_problem(inst.problem),
                     "instance " + std::to_string(seed));
  }
  REQUIRE(matched >= 8, "only " + std::to_string(matched) +
                            " instances were small enough to brute force");

  for (std::uint64_t seed = 201; seed <= 250; ++seed) {
    AffineInstance inst = random_affine_instance(
        seed, {.max_vertices = 3, .horizon = 2, .edge_density = 0.5});
    EncodedProblem e = encode_problem(inst.problem);
    SolveRequest req;
    req.seed = 9;
    req.budget = 6000;
    SolveResult c = solve_constrained(e, req);
    SolveResult r = solve_relaxed(e, req);
    REQUIRE(r.objective <= c.objective,
            "instance " + std::to_string(seed) + ": relaxed " +
                fmt(r.objective) + " > constrained " + fmt(c.objective));
  }
}

// ------------------------------------------------------------------
// criterion 10: byte-identical reports

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good(), "cannot read " + p.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string quoted(const std::string& s) { return "\"" + s + "\""; }

void criterion_report_determinism(const std::string& cli,
                                  const std::string& problems,
                                  const std::string& workdir) {
  namespace fs = std::filesystem;
  fs::create_directories(workdir);

  auto run_twice = [&](const std::string& subcommand,
                       const std::string& problem,
                       const std::string& extra_flags,
                       const std::string& tag) {
    std::vector<std::string> texts, jsons;
    for (int round = 0; round < 2; ++round) {
      const fs::path jout =
          fs::path(workdir) / (tag + "_" + std::to_string(round) + ".json");
      const fs::path tout =
          fs::path(workdir) / (tag + "_" + std::to_string(round) + ".txt");
      const std::string cmd =
          quoted(cli) + " " + subcommand + " " +
          quoted(problems + "/" + problem) + " " + extra_flags + " --output " +
          quoted(jout.string()) + " > " + quoted(tout.string()) + " 2>&1";
      const int rc = std::system(cmd.c_str());
      REQUIRE(rc == 0, tag + " round " + std::to_string(round) +
                           " exited with status " + std::to_string(rc));
      texts.push_back(read_file(tout));
      jsons.push_back(read_file(jout));
    }
    REQUIRE(!texts[0].empty(), tag + ": empty report");
    REQUIRE(texts[0] == texts[1], tag + ": text reports differ");
    REQUIRE(jsons[0] == jsons[1], tag + ": structured reports differ");
  };

  run_twice("solve", "lighting.json", "--mode both --seed 11", "solve_light");
  run_twice("solve", "pick_state.json", "--seed 5", "solve_pick");
  run_twice("boolify", "lighting.json", "--seed 11", "boolify_light");
  run_twice("boolify", "stuck_fixture.json", "--seed 4", "boolify_stuck");
}

// ------------------------------------------------------------------

struct Args {
  std::string cli;
  std::string problems;
  std::string workdir;
};

Args parse_args(int argc, char** argv) {
  Args a;
  for (int i = 1; i + 1 < argc; i += 2) {
    const std::string flag = argv[i];
    if (flag == "--cli")
      a.cli = argv[i + 1];
    else if (flag == "--problems")
      a.problems = argv[i + 1];
    else if (flag == "--workdir")
      a.workdir = argv[i + 1];
  }
  if (a.cli.empty() || a.problems.empty() || a.workdir.empty()) {
    std::fprintf(stderr,
                 "usage: acceptance --cli <binary> --problems <dir> "
                 "--workdir <dir>\n");
    std::exit(2);
  }
  return a;
}

int run(int id, const char* name, double time_cap_s,
        const std::function<void()>& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  std::string failure;
  try {
    fn();
  } catch (const CheckFailed& f) {
    failure = f.what;
  } catch (const std::exception& ex) {
    failure = std::string("unexpected error: ") + ex.what();
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  if (failure.empty() && time_cap_s > 0.0 && elapsed > time_cap_s)
    failure = "took " + fmt(elapsed) + " s, cap is " + fmt(time_cap_s) + " s";
  if (failure.empty()) {
    std::printf("[PASS] %2d %-58s (%.2f s)\n", id, name, elapsed);
    return 0;
  }
  std::printf("[FAIL] %2d %-58s %s\n", id, name, failure.c_str());
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  Args args = parse_args(argc, argv);

  std::vector<Bundle> bundles;
  try {
    bundles = load_bundles(args.problems);
  } catch (const std::exception& ex) {
    std::fprintf(stderr, "could not load the bundled problems: %s\n",
                 ex.what());
    return 1;
  }

  int failures = 0;
  failures += run(1, "network sections match the feasible labelings", 5.0,
                  criterion_sections_match_labelings);
  failures += run(2, "scored radius equals the root-sum-square objective",
                  10.0, criterion_scored_radius_closed_form);
  failures += run(3, "section bound holds on the bundled sheaves", 0.0,
                  [&] { criterion_section_bound(bundles); });
  failures += run(4, "morphism bound holds through the translation maps", 0.0,
                  [&] { criterion_morphism_bound(bundles); });
  failures += run(5, "thresholding error stays inside the vertex budgets", 0.0,
                  [&] { criterion_thresholding_error(bundles); });
  failures += run(6, "discretization chain holds on the bundled instances",
                  0.0, [&] { criterion_bound_chain(bundles); });
  failures += run(7, "affine discretizations have exactly zero error", 30.0,
                  criterion_affine_zero_error);
  failures += run(8, "vectorized and componentwise dynamics agree", 0.0,
                  criterion_vectorized_agreement);
  failures += run(9, "solvers match brute force and relaxation never loses",
                  0.0, [&] { criterion_solver_oracles(bundles); });
  failures += run(10, "reports are byte-identical across reruns", 0.0, [&] {
    criterion_report_determinism(args.cli, args.problems, args.workdir);
  });

  if (failures == 0) {
    std::printf("all 10 criteria passed\n");
    return 0;
  }
  std::printf("%d of 10 criteria failed\n", failures);
  return 1;
}

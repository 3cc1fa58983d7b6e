#include "netsheaf/problemfile.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <memory>
#include <set>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "netsheaf/errors.hpp"
#include "netsheaf/graph.hpp"
#include "netsheaf/space.hpp"

namespace netsheaf {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ParseError(where.empty() ? what : where + ": " + what);
}

const json& member(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(where, std::string("missing field '") + key + "'");
  return *it;
}

const json* maybe(const json& obj, const char* key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

void check_keys(const json& obj, const std::string& where,
                std::initializer_list<const char*> allowed) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* k : allowed)
      if (item.key() == k) {
        known = true;
        break;
      }
    if (!known) fail(where, "unknown field '" + item.key() + "'");
  }
}

double num(const json& j, const std::string& where) {
  if (!j.is_number()) fail(where, "expected a number");
  return j.get<double>();
}

std::string str(const json& j, const std::string& where) {
  if (!j.is_string()) fail(where, "expected a string");
  return j.get<std::string>();
}

struct VertexFile {
  double control_off = 0.0;
  double control_on = 1.0;
  std::vector<double> states;
  std::optional<NominalVertex> nominal;
  std::string form;
  std::map<std::string, double> state_coeffs;
  double control_coeff = 0.0;
  double offset = 0.0;
  double clamp_lo = 0.0;
  double clamp_hi = 0.0;
  const json* state_objective = nullptr;
  const json* control_objective = nullptr;
};

VertexFile parse_vertex(const json& jv, const std::string& where) {
  if (!jv.is_object()) fail(where, "expected an object");
  check_keys(jv, where,
             {"controls", "feasible_states", "nominal", "dynamics",
              "state_objective", "control_objective"});
  VertexFile out;

  const json& jc = member(jv, "controls", where);
  if (!jc.is_array() || jc.size() != 2)
    fail(where + ".controls", "expected [off, on]");
  out.control_off = num(jc[0], where + ".controls");
  out.control_on = num(jc[1], where + ".controls");
  if (out.control_off == out.control_on)
    fail(where + ".controls", "the two settings must differ");

  if (const json* jn = maybe(jv, "nominal")) {
    const std::string w = where + ".nominal";
    if (!jn->is_object()) fail(w, "expected an object");
    check_keys(*jn, w, {"failed", "operational", "threshold"});
    NominalVertex nv;
    nv.failed = num(member(*jn, "failed", w), w + ".failed");
    nv.operational = num(member(*jn, "operational", w), w + ".operational");
    nv.threshold = num(member(*jn, "threshold", w), w + ".threshold");
    nv.control_off = out.control_off;
    nv.control_on = out.control_on;
    out.nominal = nv;
  }

  if (const json* js = maybe(jv, "feasible_states")) {
    const std::string w = where + ".feasible_states";
    if (!js->is_array() || js->empty()) fail(w, "expected a nonempty array");
    for (const auto& e : *js) out.states.push_back(num(e, w));
    std::sort(out.states.begin(), out.states.end());
    out.states.erase(std::unique(out.states.begin(), out.states.end()),
                     out.states.end());
  } else if (out.nominal) {
    out.states = {out.nominal->failed, out.nominal->operational};
    std::sort(out.states.begin(), out.states.end());
  } else {
    fail(where, "needs feasible_states or a nominal block");
  }

  const json& jd = member(jv, "dynamics", where);
  const std::string wd = where + ".dynamics";
  if (!jd.is_object()) fail(wd, "expected an object");
  check_keys(jd, wd, {"form", "state_coeffs", "control", "offset", "clamp"});
  out.form = str(member(jd, "form", wd), wd + ".form");
  if (out.form != "affine" && out.form != "saturating-affine")
    fail(wd + ".form", "unknown form '" + out.form +
                           "' (use affine or saturating-affine)");
  if (const json* jsc = maybe(jd, "state_coeffs")) {
    const std::string w = wd + ".state_coeffs";
    if (!jsc->is_object()) fail(w, "expected an object");
    for (const auto& item : jsc->items())
      out.state_coeffs[item.key()] = num(item.value(), w + "." + item.key());
  }
  if (const json* jb = maybe(jd, "control"))
    out.control_coeff = num(*jb, wd + ".control");
  if (const json* jh = maybe(jd, "offset"))
    out.offset = num(*jh, wd + ".offset");
  const json* jclamp = maybe(jd, "clamp");
  if (out.form == "saturating-affine") {
    if (!jclamp) fail(wd, "the saturating form needs a clamp [lo, hi]");
    if (!jclamp->is_array() || jclamp->size() != 2)
      fail(wd + ".clamp", "expected [lo, hi]");
    out.clamp_lo = num((*jclamp)[0], wd + ".clamp");
    out.clamp_hi = num((*jclamp)[1], wd + ".clamp");
    if (!(out.clamp_lo < out.clamp_hi))
      fail(wd + ".clamp", "needs lo < hi");
  } else if (jclamp) {
    fail(wd, "clamp only applies to the saturating form");
  }

  out.state_objective = maybe(jv, "state_objective");
  out.control_objective = maybe(jv, "control_objective");
  return out;
}

// Named scalar objective forms. The Lipschitz bound is exact for every
// form: abs and control-effort are piecewise linear with known slope, and
// the quadratic's slope is maximized at the far end of the bounded domain.
StalkMap build_objective(const json* spec, const Space& domain, bool on_state,
                         const VertexFile& vf, const std::string& where) {
  std::string form;
  double weight = 1.0;
  double target = 0.0;
  double scale = 1.0;
  if (spec) {
    if (!spec->is_object()) fail(where, "expected an object");
    check_keys(*spec, where, {"form", "target", "weight", "scale"});
    form = str(member(*spec, "form", where), where + ".form");
    if (const json* jw = maybe(*spec, "weight"))
      weight = num(*jw, where + ".weight");
    if (const json* jt = maybe(*spec, "target"))
      target = num(*jt, where + ".target");
    if (const json* jscale = maybe(*spec, "scale")) {
      scale = num(*jscale, where + ".scale");
      if (scale == 0.0) fail(where + ".scale", "must be nonzero");
    }
  } else if (on_state && vf.nominal) {
    form = "abs";
    target = vf.nominal->operational;
    scale = vf.nominal->operational - vf.nominal->failed;
  } else {
    form = "zero";
  }

  if (form == "zero")
    return scalar_map(
        domain, [](const Point&) { return 0.0; }, 0.0, "exact");
  if (form == "abs") {
    const double w = weight, t = target, s = scale;
    return scalar_map(
        domain,
        [w, t, s](const Point& p) { return w * std::abs(p[0] - t) / s; },
        std::abs(weight / scale), "exact");
  }
  if (form == "quadratic") {
    const double lo = domain.signature.at(0).lo;
    const double hi = domain.signature.at(0).hi;
    const double reach = std::max(std::abs(lo - target),
                                  std::abs(hi - target));
    const double w = weight, t = target, s = scale;
    return scalar_map(
        domain,
        [w, t, s](const Point& p) {
          return w * (p[0] - t) * (p[0] - t) / s;
        },
        std::abs(2.0 * weight * reach / scale), "exact");
  }
  if (form == "control-effort") {
    if (on_state) fail(where, "control-effort is a control-side form");
    const double w = weight;
    const double c0 = vf.control_off;
    const double gap = std::abs(vf.control_on - vf.control_off);
    return scalar_map(
        domain,
        [w, c0, gap](const Point& p) {
          return w * std::abs(p[0] - c0) / gap;
        },
        std::abs(weight) / gap, "exact");
  }
  fail(where + ".form", "unknown form '" + form + "'");
}

}  // namespace

LoadedProblem parse_problem(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!root.is_object()) fail("", "the top level must be an object");
  check_keys(root, "",
             {"schema_version", "graph", "horizon", "vertices", "solver"});

  const json& jver = member(root, "schema_version", "");
  if (!jver.is_number_integer() || jver.get<int>() != 1)
    fail("schema_version", "this reader understands version 1");

  const json& jg = member(root, "graph", "");
  if (!jg.is_object()) fail("graph", "expected an object");
  check_keys(jg, "graph", {"vertices", "edges"});
  const json& jvs = member(jg, "vertices", "graph");
  if (!jvs.is_array() || jvs.empty())
    fail("graph.vertices", "expected a nonempty array");
  std::vector<std::string> names;
  std::set<std::string> seen;
  for (const auto& e : jvs) {
    std::string v = str(e, "graph.vertices");
    if (!seen.insert(v).second)
      fail("graph.vertices", "duplicate vertex '" + v + "'");
    names.push_back(std::move(v));
  }
  const json& jes = member(jg, "edges", "graph");
  if (!jes.is_array()) fail("graph.edges", "expected an array");
  std::vector<std::pair<std::string, std::string>> edges;
  for (const auto& e : jes) {
    if (!e.is_array() || e.size() != 2)
      fail("graph.edges", "each edge is [from, to]");
    std::string a = str(e[0], "graph.edges");
    std::string b = str(e[1], "graph.edges");
    if (!seen.count(a)) fail("graph.edges", "unknown vertex '" + a + "'");
    if (!seen.count(b)) fail("graph.edges", "unknown vertex '" + b + "'");
    edges.emplace_back(std::move(a), std::move(b));
  }
  DirectedGraph g = make_graph(names, edges);

  int horizon = 1;
  if (const json* jh = maybe(root, "horizon")) {
    if (!jh->is_number_integer()) fail("horizon", "expected an integer");
    horizon = jh->get<int>();
    if (horizon < 1 || horizon > 64) fail("horizon", "expected 1..64");
  }

  const json& jvtx = member(root, "vertices", "");
  if (!jvtx.is_object()) fail("vertices", "expected an object");
  for (const auto& item : jvtx.items())
    if (!seen.count(item.key()))
      fail("vertices", "unknown vertex '" + item.key() + "'");
  std::map<std::string, VertexFile> files;
  for (const auto& v : g.vertices) {
    const json* jv = maybe(jvtx, v.c_str());
    if (!jv) fail("vertices", "missing block for vertex '" + v + "'");
    files.emplace(v, parse_vertex(*jv, "vertices." + v));
  }

  std::size_t with_nominal = 0;
  for (const auto& [v, vf] : files)
    if (vf.nominal) ++with_nominal;
  if (with_nominal != 0 && with_nominal != files.size())
    fail("vertices", "nominal blocks must cover every vertex or none");

  LoadedProblem out;
  out.problem.graph = g;
  out.problem.horizon = horizon;

  AffineDynamics dyn;
  dyn.order = g.vertices;
  const std::size_t n = g.vertices.size();
  dyn.a = Matrix(n, n);
  dyn.b_diag.assign(n, 0.0);
  dyn.h.assign(n, 0.0);
  for (const auto& v : g.vertices) {
    const VertexFile& vf = files.at(v);
    const std::size_t jv = dyn_index(dyn, v);
    for (const auto& [w, coeff] : vf.state_coeffs) {
      if (!seen.count(w))
        fail("vertices." + v + ".dynamics.state_coeffs",
             "unknown vertex '" + w + "'");
      if (!g.has_edge(w, v))
        fail("vertices." + v + ".dynamics.state_coeffs",
             "coefficient on '" + w + "' has no edge " + w + " -> " + v);
      dyn.a.at(dyn_index(dyn, w), jv) = coeff;
    }
    dyn.b_diag[jv] = vf.control_coeff;
    dyn.h[jv] = vf.offset;
    if (vf.form != "affine") out.exact_affine = false;
  }

  std::map<std::string, Space> state_spaces;
  for (const auto& v : g.vertices) {
    const VertexFile& vf = files.at(v);
    Space s = Space::reals(1, vf.states.front() - 1.0, vf.states.back() + 1.0);
    auto pts = std::make_shared<std::vector<Point>>();
    for (double x : vf.states) pts->push_back(Point{x});
    FeasibleSet f;
    f.points = std::move(pts);
    s.feasible = std::move(f);
    state_spaces.emplace(v, std::move(s));
  }

  for (const auto& v : g.vertices) {
    const VertexFile& vf = files.at(v);
    VertexModel m;
    m.state_space = state_spaces.at(v);
    m.control_space =
        Space::reals(1, std::min(vf.control_off, vf.control_on),
                     std::max(vf.control_off, vf.control_on));
    {
      auto pts = std::make_shared<std::vector<Point>>();
      pts->push_back(Point{std::min(vf.control_off, vf.control_on)});
      pts->push_back(Point{std::max(vf.control_off, vf.control_on)});
      FeasibleSet f;
      f.points = std::move(pts);
      m.control_space.feasible = std::move(f);
    }
    m.tuple_space = tuple_signature(g, state_spaces, m.control_space, v);

    std::vector<std::string> nbrs = neighborhood(g, v);
    std::size_t count = 2;
    for (const auto& w : nbrs) {
      count *= files.at(w).states.size();
      if (count > 65536)
        fail("vertices." + v, "feasible tuple set larger than 65536 points");
    }
    auto pts = std::make_shared<std::vector<Point>>();
    pts->reserve(count);
    for (double c : {vf.control_off, vf.control_on}) {
      std::vector<std::size_t> idx(nbrs.size(), 0);
      while (true) {
        Point t(1 + nbrs.size());
        t[0] = c;
        for (std::size_t i = 0; i < nbrs.size(); ++i)
          t[1 + i] = files.at(nbrs[i]).states[idx[i]];
        pts->push_back(std::move(t));
        std::size_t i = 0;
        for (; i < idx.size(); ++i) {
          if (++idx[i] < files.at(nbrs[i]).states.size()) break;
          idx[i] = 0;
        }
        if (i == idx.size()) break;
      }
    }
    std::sort(pts->begin(), pts->end());
    FeasibleSet f;
    f.points = std::move(pts);
    m.tuple_space.feasible = std::move(f);

    StalkMap affine =
        dynamics_component(g, dyn, v, m.tuple_space, m.state_space);
    if (vf.form == "affine") {
      m.dynamics = std::move(affine);
    } else {
      StalkMap sat;
      sat.domain = affine.domain;
      sat.codomain = affine.codomain;
      const double lo = vf.clamp_lo, hi = vf.clamp_hi;
      auto inner = affine.fn;
      sat.fn = [inner, lo, hi](const Point& p) {
        Point out = inner(p);
        for (double& x : out) x = std::clamp(x, lo, hi);
        return out;
      };
      // Componentwise clamping never expands distances, so the affine
      // part's bound carries over unchanged.
      sat.lipschitz = affine.lipschitz;
      sat.lipschitz_provenance = affine.lipschitz_provenance;
      m.dynamics = std::move(sat);
    }

    m.state_objective =
        build_objective(vf.state_objective, m.state_space, true, vf,
                        "vertices." + v + ".state_objective");
    m.control_objective =
        build_objective(vf.control_objective, m.tuple_space, false, vf,
                        "vertices." + v + ".control_objective");
    out.problem.vertices.emplace(v, std::move(m));
  }

  if (with_nominal == files.size()) {
    NominalStates ns;
    for (const auto& [v, vf] : files) ns.emplace(v, *vf.nominal);
    out.nominals = std::move(ns);
  }
  out.dynamics = std::move(dyn);

  if (const json* jsolver = maybe(root, "solver")) {
    const std::string w = "solver";
    if (!jsolver->is_object()) fail(w, "expected an object");
    check_keys(*jsolver, w, {"mode", "seed", "budget", "tolerance"});
    if (const json* jm = maybe(*jsolver, "mode")) {
      out.solver.mode = str(*jm, w + ".mode");
      if (out.solver.mode != "constrained" && out.solver.mode != "relaxed" &&
          out.solver.mode != "both")
        fail(w + ".mode", "use constrained, relaxed, or both");
    }
    if (const json* jseed = maybe(*jsolver, "seed")) {
      if (!jseed->is_number_unsigned()) fail(w + ".seed", "expected >= 0");
      out.solver.seed = jseed->get<std::uint64_t>();
    }
    if (const json* jb = maybe(*jsolver, "budget")) {
      if (!jb->is_number_unsigned() || jb->get<std::uint64_t>() == 0)
        fail(w + ".budget", "expected a positive integer");
      out.solver.budget = jb->get<std::size_t>();
    }
    if (const json* jt = maybe(*jsolver, "tolerance")) {
      out.solver.tolerance = num(*jt, w + ".tolerance");
      if (out.solver.tolerance <= 0.0)
        fail(w + ".tolerance", "expected > 0");
    }
  }

  return out;
}

LoadedProblem load_problem(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read problem file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_problem(buf.str());
}

}  // namespace netsheaf

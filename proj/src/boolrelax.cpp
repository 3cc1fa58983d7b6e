#include "netsheaf/boolrelax.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <utility>

#include "netsheaf/errors.hpp"
#include "netsheaf/exec.hpp"

namespace netsheaf {
namespace {

constexpr std::size_t kExhaustiveCap = 65536;
constexpr std::size_t kSampleCount = 256;

double euclid(const Point& p) {
  double sq = 0.0;
  for (double x : p) sq += x * x;
  return std::sqrt(sq);
}

bool sig_equal(const Space& a, const Space& b) {
  if (a.dim() != b.dim()) return false;
  for (std::size_t i = 0; i < a.dim(); ++i)
    if (a.signature[i].tag != b.signature[i].tag) return false;
  return true;
}

bool all_boolean(const Space& s) {
  for (const auto& c : s.signature)
    if (c.tag != CoordTag::Boolean) return false;
  return true;
}

const VertexScheme& scheme_at(const ThresholdingScheme& ts,
                              const std::string& v) {
  auto it = ts.vertices.find(v);
  if (it == ts.vertices.end())
    throw SchemeInvalid("no thresholding scheme for vertex " + v);
  return it->second;
}

// Every feasible point when the set is finite and small enough, a seeded
// sample otherwise.
std::pair<std::vector<Point>, std::string> scan_points(const Space& s,
                                                       std::uint64_t seed) {
  if (s.feasible && s.feasible->finite() &&
      s.feasible->points->size() <= kExhaustiveCap)
    return {*s.feasible->points, "exhaustive"};
  return {sample_points(s, kSampleCount, seed), "estimated"};
}

Point block(const Point& x, std::size_t lo, std::size_t hi) {
  return Point(x.begin() + static_cast<std::ptrdiff_t>(lo),
               x.begin() + static_cast<std::ptrdiff_t>(hi));
}

bool near_member(const Space& s, const std::vector<Point>& pts, const Point& x,
                 double tol) {
  for (const auto& q : pts)
    if (s.distance(q, x) <= tol) return true;
  return false;
}

// "t<k>/<layer>/<object>"
struct ParsedName {
  int step = 0;
  char layer = 0;
  std::string object;
};

ParsedName parse_step_name(const std::string& name) {
  auto first = name.find('/');
  if (name.empty() || name[0] != 't' || first == std::string::npos ||
      first + 2 >= name.size() || name[first + 2] != '/')
    throw UnknownElement("not a rollout element name: " + name);
  ParsedName out;
  out.step = std::stoi(name.substr(1, first - 1));
  out.layer = name[first + 1];
  out.object = name.substr(first + 3);
  return out;
}

std::string own_vertex(const std::string& object) {
  // "U:v" or "v:w"
  return object.substr(2);
}

int provenance_rank(const std::string& p) {
  if (p == "exact") return 0;
  if (p == "declared") return 1;
  if (p == "exhaustive") return 2;
  return 3;  // estimated or unknown
}

const char* rank_name(int r) {
  switch (r) {
    case 0: return "exact";
    case 1: return "declared";
    case 2: return "exhaustive";
    default: return "estimated";
  }
}

}  // namespace

StalkMap build_sigma(const NetworkProblem& p, const ThresholdingScheme& ts,
                     const std::string& v) {
  const VertexModel& model = p.vertices.at(v);
  const VertexScheme& vs = scheme_at(ts, v);
  struct Block {
    std::size_t lo, hi;
    StalkMap m;
  };
  auto blocks = std::make_shared<std::vector<Block>>();
  blocks->push_back({0, model.control_space.dim(), vs.chi});
  for (const auto& w : neighborhood(p.graph, v)) {
    auto [lo, hi] = tuple_state_span(p, v, w);
    blocks->push_back({lo, hi, scheme_at(ts, w).tau});
  }
  StalkMap m;
  m.domain = model.tuple_space;
  m.codomain = vs.tuple_b;
  m.fn = [blocks](const Point& x) {
    Point out;
    out.reserve(x.size());
    for (const auto& b : *blocks) {
      Point img = b.m(block(x, b.lo, b.hi));
      out.insert(out.end(), img.begin(), img.end());
    }
    return out;
  };
  // Thresholding has jumps; no finite Lipschitz bound is claimed.
  return m;
}

void validate_scheme(const NetworkProblem& p, const ThresholdingScheme& ts) {
  for (const auto& v : p.graph.vertices) {
    const VertexScheme& vs = scheme_at(ts, v);
    const VertexModel& model = p.vertices.at(v);
    auto fail = [&](const std::string& what) {
      throw SchemeInvalid("vertex " + v + ": " + what);
    };
    if (!all_boolean(vs.state_b) || !all_boolean(vs.control_b) ||
        !all_boolean(vs.tuple_b))
      fail("Boolean spaces must have all-Boolean signatures");
    if (vs.state_b.dim() != model.state_space.dim())
      fail("Boolean state dimension differs from the state dimension");
    if (vs.control_b.dim() != model.control_space.dim())
      fail("Boolean control dimension differs from the control dimension");
    if (vs.tuple_b.dim() != model.tuple_space.dim())
      fail("Boolean tuple dimension differs from the tuple dimension");
    if (!vs.tuple_b.feasible || !vs.tuple_b.feasible->finite())
      fail("the Boolean tuple space needs a finite feasible set");
    if (!sig_equal(vs.tau.domain, model.state_space) ||
        !sig_equal(vs.tau.codomain, vs.state_b))
      fail("tau must map the state space to the Boolean state space");
    if (!sig_equal(vs.chi.domain, model.control_space) ||
        !sig_equal(vs.chi.codomain, vs.control_b))
      fail("chi must map the control space to the Boolean control space");
    if (!sig_equal(vs.gamma.domain, vs.tuple_b) ||
        !sig_equal(vs.gamma.codomain, model.tuple_space))
      fail("gamma must map the Boolean tuple space to the tuple space");
    if (!sig_equal(vs.gamma_state.domain, vs.state_b) ||
        !sig_equal(vs.gamma_state.codomain, model.state_space))
      fail("gamma_state must map the Boolean state space to the state space");
    if (!sig_equal(vs.f_tilde.domain, vs.tuple_b) ||
        !sig_equal(vs.f_tilde.codomain, vs.state_b))
      fail("f_tilde must map the Boolean tuple space to the Boolean state "
           "space");
  }
  // Semantic checks on the (finite or sampled) feasible sets.
  for (const auto& v : p.graph.vertices) {
    const VertexScheme& vs = scheme_at(ts, v);
    const VertexModel& model = p.vertices.at(v);
    auto fail = [&](const std::string& what) {
      throw SchemeInvalid("vertex " + v + ": " + what);
    };
    StalkMap sigma = build_sigma(p, ts, v);
    auto [orig, op] = scan_points(model.tuple_space, 0x5c4eULL);
    const auto& bpts = *vs.tuple_b.feasible->points;
    for (const auto& r : orig) {
      Point b = sigma(r);
      if (!vs.tuple_b.matches(b))
        fail("quantization produced a non-Boolean tuple");
      if (op == std::string("exhaustive") &&
          !near_member(vs.tuple_b, bpts, b, 1e-9))
        fail("quantization leaves the Boolean feasible set");
    }
    auto [lo, hi] = tuple_state_span(p, v, v);
    const bool orig_finite = model.tuple_space.feasible &&
                             model.tuple_space.feasible->finite();
    for (const auto& b : bpts) {
      Point x = vs.gamma(b);
      if (orig_finite &&
          !near_member(model.tuple_space, *model.tuple_space.feasible->points,
                       x, 1e-9))
        fail("lift leaves the feasible set");
      Point own_lift = vs.gamma_state(block(b, lo, hi));
      Point own_ref = block(x, lo, hi);
      if (vs.gamma_state.codomain.distance(own_lift, own_ref) > 1e-9)
        fail("gamma and gamma_state disagree on the own-state block");
      if (!vs.state_b.matches(vs.f_tilde(b)))
        fail("f_tilde produced a non-Boolean state");
    }
  }
}

SupValue omega1(const NetworkProblem& p, const ThresholdingScheme& ts,
                const std::string& v) {
  const VertexModel& model = p.vertices.at(v);
  const VertexScheme& vs = scheme_at(ts, v);
  auto [pts, prov] = scan_points(vs.tuple_b, 0x01ULL);
  double best = 0.0;
  for (const auto& b : pts) {
    Point via_bool = vs.f_tilde(b);
    Point via_orig = vs.tau(model.dynamics(vs.gamma(b)));
    best = std::max(best, vs.state_b.distance(via_bool, via_orig));
  }
  return {best, prov};
}

SupValue omega2(const NetworkProblem& p, const ThresholdingScheme& ts,
                const std::string& v) {
  const VertexModel& model = p.vertices.at(v);
  const VertexScheme& vs = scheme_at(ts, v);
  StalkMap sigma = build_sigma(p, ts, v);
  auto [pts, prov] = scan_points(model.tuple_space, 0x02ULL);
  double best = 0.0;
  for (const auto& r : pts)
    best = std::max(best, model.tuple_space.distance(vs.gamma(sigma(r)), r));
  return {best, prov};
}

SupValue sigma_norm(const NetworkProblem& p, const ThresholdingScheme& ts,
                    const std::string& v) {
  const VertexModel& model = p.vertices.at(v);
  StalkMap sigma = build_sigma(p, ts, v);
  auto [pts, prov] = scan_points(model.tuple_space, 0x03ULL);
  double best = 0.0;
  for (const auto& r : pts) best = std::max(best, euclid(sigma(r)));
  return {best, prov};
}

SupValue tau_f_norm(const NetworkProblem& p, const ThresholdingScheme& ts,
                    const std::string& v) {
  const VertexModel& model = p.vertices.at(v);
  const VertexScheme& vs = scheme_at(ts, v);
  auto [pts, prov] = scan_points(model.tuple_space, 0x04ULL);
  double best = 0.0;
  for (const auto& r : pts)
    best = std::max(best, euclid(vs.tau(model.dynamics(r))));
  return {best, prov};
}

std::pair<double, double> thresholding_error_bound(
    const NetworkProblem& p, const ThresholdingScheme& ts,
    const std::string& v) {
  const VertexModel& model = p.vertices.at(v);
  const VertexScheme& vs = scheme_at(ts, v);
  StalkMap sigma = build_sigma(p, ts, v);
  auto [pts, prov] = scan_points(model.tuple_space, 0x05ULL);
  (void)prov;
  double lhs = 0.0;
  for (const auto& r : pts) {
    Point via_bool = vs.f_tilde(sigma(r));
    Point via_orig = vs.tau(model.dynamics(r));
    lhs = std::max(lhs, vs.state_b.distance(via_bool, via_orig));
  }
  double rhs = omega1(p, ts, v).value * sigma_norm(p, ts, v).value +
               omega2(p, ts, v).value * tau_f_norm(p, ts, v).value;
  return {lhs, rhs};
}

ErrorBudget compute_error_budget(const EncodedProblem& e,
                                 const ThresholdingScheme& ts) {
  const NetworkProblem& p = e.problem;
  ErrorBudget out;
  int worst_rank = 0;
  for (const auto& v : p.graph.vertices) {
    const VertexScheme& vs = scheme_at(ts, v);
    const VertexModel& model = p.vertices.at(v);
    VertexBudget row;
    row.vertex = v;
    SupValue w1 = omega1(p, ts, v);
    SupValue w2 = omega2(p, ts, v);
    SupValue sn = sigma_norm(p, ts, v);
    SupValue tn = tau_f_norm(p, ts, v);
    row.omega1 = w1.value;
    row.omega2 = w2.value;
    row.sigma_norm = sn.value;
    row.tau_f_norm = tn.value;
    row.eps = w1.value * sn.value + w2.value * tn.value;
    const bool exhaustive = w1.provenance == "exhaustive" &&
                            w2.provenance == "exhaustive" &&
                            sn.provenance == "exhaustive" &&
                            tn.provenance == "exhaustive";
    row.provenance = exhaustive ? "exhaustive" : "estimated";
    out.eps = std::max(out.eps, row.eps);
    out.rows.push_back(std::move(row));

    for (const StalkMap* m : {&vs.gamma, &vs.gamma_state, &model.dynamics,
                              &model.control_objective,
                              &model.state_objective}) {
      LipschitzInfo info = lipschitz_info(*m, 64, 0x11bULL);
      out.lipschitz = std::max(out.lipschitz, info.value);
      worst_rank = std::max(worst_rank, provenance_rank(info.provenance));
    }
  }
  out.lipschitz_provenance = rank_name(worst_rank);
  out.structure =
      std::sqrt(static_cast<double>(e.network->base().pairs().size()));
  return out;
}

NetworkProblem boolean_problem(const NetworkProblem& p,
                               const ThresholdingScheme& ts) {
  NetworkProblem bp;
  bp.graph = p.graph;
  bp.horizon = p.horizon;
  for (const auto& [v, model] : p.vertices) {
    const VertexScheme& vs = scheme_at(ts, v);
    VertexModel m;
    m.state_space = vs.state_b;
    m.control_space = vs.control_b;
    m.tuple_space = vs.tuple_b;
    m.dynamics = vs.f_tilde;
    m.state_objective = compose(model.state_objective, vs.gamma_state);
    m.control_objective = compose(model.control_objective, vs.gamma);
    bp.vertices.emplace(v, std::move(m));
  }
  return bp;
}

ThresholdedSheaves build_thresholded_sheaves(const EncodedProblem& e,
                                             const ThresholdingScheme& ts) {
  validate_scheme(e.problem, ts);
  const NetworkProblem& p = e.problem;
  ThresholdedSheaves out;
  out.boolean = encode_problem(boolean_problem(p, ts));

  // network -> Boolean network (quantize) and its lift back.
  OrderMap face_id;
  std::map<std::string, StalkMap> qparts, lparts;
  for (const auto& v : p.graph.vertices) {
    const VertexScheme& vs = scheme_at(ts, v);
    face_id.map[neighborhood_element(v)] = neighborhood_element(v);
    face_id.map[vertex_element(v)] = vertex_element(v);
    qparts[neighborhood_element(v)] = build_sigma(p, ts, v);
    qparts[vertex_element(v)] = vs.tau;
    lparts[neighborhood_element(v)] = vs.gamma;
    lparts[vertex_element(v)] = vs.gamma_state;
  }
  out.quantize =
      make_morphism(e.network, out.boolean.network, face_id, qparts);
  out.lift = make_morphism(out.boolean.network, e.network, face_id, lparts);

  OrderMap land_id;
  std::map<std::string, StalkMap> tparts;
  for (const auto& v : p.graph.vertices) {
    land_id.map[neighborhood_element(v)] = neighborhood_element(v);
    tparts[neighborhood_element(v)] = scheme_at(ts, v).tau;
  }
  out.quantize_states =
      make_morphism(e.state_layer, out.boolean.state_layer, land_id, tparts);

  // scored rollout -> Boolean scored rollout: sigma on tuple stalks, tau on
  // state stalks, identity on score and pin stalks.
  OrderMap roll_id;
  std::map<std::string, StalkMap> rparts;
  for (const auto& name : out.boolean.scored_rollout->base().elements()) {
    roll_id.map[name] = name;
    ParsedName pn = parse_step_name(name);
    if (pn.layer == 'N') {
      if (pn.object.rfind("U:", 0) == 0)
        rparts[name] = build_sigma(p, ts, own_vertex(pn.object));
      else
        rparts[name] = scheme_at(ts, own_vertex(pn.object)).tau;
    } else if (pn.layer == 'L') {
      rparts[name] = scheme_at(ts, own_vertex(pn.object)).tau;
    } else {
      rparts[name] = identity_map(e.scored_rollout->stalk(name));
    }
  }
  out.quantize_full = make_morphism(e.scored_rollout,
                                    out.boolean.scored_rollout, roll_id,
                                    rparts);
  return out;
}

Assignment lift_assignment(const EncodedProblem& e,
                           const ThresholdedSheaves& th, const Assignment& r) {
  const Sheaf& bs = *th.boolean.scored_rollout;
  const Sheaf& os = *e.scored_rollout;
  if (r.values.size() != bs.base().size() || !r.total())
    throw SupportMismatch(
        "lift_assignment needs a total Boolean scored-rollout assignment");
  Assignment out = make_assignment(os);
  const Poset& net_base = e.network->base();
  for (std::size_t i = 0; i < bs.base().size(); ++i) {
    const std::string& name = bs.base().name(i);
    ParsedName pn = parse_step_name(name);
    const Point& val = *r.values[i];
    Point lifted;
    if (pn.layer == 'N') {
      lifted = th.lift.components[net_base.index_of(pn.object)](val);
    } else if (pn.layer == 'L') {
      const std::string ve = vertex_element(own_vertex(pn.object));
      lifted = th.lift.components[net_base.index_of(ve)](val);
    } else {
      lifted = val;
    }
    set_value(os, out, name, std::move(lifted));
  }
  return out;
}

std::vector<StepBound> bound_chain(const EncodedProblem& e,
                                     const ThresholdedSheaves& th,
                                     const ErrorBudget& budget,
                                     const Assignment& r, const Assignment& s,
                                     const ExecPolicy& exec) {
  std::vector<StepBound> rows;
  const double slack = budget.structure * budget.eps;
  for (int k = 0; k < e.horizon; ++k) {
    Assignment rk = restrict_network_step(th.boolean, r, k);
    Assignment sk = restrict_network_step(e, s, k);
    if (!is_global_section(*e.network, sk, 1e-9))
      throw NotASection("reference assignment is not a network section at "
                        "step " + std::to_string(k));
    Assignment lifted = apply_morphism(th.lift, rk);
    StepBound row;
    row.step = k;
    row.lhs = consistency_radius(*th.boolean.network, rk, exec);
    row.mid = budget.lipschitz * consistency_radius(*e.network, lifted, exec) +
              slack;
    row.rhs = 2.0 * budget.lipschitz *
                  assignment_distance(*e.network, sk, lifted) +
              slack;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace netsheaf
